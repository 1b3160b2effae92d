#include "pipemap/poly_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pipemap/metrics.hpp"

namespace pipemap::poly {

namespace {

void require_homogeneous_links(const PlatformClass& cls, const char* solver) {
  if (!cls.homogeneous_links()) {
    throw std::invalid_argument(std::string(solver) +
                                " requires homogeneous links");
  }
}

void require_fully_homogeneous(const PlatformClass& cls, const char* solver) {
  if (!cls.fully_homogeneous()) {
    throw std::invalid_argument(std::string(solver) +
                                " requires a Fully Homogeneous platform");
  }
}

void require_homogeneous_failures(const PlatformClass& cls,
                                  const char* solver) {
  require_homogeneous_links(cls, solver);
  if (!cls.homogeneous_failures()) {
    throw std::invalid_argument(
        std::string(solver) +
        " requires identical failure probabilities; use the exact solver");
  }
}

// Drops processors that cannot host the whole pipeline alone (no in->u or
// no u->out link).
std::vector<std::size_t> usable(const Platform& platform,
                                std::vector<std::size_t> order) {
  std::erase_if(order, [&](std::size_t u) {
    return !platform.bandwidth(Endpoint::in(), Endpoint::proc(u)) ||
           !platform.bandwidth(Endpoint::proc(u), Endpoint::out());
  });
  if (order.empty()) {
    throw std::invalid_argument(
        "no processor is linked to both in and out; a single-interval "
        "mapping is impossible");
  }
  return order;
}

std::vector<std::size_t> prefix(const std::vector<std::size_t>& order,
                                std::size_t k) {
  return {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)};
}

// Smallest prefix of `order` whose single-interval failure probability meets
// the bound.
std::optional<Mapping> smallest_reliable_prefix(
    const Pipeline& pipeline, const Platform& platform,
    const std::vector<std::size_t>& order, double max_failure_prob) {
  for (std::size_t k = 1; k <= order.size(); ++k) {
    Mapping candidate = single_interval(pipeline.stages(), prefix(order, k));
    if (within_bound(failure_probability(platform, candidate),
                     max_failure_prob)) {
      return candidate;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::size_t> by_reliability(const Platform& platform) {
  std::vector<std::size_t> order(platform.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return platform.processor(a).failure_prob <
                            platform.processor(b).failure_prob;
                   });
  return order;
}

std::vector<std::size_t> by_speed(const Platform& platform) {
  std::vector<std::size_t> order(platform.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return platform.processor(a).speed >
                            platform.processor(b).speed;
                   });
  return order;
}

Mapping min_failure_prob(const Pipeline& pipeline, const Platform& platform) {
  std::vector<std::size_t> all(platform.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return single_interval(pipeline.stages(), usable(platform, std::move(all)));
}

Mapping min_latency_comm_homogeneous(const Pipeline& pipeline,
                                     const Platform& platform) {
  require_homogeneous_links(classify_platform(platform),
                            "min_latency_comm_homogeneous");
  return single_interval(pipeline.stages(),
                         {usable(platform, by_speed(platform)).front()});
}

std::optional<Mapping> min_failure_prob_fully_homogeneous(
    const Pipeline& pipeline, const Platform& platform, double max_latency) {
  require_fully_homogeneous(classify_platform(platform),
                            "min_failure_prob_fully_homogeneous");
  const double b = *common_bandwidth(platform);
  const double s = platform.processor(0).speed;
  const std::vector<std::size_t> order =
      usable(platform, by_reliability(platform));
  const std::size_t m = order.size();
  const double delta0 = pipeline.volume(0);
  const double fixed =
      pipeline.total_work() / s + pipeline.volume(pipeline.stages()) / b;

  auto latency_for = [&](std::size_t k) {
    return latency_homogeneous_links(
        pipeline, platform, single_interval(pipeline.stages(), prefix(order, k)));
  };

  std::size_t k = 0;
  if (delta0 == 0.0) {
    k = within_bound(fixed, max_latency) ? m : 0;
  } else if (std::isinf(max_latency)) {
    k = m;
  } else {
    // k = floor(b / delta_0 * (L - delta_n / b - sum(w) / s)), then nudged so
    // the tolerance-aware check decides boundary cases.
    const double raw = std::floor(b / delta0 * (max_latency - fixed));
    k = raw < 0.0 ? 0 : static_cast<std::size_t>(std::min<double>(raw, m));
    while (k < m && within_bound(latency_for(k + 1), max_latency)) ++k;
    while (k > 0 && !within_bound(latency_for(k), max_latency)) --k;
  }
  if (k == 0) return std::nullopt;
  return single_interval(pipeline.stages(), prefix(order, k));
}

std::optional<Mapping> min_latency_fully_homogeneous(const Pipeline& pipeline,
                                                     const Platform& platform,
                                                     double max_failure_prob) {
  require_fully_homogeneous(classify_platform(platform),
                            "min_latency_fully_homogeneous");
  return smallest_reliable_prefix(pipeline, platform,
                                  usable(platform, by_reliability(platform)),
                                  max_failure_prob);
}

std::optional<Mapping> min_failure_prob_comm_homogeneous(
    const Pipeline& pipeline, const Platform& platform, double max_latency) {
  require_homogeneous_failures(classify_platform(platform),
                               "min_failure_prob_comm_homogeneous");
  const std::vector<std::size_t> order = usable(platform, by_speed(platform));
  // The bound is checked for each k independently and the largest feasible k
  // kept.
  std::optional<Mapping> best;
  for (std::size_t k = 1; k <= order.size(); ++k) {
    Mapping candidate = single_interval(pipeline.stages(), prefix(order, k));
    if (within_bound(latency_homogeneous_links(pipeline, platform, candidate),
                     max_latency)) {
      best = std::move(candidate);
    }
  }
  return best;
}

std::optional<Mapping> min_latency_comm_homogeneous(const Pipeline& pipeline,
                                                    const Platform& platform,
                                                    double max_failure_prob) {
  require_homogeneous_failures(classify_platform(platform),
                               "min_latency_comm_homogeneous");
  return smallest_reliable_prefix(pipeline, platform,
                                  usable(platform, by_speed(platform)),
                                  max_failure_prob);
}

}  // namespace pipemap::poly
