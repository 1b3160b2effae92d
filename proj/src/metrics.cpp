#include "pipemap/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace pipemap {

namespace {

// prod f_u over the interval. Underflow to zero is harmless: the interval
// then contributes a survival factor of 1 to within rounding anyway.
double interval_failure(const Platform& platform, const Interval& iv) {
  double q = 1.0;
  for (std::size_t u : iv.procs) q *= platform.processor(u).failure_prob;
  return iv.procs.empty() ? 0.0 : q;
}

}  // namespace

double failure_probability(const Platform& platform, const Mapping& mapping) {
  // log prod_j (1 - q_j), accumulated with log1p for accuracy near q_j = 0.
  double log_survival = 0.0;
  for (const Interval& iv : mapping.intervals) {
    log_survival += std::log1p(-interval_failure(platform, iv));
  }
  const double fp = -std::expm1(log_survival);
  return std::clamp(fp, 0.0, 1.0);
}

namespace {

bool links_present(const Platform& platform, const Mapping& mapping) {
  const auto& intervals = mapping.intervals;
  for (std::size_t u : intervals.front().procs) {
    if (!platform.bandwidth(Endpoint::in(), Endpoint::proc(u))) return false;
  }
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    for (std::size_t u : intervals[j].procs) {
      if (j + 1 == intervals.size()) {
        if (!platform.bandwidth(Endpoint::proc(u), Endpoint::out())) {
          return false;
        }
        continue;
      }
      for (std::size_t v : intervals[j + 1].procs) {
        if (u != v &&
            !platform.bandwidth(Endpoint::proc(u), Endpoint::proc(v))) {
          return false;
        }
      }
    }
  }
  return true;
}

double latency_with_bandwidth(const Pipeline& pipeline,
                              const Platform& platform, const Mapping& mapping,
                              double b) {
  if (!links_present(platform, mapping)) return kInfeasibleLatency;
  double latency = 0.0;
  for (const Interval& iv : mapping.intervals) {
    double slowest = std::numeric_limits<double>::infinity();
    for (std::size_t u : iv.procs) {
      slowest = std::min(slowest, platform.processor(u).speed);
    }
    const double k = static_cast<double>(iv.procs.size());
    latency += k * pipeline.volume(iv.first - 1) / b +
               pipeline.total_work(iv.first, iv.last) / slowest;
  }
  return latency + pipeline.volume(pipeline.stages()) / b;
}

}  // namespace

double latency_homogeneous_links(const Pipeline& pipeline,
                                 const Platform& platform,
                                 const Mapping& mapping) {
  const std::optional<double> b = common_bandwidth(platform);
  if (!b) {
    throw std::invalid_argument(
        "homogeneous-link latency requested on a platform with "
        "heterogeneous links");
  }
  return latency_with_bandwidth(pipeline, platform, mapping, *b);
}

double latency_heterogeneous(const Pipeline& pipeline, const Platform& platform,
                             const Mapping& mapping) {
  const auto& intervals = mapping.intervals;
  auto transfer = [&](double volume, Endpoint from,
                      Endpoint to) -> std::optional<double> {
    if (from == to) return 0.0;
    const std::optional<double> bw = platform.bandwidth(from, to);
    if (!bw) return std::nullopt;
    return volume / *bw;
  };

  double latency = 0.0;
  for (std::size_t u : intervals.front().procs) {
    const auto cost = transfer(pipeline.volume(0), Endpoint::in(),
                               Endpoint::proc(u));
    if (!cost) return kInfeasibleLatency;
    latency += *cost;
  }

  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const Interval& iv = intervals[j];
    const double work = pipeline.total_work(iv.first, iv.last);
    const double volume = pipeline.volume(iv.last);
    const bool last = j + 1 == intervals.size();

    double worst = 0.0;
    for (std::size_t u : iv.procs) {
      double cost = work / platform.processor(u).speed;
      if (last) {
        const auto send = transfer(volume, Endpoint::proc(u), Endpoint::out());
        if (!send) return kInfeasibleLatency;
        cost += *send;
      } else {
        for (std::size_t v : intervals[j + 1].procs) {
          const auto send =
              transfer(volume, Endpoint::proc(u), Endpoint::proc(v));
          if (!send) return kInfeasibleLatency;
          cost += *send;
        }
      }
      worst = std::max(worst, cost);
    }
    latency += worst;
  }
  return latency;
}

Evaluation evaluate(const Pipeline& pipeline, const Platform& platform,
                    const Mapping& mapping) {
  return Evaluator(pipeline, platform)(mapping);
}

Evaluator::Evaluator(const Pipeline& pipeline, const Platform& platform)
    : pipeline_(pipeline),
      platform_(platform),
      bandwidth_(common_bandwidth(platform)) {}

Evaluation Evaluator::operator()(const Mapping& mapping) const {
  Evaluation result;
  result.latency =
      bandwidth_
          ? latency_with_bandwidth(pipeline_, platform_, mapping, *bandwidth_)
          : latency_heterogeneous(pipeline_, platform_, mapping);
  result.failure_prob = failure_probability(platform_, mapping);
  return result;
}

}  // namespace pipemap
