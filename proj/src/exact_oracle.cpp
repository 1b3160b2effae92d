#include "pipemap/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace pipemap::exact {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSaturated / b ? kSaturated : a * b;
}

// Ordered p-tuples of pairwise-disjoint non-empty subsets of m processors:
// labellings of m processors with {unused, 1..p} covering every interval.
std::uint64_t disjoint_allocations(std::size_t m, std::size_t p) {
  // ways[c]: labellings of the processors seen so far that use exactly c
  // distinct interval labels. The next processor stays unused or reuses one
  // of those c labels (c + 1 choices), or opens one of the p - c others.
  std::vector<std::uint64_t> ways(p + 1, 0);
  ways[0] = 1;
  for (std::size_t u = 0; u < m; ++u) {
    std::vector<std::uint64_t> next(p + 1, 0);
    for (std::size_t c = 0; c <= p; ++c) {
      if (ways[c] == 0) continue;
      next[c] = sat_add(next[c], sat_mul(ways[c], c + 1));
      if (c < p) next[c + 1] = sat_add(next[c + 1], sat_mul(ways[c], p - c));
    }
    ways = std::move(next);
  }
  return ways[p];
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = sat_mul(result, n - k + i) / i;
  }
  return result;
}

std::size_t interval_cap(std::size_t n, std::size_t m, std::size_t limit) {
  std::size_t cap = std::min(n, m);
  if (limit != 0) cap = std::min(cap, limit);
  return cap;
}

// within_bound on both criteria: a is at least as good as b.
bool covers(const Evaluation& a, const Evaluation& b) {
  return within_bound(a.latency, b.latency) &&
         within_bound(a.failure_prob, b.failure_prob);
}

// Incremental non-dominated set. Points arrive in priority order: a point
// equivalent to an earlier one is rejected.
class FrontBuilder {
 public:
  void offer(const Mapping& mapping, const Evaluation& eval) {
    if (!eval.feasible()) return;
    for (const FrontEntry& e : entries_) {
      if (covers(e.evaluation, eval)) return;
    }
    std::erase_if(entries_, [&](const FrontEntry& e) {
      return covers(eval, e.evaluation);
    });
    entries_.push_back({mapping, eval});
  }

  ParetoFront finish() && {
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const FrontEntry& a, const FrontEntry& b) {
                       return a.evaluation.latency < b.evaluation.latency;
                     });
    return ParetoFront{std::move(entries_)};
  }

 private:
  std::vector<FrontEntry> entries_;
};

void check_limits(std::size_t n, std::size_t m, const EnumLimits& limits,
                  std::uint64_t candidates, const char* what) {
  auto refuse = [&](const std::string& reason) {
    std::ostringstream msg;
    msg << what << " refused: " << reason << " (n=" << n << ", m=" << m
        << ", ~";
    if (candidates == kSaturated) {
      msg << ">1.8e19";
    } else {
      msg << candidates;
    }
    msg << " candidate mappings)";
    throw LimitsExceeded(msg.str());
  };
  if (n > limits.max_stages) {
    refuse("n exceeds max_stages=" + std::to_string(limits.max_stages));
  }
  if (m > limits.max_processors) {
    refuse("m exceeds max_processors=" + std::to_string(limits.max_processors));
  }
  if (candidates > limits.max_candidates) {
    refuse("candidate count exceeds max_candidates=" +
           std::to_string(limits.max_candidates));
  }
}

std::string format_number(double value) {
  std::ostringstream os;
  os << std::setprecision(12) << value;
  return os.str();
}

}  // namespace

std::uint64_t count_interval_mappings(std::size_t stages,
                                      std::size_t processors,
                                      std::size_t max_intervals) {
  if (stages == 0) return 0;
  std::uint64_t total = 0;
  const std::size_t cap = interval_cap(stages, processors, max_intervals);
  for (std::size_t p = 1; p <= cap; ++p) {
    total = sat_add(total, sat_mul(binomial(stages - 1, p - 1),
                                   disjoint_allocations(processors, p)));
  }
  return total;
}

void enumerate_interval_mappings(
    const Pipeline& pipeline, const Platform& platform,
    const EnumLimits& limits,
    const std::function<void(const Mapping&)>& visit) {
  const std::size_t n = pipeline.stages();
  const std::size_t m = platform.size();
  const std::size_t cap = interval_cap(n, m, limits.max_intervals);
  std::uint64_t estimate = kSaturated;
  if (n <= 63) estimate = count_interval_mappings(n, m, limits.max_intervals);
  check_limits(n, m, limits, estimate, "interval mapping enumeration");

  Mapping mapping;
  std::vector<std::size_t> labels(m);
  std::vector<std::size_t> sizes;
  const std::uint64_t masks = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    const std::size_t p = static_cast<std::size_t>(std::popcount(mask)) + 1;
    if (p > cap) continue;

    mapping.intervals.assign(p, Interval{});
    std::size_t j = 0;
    mapping.intervals[0].first = 1;
    for (std::size_t stage = 1; stage < n; ++stage) {
      if (mask & (std::uint64_t{1} << (stage - 1))) {
        mapping.intervals[j].last = stage;
        mapping.intervals[++j].first = stage + 1;
      }
    }
    mapping.intervals[p - 1].last = n;

    std::fill(labels.begin(), labels.end(), 0);
    while (true) {
      sizes.assign(p + 1, 0);
      for (std::size_t label : labels) ++sizes[label];
      if (std::all_of(sizes.begin() + 1, sizes.end(),
                      [](std::size_t s) { return s > 0; })) {
        for (Interval& iv : mapping.intervals) iv.procs.clear();
        for (std::size_t u = 0; u < m; ++u) {
          if (labels[u] != 0) mapping.intervals[labels[u] - 1].procs.push_back(u);
        }
        visit(mapping);
      }
      // Odometer step, processor 0 least significant, so allocations made of
      // low-index processors are visited first.
      std::size_t digit = 0;
      while (digit < m && labels[digit] == p) labels[digit++] = 0;
      if (digit == m) break;
      ++labels[digit];
    }
  }
}

ParetoFront pareto_front(const Pipeline& pipeline, const Platform& platform,
                         const EnumLimits& limits) {
  const Evaluator evaluate(pipeline, platform);
  FrontBuilder builder;
  enumerate_interval_mappings(pipeline, platform, limits,
                              [&](const Mapping& mapping) {
                                builder.offer(mapping, evaluate(mapping));
                              });
  return std::move(builder).finish();
}

ParetoFront filter_front(std::vector<FrontEntry> entries) {
  FrontBuilder builder;
  for (const FrontEntry& e : entries) builder.offer(e.mapping, e.evaluation);
  return std::move(builder).finish();
}

std::optional<FrontEntry> min_failure_prob_under_latency(
    const ParetoFront& front, double max_latency) {
  std::optional<FrontEntry> best;
  for (const FrontEntry& e : front.entries) {
    if (!within_bound(e.evaluation.latency, max_latency)) break;
    best = e;
  }
  return best;
}

std::optional<FrontEntry> min_latency_under_failure_prob(
    const ParetoFront& front, double max_failure_prob) {
  for (const FrontEntry& e : front.entries) {
    if (within_bound(e.evaluation.failure_prob, max_failure_prob)) return e;
  }
  return std::nullopt;
}

std::optional<FrontEntry> min_failure_prob_under_latency(
    const Pipeline& pipeline, const Platform& platform, double max_latency,
    const EnumLimits& limits) {
  return min_failure_prob_under_latency(
      pareto_front(pipeline, platform, limits), max_latency);
}

std::optional<FrontEntry> min_latency_under_failure_prob(
    const Pipeline& pipeline, const Platform& platform,
    double max_failure_prob, const EnumLimits& limits) {
  return min_latency_under_failure_prob(
      pareto_front(pipeline, platform, limits), max_failure_prob);
}

std::optional<FrontEntry> min_latency_one_to_one(const Pipeline& pipeline,
                                                 const Platform& platform,
                                                 const EnumLimits& limits) {
  const std::size_t n = pipeline.stages();
  const std::size_t m = platform.size();
  if (n > m) return std::nullopt;

  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count = sat_mul(count, m - i);
  EnumLimits one_to_one = limits;
  one_to_one.max_processors = std::max(limits.max_processors, m);
  one_to_one.max_stages = std::max(limits.max_stages, n);
  check_limits(n, m, one_to_one, count, "one-to-one enumeration");

  Mapping mapping;
  mapping.intervals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    mapping.intervals[i] = Interval{i + 1, i + 1, {0}};
  }
  std::vector<bool> taken(m, false);
  std::optional<FrontEntry> best;

  // Depth-first over injective assignments in lexicographic order.
  auto search = [&](auto&& self, std::size_t stage) -> void {
    if (stage == n) {
      const double latency = latency_heterogeneous(pipeline, platform, mapping);
      if (!std::isfinite(latency)) return;
      if (!best || latency < best->evaluation.latency) {
        best = FrontEntry{mapping,
                          {latency, failure_probability(platform, mapping)}};
      }
      return;
    }
    for (std::size_t u = 0; u < m; ++u) {
      if (taken[u]) continue;
      taken[u] = true;
      mapping.intervals[stage].procs[0] = u;
      self(self, stage + 1);
      taken[u] = false;
    }
  };
  search(search, 0);
  return best;
}

void write_front_csv(std::ostream& os, const ParetoFront& front,
                     const Platform& platform) {
  os << "latency,failure_prob,p,intervals,allocations\n";
  for (const FrontEntry& e : front.entries) {
    std::string ranges;
    std::string allocs;
    for (std::size_t j = 0; j < e.mapping.intervals.size(); ++j) {
      const Interval& iv = e.mapping.intervals[j];
      if (j > 0) {
        ranges += ';';
        allocs += ';';
      }
      ranges += std::to_string(iv.first) + "-" + std::to_string(iv.last);
      for (std::size_t k = 0; k < iv.procs.size(); ++k) {
        if (k > 0) allocs += '|';
        allocs += platform.processor(iv.procs[k]).id;
      }
    }
    os << format_number(e.evaluation.latency) << ','
       << format_number(e.evaluation.failure_prob) << ','
       << e.mapping.intervals.size() << ',' << ranges << ',' << allocs << '\n';
  }
}

}  // namespace pipemap::exact
