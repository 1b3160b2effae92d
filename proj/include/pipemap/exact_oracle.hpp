#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pipemap/metrics.hpp"
#include "pipemap/model.hpp"

// Exhaustive search over interval mappings with replication. Exponential by
// nature; meant for small instances and as the reference the polynomial
// solvers are checked against.
namespace pipemap::exact {

struct EnumLimits {
  std::size_t max_stages = 6;
  std::size_t max_processors = 7;
  std::uint64_t max_candidates = 10'000'000;
  // 0 = no cap beyond p <= min(n, m).
  std::size_t max_intervals = 0;
};

// Thrown before any work when an instance is too large for the limits.
class LimitsExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FrontEntry {
  Mapping mapping;
  Evaluation evaluation;
};

// Sorted by latency ascending with failure probability strictly decreasing.
struct ParetoFront {
  std::vector<FrontEntry> entries;
};

// Number of mappings enumerate_interval_mappings() yields:
//   sum_p C(n-1, p-1) * #{ordered p-tuples of disjoint non-empty subsets}.
// Saturates at UINT64_MAX.
std::uint64_t count_interval_mappings(std::size_t stages,
                                      std::size_t processors,
                                      std::size_t max_intervals = 0);

// Visits every interval mapping in a fixed order: partitions by cut mask
// ascending (bit i set = cut after stage i + 1), and within a partition the
// processor labelling (0 = unused, j = interval j) as an odometer with
// processor 0 least significant. Labellings leaving an interval empty are
// skipped. Throws LimitsExceeded when n, m or the count exceed `limits`.
void enumerate_interval_mappings(
    const Pipeline& pipeline, const Platform& platform,
    const EnumLimits& limits,
    const std::function<void(const Mapping&)>& visit);

// Non-dominated set over all enumerated mappings. Mappings needing absent
// links are skipped. Comparisons use kRelativeTolerance; among equivalent
// points the first in enumeration order is kept.
ParetoFront pareto_front(const Pipeline& pipeline, const Platform& platform,
                         const EnumLimits& limits = {});

// Dominance filter over arbitrary entries, preserving the first of
// equivalent points in input order.
ParetoFront filter_front(std::vector<FrontEntry> entries);

std::optional<FrontEntry> min_failure_prob_under_latency(
    const Pipeline& pipeline, const Platform& platform, double max_latency,
    const EnumLimits& limits = {});

std::optional<FrontEntry> min_latency_under_failure_prob(
    const Pipeline& pipeline, const Platform& platform,
    double max_failure_prob, const EnumLimits& limits = {});

// Same searches over an already computed front.
std::optional<FrontEntry> min_failure_prob_under_latency(
    const ParetoFront& front, double max_latency);
std::optional<FrontEntry> min_latency_under_failure_prob(
    const ParetoFront& front, double max_failure_prob);

// Best one-to-one mapping (stage i alone on its own processor, no
// replication) under the heterogeneous latency formula. Returns nullopt if
// n > m or no assignment avoids absent links; throws LimitsExceeded if the
// m!/(m-n)! assignments exceed max_candidates.
std::optional<FrontEntry> min_latency_one_to_one(const Pipeline& pipeline,
                                                 const Platform& platform,
                                                 const EnumLimits& limits = {});

// CSV with header "latency,failure_prob,p,intervals,allocations".
// Intervals are written as "1-1;2-2", allocations as "P1|P2;P3".
void write_front_csv(std::ostream& os, const ParetoFront& front,
                     const Platform& platform);

}  // namespace pipemap::exact
