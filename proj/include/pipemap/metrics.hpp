#pragma once

#include <cmath>
#include <limits>

#include "pipemap/model.hpp"

namespace pipemap {

// Worst-case latency and global failure probability of a mapping. An
// infinite latency marks a mapping that needs an absent link.
struct Evaluation {
  double latency = 0.0;
  double failure_prob = 0.0;

  bool feasible() const { return std::isfinite(latency); }

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

inline constexpr double kInfeasibleLatency =
    std::numeric_limits<double>::infinity();

// FP = 1 - prod_j (1 - prod_{u in alloc(j)} f_u).
//
// Each interval product is taken in the log domain over the failure
// probabilities sorted ascending, so equal multisets give bit-identical
// results and large replication sets do not underflow. A zero f_u makes the
// interval product exactly 0.
double failure_probability(const Platform& platform, const Mapping& mapping);

// Latency for platforms whose links share one bandwidth b:
//   T = sum_j [ k_j * delta_{d_j - 1} / b + W_j / min_{u in alloc(j)} s_u ]
//       + delta_n / b
// Incoming transfers to a replicated interval are serialized (one-port), so
// they are paid k_j times. Throws std::invalid_argument on heterogeneous links.
// Returns kInfeasibleLatency if the mapping needs an absent link.
double latency_homogeneous_links(const Pipeline& pipeline,
                                 const Platform& platform,
                                 const Mapping& mapping);

// Latency for arbitrary links:
//   T = sum_{u in alloc(1)} delta_0 / b_{in,u}
//     + sum_j max_{u in alloc(j)} [ W_j / s_u
//                                   + sum_{v in alloc(j+1)} delta_{e_j} / b_{u,v} ]
// with alloc(p+1) = {out}. A transfer from a processor to itself costs 0.
// Returns kInfeasibleLatency if a consulted link is absent.
double latency_heterogeneous(const Pipeline& pipeline, const Platform& platform,
                             const Mapping& mapping);

// Picks the latency formula from the platform's link homogeneity.
Evaluation evaluate(const Pipeline& pipeline, const Platform& platform,
                    const Mapping& mapping);

// evaluate() with the platform classification done once, for callers that
// score many mappings of the same instance. Holds references.
class Evaluator {
 public:
  Evaluator(const Pipeline& pipeline, const Platform& platform);

  Evaluation operator()(const Mapping& mapping) const;
  bool homogeneous_links() const { return bandwidth_.has_value(); }

 private:
  const Pipeline& pipeline_;
  const Platform& platform_;
  std::optional<double> bandwidth_;
};

}  // namespace pipemap
