#pragma once

#include <optional>

#include "pipemap/model.hpp"

// Polynomial-time optimizers. Every solver returns a single-interval mapping
// (the whole pipeline replicated on one processor set); the bi-criteria ones
// return nullopt when no mapping meets the threshold. Preconditions on the
// platform class are checked with classify_platform and violated ones throw
// std::invalid_argument.
//
// Ties are broken by ascending processor index, both for reliability and for
// speed orderings.
namespace pipemap::poly {

// Whole pipeline on every processor. Optimal on any platform.
Mapping min_failure_prob(const Pipeline& pipeline, const Platform& platform);

// Whole pipeline on one fastest processor. Requires homogeneous links.
Mapping min_latency_comm_homogeneous(const Pipeline& pipeline,
                                     const Platform& platform);

// Fully homogeneous: the most replicas k with
//   k * delta_0 / b + sum(w) / s + delta_n / b <= max_latency,
// placed on the k most reliable processors. When delta_0 == 0 replication
// is free and k = m. Failure probabilities may differ.
std::optional<Mapping> min_failure_prob_fully_homogeneous(
    const Pipeline& pipeline, const Platform& platform, double max_latency);

// Fully homogeneous: the fewest k most reliable processors whose failure
// product is <= max_failure_prob.
std::optional<Mapping> min_latency_fully_homogeneous(const Pipeline& pipeline,
                                                     const Platform& platform,
                                                     double max_failure_prob);

// Homogeneous links and failures, any speeds: processors ordered by speed
// descending, every prefix size k in 1..m is checked against
//   k * delta_0 / b + sum(w) / s_k + delta_n / b <= max_latency
// (s_k the slowest in the prefix) and the largest feasible prefix wins.
std::optional<Mapping> min_failure_prob_comm_homogeneous(
    const Pipeline& pipeline, const Platform& platform, double max_latency);

// Homogeneous links and failures: smallest k with f^k <= max_failure_prob,
// on the k fastest processors.
std::optional<Mapping> min_latency_comm_homogeneous(const Pipeline& pipeline,
                                                    const Platform& platform,
                                                    double max_failure_prob);

// Processor indices ordered by (failure_prob, index) ascending.
std::vector<std::size_t> by_reliability(const Platform& platform);

// Processor indices ordered by speed descending, then index ascending.
std::vector<std::size_t> by_speed(const Platform& platform);

}  // namespace pipemap::poly
