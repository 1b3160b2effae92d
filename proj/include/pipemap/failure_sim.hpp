#pragma once

#include <cstdint>

#include "pipemap/model.hpp"

namespace pipemap {

inline constexpr std::uint64_t kTrialsPerBlock = 16384;

struct FailureEstimate {
  double estimate = 0.0;
  // Binomial standard error sqrt(p(1-p)/trials).
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
};

// Monte Carlo estimate of a mapping's failure probability. In each trial
// every mapped processor fails once, independently, with probability f_u;
// the run fails iff some interval loses all its replicas.
//
// Random stream: trials are cut into blocks of kTrialsPerBlock. Block b draws
// from std::mt19937_64 seeded by std::seed_seq{seed_lo, seed_hi, b_lo, b_hi}
// (32-bit halves of `seed` and of b), one 64-bit draw per mapped processor per trial in
// interval-then-index order, turned into u = (draw >> 11) * 2^-53 with a
// failure when u < f_u. Blocks run on up to `threads` workers (0 = hardware
// concurrency); the result does not depend on the thread count.
FailureEstimate simulate_failure_probability(const Mapping& mapping,
                                             const Platform& platform,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             unsigned threads = 0);

}  // namespace pipemap
