#include "pipemap/failure_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace pipemap {

namespace {

std::uint64_t simulate_block(const std::vector<std::vector<double>>& groups,
                             std::uint64_t seed, std::uint64_t block,
                             std::uint64_t trials) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 gen(seq);
  std::uint64_t failures = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    bool failed = false;
    // Every processor is drawn every trial so the stream layout is fixed.
    for (const std::vector<double>& group : groups) {
      bool all_down = true;
      for (double f : group) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        all_down = all_down && u < f;
      }
      failed = failed || all_down;
    }
    if (failed) ++failures;
  }
  return failures;
}

}  // namespace

FailureEstimate simulate_failure_probability(const Mapping& mapping,
                                             const Platform& platform,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             unsigned threads) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");

  std::vector<std::vector<double>> groups;
  for (const Interval& iv : mapping.intervals) {
    std::vector<double>& group = groups.emplace_back();
    for (std::size_t u : iv.procs) {
      group.push_back(platform.processor(u).failure_prob);
    }
  }

  const std::uint64_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::uint64_t> failures(blocks, 0);
  auto run = [&](std::uint64_t b) {
    const std::uint64_t count =
        std::min(kTrialsPerBlock, trials - b * kTrialsPerBlock);
    failures[b] = simulate_block(groups, seed, b, count);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(threads, blocks);
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run(b);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < blocks; b += workers) run(b);
      });
    }
  }

  FailureEstimate result;
  result.trials = trials;
  for (std::uint64_t f : failures) result.failures += f;
  result.estimate =
      static_cast<double>(result.failures) / static_cast<double>(trials);
  result.standard_error = std::sqrt(result.estimate * (1.0 - result.estimate) /
                                    static_cast<double>(trials));
  return result;
}

}  // namespace pipemap
