#pragma once

// Worked example instances and seeded random instance generators shared by the unit
// and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "pipemap/model.hpp"

namespace pipemap::testing {

// Two stages w = 2, delta = 100 on two unit-speed processors. Fast links
// in->P1, P1<->P2, P2->out (bandwidth 100); slow in->P2 and P1->out (1).
inline Pipeline detour_pipeline() { return Pipeline({2, 2}, {100, 100, 100}); }

inline Platform detour_platform() {
  std::vector<Processor> procs{{"P1", 1.0, 0.1}, {"P2", 1.0, 0.2}};
  std::vector<Link> links{
      {Endpoint::in(), Endpoint::proc(0), 100},
      {Endpoint::in(), Endpoint::proc(1), 1},
      {Endpoint::proc(0), Endpoint::proc(1), 100},
      {Endpoint::proc(1), Endpoint::proc(0), 100},
      {Endpoint::proc(0), Endpoint::out(), 1},
      {Endpoint::proc(1), Endpoint::out(), 100},
  };
  return Platform(std::move(procs), links);
}

// delta = [10, 1, 0], w = [1, 100]; one slow reliable processor (speed 1,
// f = 0.1) and ten fast unreliable ones (speed 100, f = 0.8); bandwidth 1.
inline Pipeline replication_pipeline() { return Pipeline({1, 100}, {10, 1, 0}); }

inline Platform replication_platform() {
  std::vector<Processor> procs{{"S", 1.0, 0.1}};
  for (int i = 1; i <= 10; ++i) {
    procs.push_back({"F" + std::to_string(i), 100.0, 0.8});
  }
  return Platform::uniform(std::move(procs), 1.0);
}

// Slow processor on stage 1, the ten fast ones on stage 2.
inline Mapping replication_split_mapping() {
  Mapping m;
  m.intervals.push_back({1, 1, {0}});
  m.intervals.push_back({2, 2, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}});
  return m;
}

enum class Shape {
  kFullyHomogeneous,          // one speed, one bandwidth, failures vary
  kFullyHomogeneousFailHom,   // identical processors
  kCommHomogeneousFailHom,    // speeds vary, one f, one bandwidth
  kCommHomogeneousFailHet,    // speeds vary, f vary, one bandwidth
  kFullyHeterogeneous,        // everything varies, full clique
};

struct Instance {
  Pipeline pipeline;
  Platform platform;
};

// Rational parameters: small integers for w, delta, speeds and bandwidths,
// tenths for failure probabilities.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : gen_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }

  double tenth(int lo, int hi) { return static_cast<double>(uniform(lo, hi)) / 10.0; }

  Pipeline pipeline(std::size_t n) {
    std::vector<double> w(n), delta(n + 1);
    for (double& x : w) x = static_cast<double>(uniform(1, 6));
    for (double& x : delta) x = static_cast<double>(uniform(0, 5));
    return Pipeline(std::move(w), std::move(delta));
  }

  Instance make(Shape shape, std::size_t max_n, std::size_t max_m) {
    const std::size_t n = uniform(1, max_n);
    const std::size_t m = uniform(1, max_m);
    Pipeline pipe = pipeline(n);

    const double speed = static_cast<double>(uniform(1, 4));
    const double f = tenth(1, 9);
    std::vector<Processor> procs;
    for (std::size_t u = 0; u < m; ++u) {
      Processor p{"P" + std::to_string(u + 1), speed, f};
      switch (shape) {
        case Shape::kFullyHomogeneous:
          p.failure_prob = tenth(0, 10);
          break;
        case Shape::kFullyHomogeneousFailHom:
          break;
        case Shape::kCommHomogeneousFailHom:
          p.speed = static_cast<double>(uniform(1, 5));
          break;
        case Shape::kCommHomogeneousFailHet:
        case Shape::kFullyHeterogeneous:
          p.speed = static_cast<double>(uniform(1, 5));
          p.failure_prob = tenth(0, 10);
          break;
      }
      procs.push_back(p);
    }
    if (shape != Shape::kFullyHeterogeneous) {
      const double bw = static_cast<double>(uniform(1, 4));
      return {std::move(pipe), Platform::uniform(std::move(procs), bw)};
    }
    std::vector<Link> links;
    auto bw = [&] { return static_cast<double>(uniform(1, 8)); };
    for (std::size_t u = 0; u < m; ++u) {
      links.push_back({Endpoint::in(), Endpoint::proc(u), bw()});
      links.push_back({Endpoint::proc(u), Endpoint::out(), bw()});
      for (std::size_t v = 0; v < m; ++v) {
        if (u != v) links.push_back({Endpoint::proc(u), Endpoint::proc(v), bw()});
      }
    }
    return {std::move(pipe), Platform(std::move(procs), links)};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pipemap::testing
