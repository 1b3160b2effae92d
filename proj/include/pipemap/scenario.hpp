#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pipemap/model.hpp"

namespace pipemap {

struct Thresholds {
  std::optional<double> max_latency;
  std::optional<double> max_failure_prob;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct Scenario {
  Pipeline pipeline;
  Platform platform;
  std::optional<Mapping> mapping;
  Thresholds thresholds;
};

// Malformed document: syntax errors (with line/column) and schema errors
// (with the offending key path).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed document whose mapping breaks a mapping invariant.
class InvalidMapping : public std::runtime_error {
 public:
  explicit InvalidMapping(Violation violation)
      : std::runtime_error("invalid mapping: " + violation.message),
        violation_(std::move(violation)) {}

  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

// JSON document:
//
//   {
//     "pipeline": {"w": [2, 2], "delta": [100, 100, 100]},
//     "platform": {
//       "processors": [{"id": "P1", "speed": 1, "failure_prob": 0.1}, ...],
//       "bandwidth": 1                       // full clique + in/out links
//       "bandwidth": {"in->P1": 100, "P1->P2": 100, "P2->out": 100}
//     },
//     "mapping": {"intervals": [{"from": 1, "to": 1, "procs": ["P1"]}]},
//     "thresholds": {"max_latency": 22, "max_failure_prob": 0.2}
//   }
//
// "mapping" and "thresholds" (and either threshold) are optional. Bandwidth
// keys are directional "A->B"; omitted pairs are absent links. Unknown keys
// are rejected.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

// Inverse of parse_scenario. A platform whose links form the full clique plus
// every gateway link at one bandwidth is written with a scalar bandwidth.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace pipemap
