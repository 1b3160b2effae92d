#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pipemap {

// Linear pipeline of n stages. Stage indices are 1-based (S_1..S_n);
// communication volumes are 0-based: volume(0) is the initial input,
// volume(n) the final output, volume(k) the data S_k hands to S_{k+1}.
class Pipeline {
 public:
  // Throws std::invalid_argument unless work.size() >= 1,
  // volumes.size() == work.size() + 1, all work > 0 and all volumes >= 0.
  Pipeline(std::vector<double> work, std::vector<double> volumes);

  std::size_t stages() const { return work_.size(); }
  double work(std::size_t stage) const { return work_.at(stage - 1); }
  double volume(std::size_t k) const { return volumes_.at(k); }

  // Sum of w_i for i in [first, last], 1-based inclusive.
  double total_work(std::size_t first, std::size_t last) const;
  double total_work() const { return total_work(1, stages()); }

  std::span<const double> work_weights() const { return work_; }
  std::span<const double> volumes() const { return volumes_; }

 private:
  std::vector<double> work_;
  std::vector<double> volumes_;
};

struct Processor {
  std::string id;
  double speed = 1.0;
  double failure_prob = 0.0;
};

// One side of a communication link: a real processor (by index into the
// platform) or one of the virtual gateways holding the input / receiving
// the output.
struct Endpoint {
  enum class Kind { kIn, kOut, kProcessor };

  Kind kind = Kind::kProcessor;
  std::size_t index = 0;

  static Endpoint in() { return {Kind::kIn, 0}; }
  static Endpoint out() { return {Kind::kOut, 0}; }
  static Endpoint proc(std::size_t i) { return {Kind::kProcessor, i}; }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Link {
  Endpoint from;
  Endpoint to;
  double bandwidth = 0.0;
};

class Platform {
 public:
  // Links are directional. Links into `in`, out of `out`, self links and
  // duplicates are rejected, as are non-positive bandwidths, processors with
  // speed <= 0 or failure_prob outside [0,1], duplicate ids, and platforms
  // where no processor can receive the input or emit the output.
  Platform(std::vector<Processor> processors, const std::vector<Link>& links);

  // Full clique between processors plus every in->u and u->out link, all at
  // bandwidth `bw`.
  static Platform uniform(std::vector<Processor> processors, double bw);

  std::size_t size() const { return processors_.size(); }
  const Processor& processor(std::size_t i) const { return processors_.at(i); }
  std::span<const Processor> processors() const { return processors_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  // Absent (nullopt) means the link is unusable.
  std::optional<double> bandwidth(Endpoint from, Endpoint to) const;

  // Every defined link in a fixed order: in->u, then u->v, then u->out.
  std::vector<Link> links() const;

 private:
  std::size_t slot(Endpoint e) const;

  std::vector<Processor> processors_;
  // (m+2)x(m+2) row-major; slot m is `in`, slot m+1 is `out`; 0 = absent.
  std::vector<double> bandwidth_;
};

enum class Uniformity { kHomogeneous, kHeterogeneous };

struct PlatformClass {
  Uniformity links = Uniformity::kHomogeneous;
  Uniformity speeds = Uniformity::kHomogeneous;
  Uniformity failures = Uniformity::kHomogeneous;

  bool homogeneous_links() const { return links == Uniformity::kHomogeneous; }
  bool homogeneous_speeds() const { return speeds == Uniformity::kHomogeneous; }
  bool homogeneous_failures() const {
    return failures == Uniformity::kHomogeneous;
  }
  bool fully_homogeneous() const {
    return homogeneous_links() && homogeneous_speeds();
  }
  bool communication_homogeneous() const {
    return homogeneous_links() && !homogeneous_speeds();
  }
  bool fully_heterogeneous() const { return !homogeneous_links(); }

  // "Fully Homogeneous", "Communication Homogeneous" or "Fully Heterogeneous".
  std::string name() const;

  friend bool operator==(const PlatformClass&, const PlatformClass&) = default;
};

// Exact value comparison, no tolerance.
PlatformClass classify_platform(const Platform& platform);

// The common bandwidth when links are homogeneous.
std::optional<double> common_bandwidth(const Platform& platform);

// Stages [first, last] (1-based, inclusive) replicated on `procs`
// (processor indices, kept sorted ascending by the solvers).
struct Interval {
  std::size_t first = 1;
  std::size_t last = 1;
  std::vector<std::size_t> procs;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Mapping {
  std::vector<Interval> intervals;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

Mapping single_interval(std::size_t stages, std::vector<std::size_t> procs);

struct Violation {
  enum class Reason {
    kNoIntervals,
    kStageGap,
    kStageOverlap,
    kEmptyInterval,
    kStageOutOfRange,
    kEmptyAlloc,
    kDuplicateProcessor,
    kUnknownProcessor,
    kTooManyIntervals,
    kMissingLink,
  };

  // 0-based index into Mapping::intervals.
  std::size_t interval = 0;
  Reason reason = Reason::kNoIntervals;
  std::string message;
};

const char* to_string(Violation::Reason reason);

// First violated invariant, or nullopt when the mapping is valid and every
// link its latency formula consults is defined.
std::optional<Violation> validate_mapping(const Pipeline& pipeline,
                                          const Platform& platform,
                                          const Mapping& mapping);

// Relative tolerance used by every threshold comparison.
inline constexpr double kRelativeTolerance = 1e-9;

// value <= bound up to kRelativeTolerance of |bound|.
bool within_bound(double value, double bound);

}  // namespace pipemap
