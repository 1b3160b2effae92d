#include "pipemap/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace pipemap {

Pipeline::Pipeline(std::vector<double> work, std::vector<double> volumes)
    : work_(std::move(work)), volumes_(std::move(volumes)) {
  if (work_.empty()) {
    throw std::invalid_argument("pipeline needs at least one stage");
  }
  if (volumes_.size() != work_.size() + 1) {
    throw std::invalid_argument(
        "pipeline with " + std::to_string(work_.size()) +
        " stages needs n+1 = " + std::to_string(work_.size() + 1) +
        " communication volumes, got " + std::to_string(volumes_.size()));
  }
  for (std::size_t i = 0; i < work_.size(); ++i) {
    if (!(work_[i] > 0.0) || !std::isfinite(work_[i])) {
      throw std::invalid_argument("stage " + std::to_string(i + 1) +
                                  " work must be positive");
    }
  }
  for (std::size_t k = 0; k < volumes_.size(); ++k) {
    if (!(volumes_[k] >= 0.0) || !std::isfinite(volumes_[k])) {
      throw std::invalid_argument("volume delta_" + std::to_string(k) +
                                  " must be non-negative");
    }
  }
}

double Pipeline::total_work(std::size_t first, std::size_t last) const {
  if (first < 1 || last > stages() || first > last) {
    throw std::out_of_range("stage range out of bounds");
  }
  return std::accumulate(work_.begin() + static_cast<std::ptrdiff_t>(first - 1),
                         work_.begin() + static_cast<std::ptrdiff_t>(last),
                         0.0);
}

Platform::Platform(std::vector<Processor> processors,
                   const std::vector<Link>& links)
    : processors_(std::move(processors)) {
  const std::size_t m = processors_.size();
  if (m == 0) throw std::invalid_argument("platform needs a processor");

  std::unordered_set<std::string> ids;
  for (const Processor& p : processors_) {
    if (p.id.empty()) throw std::invalid_argument("processor id is empty");
    if (p.id == "in" || p.id == "out") {
      throw std::invalid_argument("processor id '" + p.id + "' is reserved");
    }
    if (!ids.insert(p.id).second) {
      throw std::invalid_argument("duplicate processor id '" + p.id + "'");
    }
    if (!(p.speed > 0.0) || !std::isfinite(p.speed)) {
      throw std::invalid_argument("processor '" + p.id +
                                  "' speed must be positive");
    }
    if (!(p.failure_prob >= 0.0 && p.failure_prob <= 1.0)) {
      throw std::invalid_argument("processor '" + p.id +
                                  "' failure_prob must lie in [0,1]");
    }
  }

  bandwidth_.assign((m + 2) * (m + 2), 0.0);
  for (const Link& link : links) {
    if (link.from.kind == Endpoint::Kind::kOut ||
        link.to.kind == Endpoint::Kind::kIn) {
      throw std::invalid_argument("links must flow from in and into out");
    }
    if (link.from.kind == Endpoint::Kind::kIn &&
        link.to.kind == Endpoint::Kind::kOut) {
      throw std::invalid_argument("in->out link is meaningless");
    }
    for (Endpoint e : {link.from, link.to}) {
      if (e.kind == Endpoint::Kind::kProcessor && e.index >= m) {
        throw std::invalid_argument("link references unknown processor");
      }
    }
    if (link.from == link.to) {
      throw std::invalid_argument("self link on processor '" +
                                  processors_[link.from.index].id + "'");
    }
    if (!(link.bandwidth > 0.0) || std::isnan(link.bandwidth)) {
      throw std::invalid_argument("bandwidth must be positive");
    }
    double& cell = bandwidth_[slot(link.from) * (m + 2) + slot(link.to)];
    if (cell != 0.0) throw std::invalid_argument("duplicate link");
    cell = link.bandwidth;
  }

  bool has_input = false;
  bool has_output = false;
  for (std::size_t u = 0; u < m; ++u) {
    has_input = has_input || bandwidth(Endpoint::in(), Endpoint::proc(u));
    has_output = has_output || bandwidth(Endpoint::proc(u), Endpoint::out());
  }
  if (!has_input) throw std::invalid_argument("no processor reachable from in");
  if (!has_output) throw std::invalid_argument("no processor reaches out");
}

Platform Platform::uniform(std::vector<Processor> processors, double bw) {
  const std::size_t m = processors.size();
  std::vector<Link> links;
  links.reserve(m * m + m);
  for (std::size_t u = 0; u < m; ++u) {
    links.push_back({Endpoint::in(), Endpoint::proc(u), bw});
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (u != v) links.push_back({Endpoint::proc(u), Endpoint::proc(v), bw});
    }
  }
  for (std::size_t u = 0; u < m; ++u) {
    links.push_back({Endpoint::proc(u), Endpoint::out(), bw});
  }
  return Platform(std::move(processors), links);
}

std::optional<std::size_t> Platform::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < processors_.size(); ++i) {
    if (processors_[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Platform::slot(Endpoint e) const {
  switch (e.kind) {
    case Endpoint::Kind::kIn:
      return processors_.size();
    case Endpoint::Kind::kOut:
      return processors_.size() + 1;
    case Endpoint::Kind::kProcessor:
      break;
  }
  if (e.index >= processors_.size()) {
    throw std::out_of_range("processor index out of range");
  }
  return e.index;
}

std::optional<double> Platform::bandwidth(Endpoint from, Endpoint to) const {
  const double bw = bandwidth_[slot(from) * (size() + 2) + slot(to)];
  if (bw == 0.0) return std::nullopt;
  return bw;
}

std::vector<Link> Platform::links() const {
  std::vector<Link> out;
  const std::size_t m = size();
  auto add = [&](Endpoint a, Endpoint b) {
    if (auto bw = bandwidth(a, b)) out.push_back({a, b, *bw});
  };
  for (std::size_t u = 0; u < m; ++u) add(Endpoint::in(), Endpoint::proc(u));
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (u != v) add(Endpoint::proc(u), Endpoint::proc(v));
    }
  }
  for (std::size_t u = 0; u < m; ++u) add(Endpoint::proc(u), Endpoint::out());
  return out;
}

std::string PlatformClass::name() const {
  if (fully_heterogeneous()) return "Fully Heterogeneous";
  if (fully_homogeneous()) return "Fully Homogeneous";
  return "Communication Homogeneous";
}

namespace {

template <typename Range, typename Proj>
Uniformity uniformity_of(const Range& range, Proj proj) {
  auto it = std::begin(range);
  if (it == std::end(range)) return Uniformity::kHomogeneous;
  const double first = proj(*it);
  for (; it != std::end(range); ++it) {
    if (proj(*it) != first) return Uniformity::kHeterogeneous;
  }
  return Uniformity::kHomogeneous;
}

}  // namespace

PlatformClass classify_platform(const Platform& platform) {
  PlatformClass cls;
  cls.links = uniformity_of(platform.links(),
                            [](const Link& l) { return l.bandwidth; });
  cls.speeds = uniformity_of(platform.processors(),
                             [](const Processor& p) { return p.speed; });
  cls.failures = uniformity_of(platform.processors(),
                               [](const Processor& p) { return p.failure_prob; });
  return cls;
}

std::optional<double> common_bandwidth(const Platform& platform) {
  const std::vector<Link> links = platform.links();
  if (uniformity_of(links, [](const Link& l) { return l.bandwidth; }) !=
      Uniformity::kHomogeneous) {
    return std::nullopt;
  }
  return links.front().bandwidth;
}

Mapping single_interval(std::size_t stages, std::vector<std::size_t> procs) {
  std::sort(procs.begin(), procs.end());
  return Mapping{{Interval{1, stages, std::move(procs)}}};
}

const char* to_string(Violation::Reason reason) {
  switch (reason) {
    case Violation::Reason::kNoIntervals:
      return "no intervals";
    case Violation::Reason::kStageGap:
      return "gap in stages";
    case Violation::Reason::kStageOverlap:
      return "overlapping stages";
    case Violation::Reason::kEmptyInterval:
      return "empty stage interval";
    case Violation::Reason::kStageOutOfRange:
      return "stage out of range";
    case Violation::Reason::kEmptyAlloc:
      return "empty processor set";
    case Violation::Reason::kDuplicateProcessor:
      return "duplicate processor";
    case Violation::Reason::kUnknownProcessor:
      return "unknown processor";
    case Violation::Reason::kTooManyIntervals:
      return "more intervals than processors";
    case Violation::Reason::kMissingLink:
      return "missing link";
  }
  return "unknown";
}

namespace {

Violation violation(std::size_t interval, Violation::Reason reason,
                    std::string detail) {
  std::string message = "interval " + std::to_string(interval + 1) + ": " +
                        to_string(reason);
  if (!detail.empty()) message += " (" + detail + ")";
  return Violation{interval, reason, std::move(message)};
}

std::string endpoint_name(const Platform& platform, Endpoint e) {
  switch (e.kind) {
    case Endpoint::Kind::kIn:
      return "in";
    case Endpoint::Kind::kOut:
      return "out";
    case Endpoint::Kind::kProcessor:
      break;
  }
  return platform.processor(e.index).id;
}

}  // namespace

std::optional<Violation> validate_mapping(const Pipeline& pipeline,
                                          const Platform& platform,
                                          const Mapping& mapping) {
  using Reason = Violation::Reason;
  const auto& intervals = mapping.intervals;
  if (intervals.empty()) return violation(0, Reason::kNoIntervals, "");

  std::size_t next_stage = 1;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const Interval& iv = intervals[j];
    if (iv.first < next_stage) {
      return violation(j, Reason::kStageOverlap,
                       "starts at " + std::to_string(iv.first) +
                           ", expected " + std::to_string(next_stage));
    }
    if (iv.first > next_stage) {
      return violation(j, Reason::kStageGap,
                       "starts at " + std::to_string(iv.first) +
                           ", expected " + std::to_string(next_stage));
    }
    if (iv.last < iv.first) {
      return violation(j, Reason::kEmptyInterval,
                       std::to_string(iv.first) + ".." +
                           std::to_string(iv.last));
    }
    if (iv.last > pipeline.stages()) {
      return violation(j, Reason::kStageOutOfRange,
                       "last stage " + std::to_string(iv.last) + " > n = " +
                           std::to_string(pipeline.stages()));
    }
    next_stage = iv.last + 1;
  }
  if (next_stage != pipeline.stages() + 1) {
    return violation(intervals.size() - 1, Reason::kStageGap,
                     "stages " + std::to_string(next_stage) + ".." +
                         std::to_string(pipeline.stages()) + " unmapped");
  }

  std::vector<bool> used(platform.size(), false);
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const Interval& iv = intervals[j];
    if (iv.procs.empty()) return violation(j, Reason::kEmptyAlloc, "");
    for (std::size_t u : iv.procs) {
      if (u >= platform.size()) {
        return violation(j, Reason::kUnknownProcessor,
                         "index " + std::to_string(u));
      }
      if (used[u]) {
        return violation(j, Reason::kDuplicateProcessor,
                         platform.processor(u).id);
      }
      used[u] = true;
    }
  }
  if (intervals.size() > platform.size()) {
    return violation(platform.size(), Reason::kTooManyIntervals, "");
  }

  // Links consulted by the latency formulas: in -> alloc(1),
  // alloc(j) -> alloc(j+1), alloc(p) -> out.
  auto require = [&](std::size_t j, Endpoint a,
                     Endpoint b) -> std::optional<Violation> {
    if (platform.bandwidth(a, b)) return std::nullopt;
    return violation(j, Reason::kMissingLink,
                     endpoint_name(platform, a) + "->" +
                         endpoint_name(platform, b));
  };
  for (std::size_t u : intervals.front().procs) {
    if (auto v = require(0, Endpoint::in(), Endpoint::proc(u))) return v;
  }
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    for (std::size_t u : intervals[j].procs) {
      if (j + 1 == intervals.size()) {
        if (auto v = require(j, Endpoint::proc(u), Endpoint::out())) return v;
        continue;
      }
      for (std::size_t v : intervals[j + 1].procs) {
        if (auto bad = require(j, Endpoint::proc(u), Endpoint::proc(v))) {
          return bad;
        }
      }
    }
  }
  return std::nullopt;
}

bool within_bound(double value, double bound) {
  if (std::isinf(bound) && bound > 0) return true;
  return value <= bound + kRelativeTolerance * std::abs(bound);
}

}  // namespace pipemap
