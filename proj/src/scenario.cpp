#include "pipemap/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pipemap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

void require_keys(const json& node, const std::string& path,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const char* key : required) {
    if (!node.contains(key)) fail(path, std::string("missing key '") + key + "'");
  }
  std::set<std::string> known;
  for (const char* key : required) known.insert(key);
  for (const char* key : optional) known.insert(key);
  for (const auto& [key, value] : node.items()) {
    if (!known.count(key)) fail(path, "unknown key '" + key + "'");
  }
}

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

std::size_t index_at(const json& node, const std::string& path) {
  if (!node.is_number_integer() || node.get<long long>() < 1) {
    fail(path, "expected a stage index >= 1");
  }
  return node.get<std::size_t>();
}

std::vector<double> numbers_at(const json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> values;
  for (std::size_t i = 0; i < node.size(); ++i) {
    values.push_back(number_at(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return values;
}

Pipeline parse_pipeline(const json& node) {
  require_keys(node, "pipeline", {"w", "delta"}, {});
  std::vector<double> work = numbers_at(node["w"], "pipeline.w");
  std::vector<double> volumes = numbers_at(node["delta"], "pipeline.delta");
  if (work.empty()) fail("pipeline.w", "needs at least one stage");
  if (volumes.size() != work.size() + 1) {
    fail("pipeline.delta",
         "must hold n+1 = " + std::to_string(work.size() + 1) +
             " volumes (delta_0..delta_n) for n = " +
             std::to_string(work.size()) + " stages, got " +
             std::to_string(volumes.size()));
  }
  try {
    return Pipeline(std::move(work), std::move(volumes));
  } catch (const std::invalid_argument& e) {
    fail("pipeline", e.what());
  }
}

Endpoint endpoint_named(const std::vector<Processor>& procs,
                        const std::string& name, const std::string& path) {
  if (name == "in") return Endpoint::in();
  if (name == "out") return Endpoint::out();
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (procs[i].id == name) return Endpoint::proc(i);
  }
  fail(path, "unknown endpoint '" + name + "'");
}

Platform parse_platform(const json& node) {
  require_keys(node, "platform", {"processors", "bandwidth"}, {});
  const json& list = node["processors"];
  if (!list.is_array() || list.empty()) {
    fail("platform.processors", "expected a non-empty array");
  }
  std::vector<Processor> procs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "platform.processors[" + std::to_string(i) + "]";
    require_keys(list[i], path, {"id", "speed", "failure_prob"}, {});
    if (!list[i]["id"].is_string()) fail(path + ".id", "expected a string");
    procs.push_back({list[i]["id"].get<std::string>(),
                     number_at(list[i]["speed"], path + ".speed"),
                     number_at(list[i]["failure_prob"], path + ".failure_prob")});
  }

  const json& bw = node["bandwidth"];
  try {
    if (bw.is_number()) return Platform::uniform(std::move(procs), bw.get<double>());
    if (!bw.is_object()) {
      fail("platform.bandwidth", "expected a number or an object of links");
    }
    std::vector<Link> links;
    for (const auto& [key, value] : bw.items()) {
      const std::string path = "platform.bandwidth[\"" + key + "\"]";
      const std::size_t arrow = key.find("->");
      if (arrow == std::string::npos) fail(path, "link key must look like A->B");
      links.push_back({endpoint_named(procs, key.substr(0, arrow), path),
                       endpoint_named(procs, key.substr(arrow + 2), path),
                       number_at(value, path)});
    }
    return Platform(std::move(procs), links);
  } catch (const std::invalid_argument& e) {
    fail("platform", e.what());
  }
}

Mapping parse_mapping(const json& node, const Platform& platform) {
  require_keys(node, "mapping", {"intervals"}, {});
  const json& list = node["intervals"];
  if (!list.is_array()) fail("mapping.intervals", "expected an array");
  Mapping mapping;
  for (std::size_t j = 0; j < list.size(); ++j) {
    const std::string path = "mapping.intervals[" + std::to_string(j) + "]";
    require_keys(list[j], path, {"from", "to", "procs"}, {});
    Interval iv;
    iv.first = index_at(list[j]["from"], path + ".from");
    iv.last = index_at(list[j]["to"], path + ".to");
    const json& procs = list[j]["procs"];
    if (!procs.is_array()) fail(path + ".procs", "expected an array of ids");
    for (const json& id : procs) {
      if (!id.is_string()) fail(path + ".procs", "expected processor ids");
      const auto index = platform.index_of(id.get<std::string>());
      if (!index) {
        throw InvalidMapping(Violation{
            j, Violation::Reason::kUnknownProcessor,
            "interval " + std::to_string(j + 1) +
                ": unknown processor (" + id.get<std::string>() + ")"});
      }
      iv.procs.push_back(*index);
    }
    mapping.intervals.push_back(std::move(iv));
  }
  return mapping;
}

Thresholds parse_thresholds(const json& node) {
  require_keys(node, "thresholds", {}, {"max_latency", "max_failure_prob"});
  Thresholds t;
  if (node.contains("max_latency")) {
    t.max_latency = number_at(node["max_latency"], "thresholds.max_latency");
  }
  if (node.contains("max_failure_prob")) {
    t.max_failure_prob =
        number_at(node["max_failure_prob"], "thresholds.max_failure_prob");
  }
  return t;
}

std::string endpoint_label(const Platform& platform, Endpoint e) {
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

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("syntax error: ") + e.what());
  }
  require_keys(doc, "scenario", {"pipeline", "platform"},
               {"mapping", "thresholds"});

  Scenario scenario{parse_pipeline(doc["pipeline"]),
                    parse_platform(doc["platform"]),
                    std::nullopt,
                    {}};
  if (doc.contains("mapping")) {
    Mapping mapping = parse_mapping(doc["mapping"], scenario.platform);
    if (auto violation = validate_mapping(scenario.pipeline, scenario.platform,
                                          mapping)) {
      throw InvalidMapping(*violation);
    }
    scenario.mapping = std::move(mapping);
  }
  if (doc.contains("thresholds")) {
    scenario.thresholds = parse_thresholds(doc["thresholds"]);
  }
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string serialize_scenario(const Scenario& scenario) {
  using ordered = nlohmann::ordered_json;
  const Pipeline& pipeline = scenario.pipeline;
  const Platform& platform = scenario.platform;

  ordered doc;
  doc["pipeline"]["w"] = std::vector<double>(pipeline.work_weights().begin(),
                                             pipeline.work_weights().end());
  doc["pipeline"]["delta"] = std::vector<double>(pipeline.volumes().begin(),
                                                 pipeline.volumes().end());

  ordered procs = ordered::array();
  for (const Processor& p : platform.processors()) {
    procs.push_back(
        {{"id", p.id}, {"speed", p.speed}, {"failure_prob", p.failure_prob}});
  }
  doc["platform"]["processors"] = procs;

  const std::vector<Link> links = platform.links();
  const std::size_t m = platform.size();
  const std::optional<double> common = common_bandwidth(platform);
  if (common && links.size() == m * m + m) {
    doc["platform"]["bandwidth"] = *common;
  } else {
    ordered table = ordered::object();
    for (const Link& link : links) {
      table[endpoint_label(platform, link.from) + "->" +
            endpoint_label(platform, link.to)] = link.bandwidth;
    }
    doc["platform"]["bandwidth"] = table;
  }

  if (scenario.mapping) {
    ordered intervals = ordered::array();
    for (const Interval& iv : scenario.mapping->intervals) {
      ordered ids = ordered::array();
      for (std::size_t u : iv.procs) ids.push_back(platform.processor(u).id);
      intervals.push_back({{"from", iv.first}, {"to", iv.last}, {"procs", ids}});
    }
    doc["mapping"]["intervals"] = intervals;
  }
  if (scenario.thresholds.max_latency) {
    doc["thresholds"]["max_latency"] = *scenario.thresholds.max_latency;
  }
  if (scenario.thresholds.max_failure_prob) {
    doc["thresholds"]["max_failure_prob"] =
        *scenario.thresholds.max_failure_prob;
  }
  return doc.dump(2) + "\n";
}

}  // namespace pipemap
