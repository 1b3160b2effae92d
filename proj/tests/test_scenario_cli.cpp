#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pipemap/cli.hpp"
#include "pipemap/metrics.hpp"
#include "pipemap/scenario.hpp"
#include "support/instances.hpp"

using namespace pipemap;
using doctest::Approx;

namespace {

const std::string kDir = PIPEMAP_SCENARIO_DIR;

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "pipemap");
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

bool same_platform(const Platform& a, const Platform& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.processor(i);
    const auto& y = b.processor(i);
    if (x.id != y.id || x.speed != y.speed || x.failure_prob != y.failure_prob) {
      return false;
    }
  }
  auto la = a.links(), lb = b.links();
  if (la.size() != lb.size()) return false;
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (!(la[i].from == lb[i].from) || !(la[i].to == lb[i].to) ||
        la[i].bandwidth != lb[i].bandwidth) {
      return false;
    }
  }
  return true;
}

std::string pipeline_json(const char* rest) {
  return std::string(R"({"pipeline": {"w": [1, 2], "delta": [1, 1, 1]}, )") + rest + "}";
}

}  // namespace

TEST_CASE("scalar bandwidth expands to the full clique plus gateways") {
  Scenario s = parse_scenario(pipeline_json(
      R"("platform": {"processors": [{"id": "A", "speed": 1, "failure_prob": 0.1},
                                     {"id": "B", "speed": 2, "failure_prob": 0.2}],
                      "bandwidth": 1})"));
  CHECK(s.platform.links().size() == 2 * 2 - 2 + 4);
  for (const Link& l : s.platform.links()) CHECK(l.bandwidth == 1.0);
  CHECK_FALSE(s.platform.bandwidth(Endpoint::proc(0), Endpoint::proc(0)));
  CHECK_FALSE(s.mapping);
}

TEST_CASE("the reliability example file parses to the expected instance") {
  Scenario s = load_scenario(kDir + "/replication.json");
  CHECK(s.pipeline.stages() == 2);
  CHECK(s.pipeline.volume(0) == 10);
  CHECK(s.pipeline.work(2) == 100);
  CHECK(s.platform.size() == 11);
  CHECK(same_platform(s.platform, testing::replication_platform()));
  REQUIRE(s.mapping);
  CHECK(*s.mapping == testing::replication_split_mapping());
  CHECK(s.thresholds.max_latency == 22.0);
  CHECK_FALSE(s.thresholds.max_failure_prob);
}

TEST_CASE("parse errors") {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_scenario(text);
    } catch (const ScenarioError& e) {
      return e.what();
    }
    return "";
  };
  const char* platform =
      R"("platform": {"processors": [{"id": "A", "speed": 1, "failure_prob": 0.1}], "bandwidth": 1})";

  std::string short_delta = message(
      std::string(R"({"pipeline": {"w": [1, 2], "delta": [1, 1]}, )") + platform + "}");
  CHECK(short_delta.find("pipeline.delta") != std::string::npos);
  CHECK(short_delta.find("n+1") != std::string::npos);

  std::string syntax = message("{\n  \"pipeline\": {,\n}");
  CHECK(syntax.find("syntax error") != std::string::npos);
  CHECK(syntax.find("line 2") != std::string::npos);

  CHECK(message(pipeline_json(R"("platform": {"processors": [], "bandwidth": 1})"))
            .find("platform.processors") != std::string::npos);
  CHECK(message(pipeline_json(R"("platform": {"processors": [{"id": "A", "speed": 1, "failure_prob": 0.1}],
                                              "bandwidth": {"in-A": 1}})"))
            .find("A->B") != std::string::npos);
  CHECK(message(pipeline_json(R"("platform": {"processors": [{"id": "A", "speed": 1, "failure_prob": 0.1}],
                                              "bandwidth": {"in->A": 1, "A->Z": 1}})"))
            .find("unknown endpoint 'Z'") != std::string::npos);
  CHECK(message(pipeline_json(R"("platform": {"processors": [{"id": "A", "speed": -1, "failure_prob": 0.1}],
                                              "bandwidth": 1})"))
            .find("speed") != std::string::npos);
  CHECK(message(pipeline_json((std::string(platform) + R"(, "extra": 1)").c_str()))
            .find("unknown key 'extra'") != std::string::npos);
}

TEST_CASE("mapping problems surface as validation errors") {
  const char* platform =
      R"("platform": {"processors": [{"id": "A", "speed": 1, "failure_prob": 0.1},
                                     {"id": "B", "speed": 1, "failure_prob": 0.1}], "bandwidth": 1})";
  auto reason = [&](const char* mapping) {
    try {
      parse_scenario(pipeline_json((std::string(platform) + ", " + mapping).c_str()));
    } catch (const InvalidMapping& e) {
      return e.violation().reason;
    }
    FAIL("expected InvalidMapping");
    return Violation::Reason::kNoIntervals;
  };
  CHECK(reason(R"("mapping": {"intervals": [{"from": 1, "to": 1, "procs": ["A"]},
                                            {"from": 1, "to": 2, "procs": ["B"]}]})") ==
        Violation::Reason::kStageOverlap);
  CHECK(reason(R"("mapping": {"intervals": [{"from": 1, "to": 2, "procs": ["Q"]}]})") ==
        Violation::Reason::kUnknownProcessor);
  CHECK(reason(R"("mapping": {"intervals": [{"from": 1, "to": 1, "procs": ["A"]},
                                            {"from": 2, "to": 2, "procs": ["A"]}]})") ==
        Violation::Reason::kDuplicateProcessor);
}

TEST_CASE("serialize then parse gives back the same scenario") {
  testing::InstanceGenerator gen(1234);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = gen.make(static_cast<testing::Shape>(trial % 5), 4, 4);
    Scenario s{inst.pipeline, inst.platform, std::nullopt, {}};
    if (trial % 2 == 0) s.mapping = single_interval(inst.pipeline.stages(), {0});
    if (trial % 3 == 0) s.thresholds = {gen.tenth(1, 100), gen.tenth(0, 10)};

    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    CHECK(std::vector<double>(back.pipeline.work_weights().begin(),
                              back.pipeline.work_weights().end()) ==
          std::vector<double>(s.pipeline.work_weights().begin(),
                              s.pipeline.work_weights().end()));
    CHECK(std::vector<double>(back.pipeline.volumes().begin(),
                              back.pipeline.volumes().end()) ==
          std::vector<double>(s.pipeline.volumes().begin(), s.pipeline.volumes().end()));
    CHECK(same_platform(back.platform, s.platform));
    CHECK(back.mapping == s.mapping);
    CHECK(back.thresholds == s.thresholds);
    CHECK(serialize_scenario(back) == text);
  }

  const Scenario detour = load_scenario(kDir + "/detour.json");
  CHECK(same_platform(parse_scenario(serialize_scenario(detour)).platform, detour.platform));
}

TEST_CASE("cli: evaluate and classify") {
  auto r = run({"evaluate", kDir + "/detour.json"});
  CHECK(r.status == cli::kSuccess);
  CHECK(r.out.find("latency: 7\n") != std::string::npos);
  CHECK(r.out.find("Fully Heterogeneous") != std::string::npos);

  auto c = run({"classify", kDir + "/replication.json"});
  CHECK(c.status == cli::kSuccess);
  CHECK(c.out ==
        "platform: Communication Homogeneous, Failure Heterogeneous\n"
        "links: homogeneous\nspeeds: heterogeneous\nfailures: heterogeneous\n");

  auto none = run({"evaluate", kDir + "/homogeneous.json"});
  CHECK(none.status == cli::kValidationError);
}

TEST_CASE("cli: solve dispatch") {
  auto fp = run({"solve", kDir + "/replication.json", "--objective", "fp", "--max-latency", "22",
                 "--max-processors", "11"});
  CHECK(fp.status == cli::kSuccess);
  CHECK(fp.out.find("exhaustive") != std::string::npos);
  CHECK(fp.out.find("failure_prob: 0.19663676416\n") != std::string::npos);
  CHECK(fp.out.find("latency: 22\n") != std::string::npos);

  // Scenario threshold used when no flag is given.
  auto from_file = run({"solve", kDir + "/replication.json", "--objective", "fp",
                        "--max-processors", "11"});
  CHECK(from_file.out == fp.out);

  auto refused = run({"solve", kDir + "/replication.json", "--objective", "fp"});
  CHECK(refused.status == cli::kLimitsExceeded);
  CHECK(refused.err.find("max_processors") != std::string::npos);

  auto none = run({"solve", kDir + "/tiny.json", "--objective", "latency", "--max-fp", "0"});
  CHECK(none.status == cli::kInfeasible);
  CHECK(none.out.find("infeasible: no mapping satisfies failure_prob <= 0") !=
        std::string::npos);

  auto tiny = run({"solve", kDir + "/tiny.json", "--objective", "fp", "--max-latency", "5"});
  CHECK(tiny.status == cli::kSuccess);
  CHECK(tiny.out.find("most reliable") != std::string::npos);
  CHECK(tiny.out.find("failure_prob: 0.125\n") != std::string::npos);

  auto general = run({"solve", kDir + "/detour.json", "--objective", "latency"});
  CHECK(general.status == cli::kSuccess);
  CHECK(general.out.find("general mapping") != std::string::npos);

  auto unconstrained = run({"solve", kDir + "/replication.json", "--objective", "fp",
                            "--max-latency", "1e9", "--max-processors", "11"});
  CHECK(unconstrained.status == cli::kSuccess);

  auto usage = run({"solve", kDir + "/tiny.json", "--objective", "speed"});
  CHECK(usage.status == cli::kUsageError);
}

TEST_CASE("cli: solve and pareto agree on fully homogeneous instances") {
  const std::string file = kDir + "/homogeneous.json";
  for (const char* objective : {"fp", "latency"}) {
    auto fast = run({"solve", file, "--objective", objective});
    auto exact = run({"solve", file, "--objective", objective, "--force-exact"});
    REQUIRE(fast.status == exact.status);
    auto value = [&](const std::string& report, const std::string& key) {
      auto at = report.find(key + ": ");
      REQUIRE(at != std::string::npos);
      return std::stod(report.substr(at + key.size() + 2));
    };
    if (fast.status == cli::kSuccess) {
      const std::string key = std::string(objective) == "fp" ? "failure_prob" : "latency";
      CHECK(value(fast.out, key) == Approx(value(exact.out, key)).epsilon(1e-9));
    }
  }
}

TEST_CASE("cli: pareto, general-latency and simulate") {
  const std::string csv_path = "pareto_test_out.csv";
  auto p = run({"pareto", kDir + "/detour.json", "--csv", csv_path});
  CHECK(p.status == cli::kSuccess);
  std::ifstream csv(csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "latency,failure_prob,p,intervals,allocations");
  std::remove(csv_path.c_str());

  const std::string dump_path = "graph_test_out.txt";
  auto g = run({"general-latency", kDir + "/detour.json", "--dump-graph", dump_path});
  CHECK(g.status == cli::kSuccess);
  CHECK(g.out.find("latency: 7\n") != std::string::npos);
  CHECK(g.out.find("stage 2 on P2") != std::string::npos);
  std::ifstream dump(dump_path);
  std::string line;
  int edges = 0;
  while (std::getline(dump, line)) ++edges;
  CHECK(edges == 8);
  std::remove(dump_path.c_str());

  auto s = run({"simulate", kDir + "/replication.json", "--trials", "20000", "--seed", "5"});
  CHECK(s.status == cli::kSuccess);
  CHECK(s.out.find("analytic_failure_prob: 0.19663676416") != std::string::npos);
  CHECK(run({"simulate", kDir + "/replication.json", "--trials", "20000", "--seed", "5"}).out ==
        s.out);

  CHECK(run({"classify", kDir + "/missing.json"}).status == cli::kUsageError);
}
