#include "pipemap/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pipemap/exact_oracle.hpp"
#include "pipemap/failure_sim.hpp"
#include "pipemap/general_latency.hpp"
#include "pipemap/metrics.hpp"
#include "pipemap/poly_solvers.hpp"
#include "pipemap/scenario.hpp"

namespace pipemap::cli {

namespace {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

std::string num(double value) {
  std::ostringstream os;
  os << std::setprecision(12) << value;
  return os.str();
}

const char* uniformity(Uniformity u) {
  return u == Uniformity::kHomogeneous ? "homogeneous" : "heterogeneous";
}

void print_class(std::ostream& out, const PlatformClass& cls) {
  out << "platform: " << cls.name() << ", Failure "
      << (cls.homogeneous_failures() ? "Homogeneous" : "Heterogeneous") << '\n';
}

void print_mapping(std::ostream& out, const Platform& platform,
                   const Mapping& mapping) {
  out << "mapping (interval, p = " << mapping.intervals.size() << "):\n";
  for (const Interval& iv : mapping.intervals) {
    out << "  stages " << iv.first << '-' << iv.last << " on {";
    for (std::size_t k = 0; k < iv.procs.size(); ++k) {
      out << (k ? ", " : "") << platform.processor(iv.procs[k]).id;
    }
    out << "}\n";
  }
}

void print_evaluation(std::ostream& out, const Evaluation& eval) {
  out << "latency: " << num(eval.latency) << '\n'
      << "failure_prob: " << num(eval.failure_prob) << '\n';
}

void print_general(std::ostream& out, const Platform& platform,
                   const GeneralMapping& general) {
  out << "mapping (general mapping, stages need not be consecutive):\n";
  for (std::size_t i = 0; i < general.assignment.size(); ++i) {
    out << "  stage " << i + 1 << " on "
        << platform.processor(general.assignment[i]).id << '\n';
  }
  out << "latency: " << num(general.latency) << '\n';
}

struct LimitOptions {
  exact::EnumLimits limits;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-stages", limits.max_stages,
                    "exhaustive search: largest n")
        ->capture_default_str();
    cmd->add_option("--max-processors", limits.max_processors,
                    "exhaustive search: largest m")
        ->capture_default_str();
    cmd->add_option("--max-candidates", limits.max_candidates,
                    "exhaustive search: most mappings enumerated")
        ->capture_default_str();
    cmd->add_option("--max-intervals", limits.max_intervals,
                    "exhaustive search: most intervals (0 = no cap)")
        ->capture_default_str();
  }
};

int report_infeasible(std::ostream& out, const std::string& constraint) {
  out << "infeasible: no mapping satisfies " << constraint << '\n';
  return kInfeasible;
}

int cmd_classify(const Scenario& s, std::ostream& out) {
  const PlatformClass cls = classify_platform(s.platform);
  print_class(out, cls);
  out << "links: " << uniformity(cls.links) << '\n'
      << "speeds: " << uniformity(cls.speeds) << '\n'
      << "failures: " << uniformity(cls.failures) << '\n';
  return kSuccess;
}

int cmd_evaluate(const Scenario& s, std::ostream& out, std::ostream& err) {
  if (!s.mapping) {
    err << "evaluate: scenario has no mapping\n";
    return kValidationError;
  }
  print_class(out, classify_platform(s.platform));
  print_mapping(out, s.platform, *s.mapping);
  print_evaluation(out, evaluate(s.pipeline, s.platform, *s.mapping));
  return kSuccess;
}

struct SolveOptions {
  std::string objective;
  std::optional<double> max_latency;
  std::optional<double> max_fp;
  bool force_exact = false;
  LimitOptions limits;
};

int cmd_solve(const Scenario& s, const SolveOptions& opt, std::ostream& out) {
  const PlatformClass cls = classify_platform(s.platform);
  const std::optional<double> max_latency =
      opt.max_latency ? opt.max_latency : s.thresholds.max_latency;
  const std::optional<double> max_fp =
      opt.max_fp ? opt.max_fp : s.thresholds.max_failure_prob;
  const bool exact_route = opt.force_exact;
  const exact::EnumLimits& limits = opt.limits.limits;
  // Classes where a single interval is provably optimal under a threshold.
  const bool single_interval_class =
      cls.fully_homogeneous() ||
      (cls.homogeneous_links() && cls.homogeneous_failures());

  std::string solver;
  std::optional<Mapping> mapping;
  std::string constraint;

  print_class(out, cls);
  if (opt.objective == "fp") {
    constraint = max_latency ? "latency <= " + num(*max_latency) : "";
    if (exact_route || (max_latency && !single_interval_class)) {
      solver = "exhaustive interval-mapping search";
      if (auto best = exact::min_failure_prob_under_latency(
              s.pipeline, s.platform, max_latency.value_or(kUnbounded),
              limits)) {
        mapping = best->mapping;
      }
    } else if (!max_latency) {
      solver = "full replication on all processors";
      mapping = poly::min_failure_prob(s.pipeline, s.platform);
    } else if (cls.fully_homogeneous()) {
      solver = "k most reliable processors (Fully Homogeneous)";
      mapping = poly::min_failure_prob_fully_homogeneous(s.pipeline,
                                                         s.platform,
                                                         *max_latency);
    } else {
      solver = "k fastest processors (Communication Homogeneous, Failure "
               "Homogeneous)";
      mapping = poly::min_failure_prob_comm_homogeneous(s.pipeline, s.platform,
                                                        *max_latency);
    }
  } else {
    constraint = max_fp ? "failure_prob <= " + num(*max_fp) : "";
    if (!max_fp && !exact_route && !cls.homogeneous_links()) {
      out << "solver: layered-graph shortest path\n";
      const auto general = min_latency_general(s.pipeline, s.platform);
      if (!general) return report_infeasible(out, "the available links");
      if (max_latency && !within_bound(general->latency, *max_latency)) {
        return report_infeasible(out, "latency <= " + num(*max_latency));
      }
      print_general(out, s.platform, *general);
      return kSuccess;
    }
    if (exact_route || !cls.homogeneous_links() ||
        (max_fp && !single_interval_class)) {
      solver = "exhaustive interval-mapping search";
      if (auto best = exact::min_latency_under_failure_prob(
              s.pipeline, s.platform, max_fp.value_or(1.0), limits)) {
        mapping = best->mapping;
      }
    } else if (!max_fp) {
      solver = "single fastest processor";
      mapping = poly::min_latency_comm_homogeneous(s.pipeline, s.platform);
    } else if (cls.fully_homogeneous()) {
      solver = "k most reliable processors (Fully Homogeneous)";
      mapping = poly::min_latency_fully_homogeneous(s.pipeline, s.platform,
                                                    *max_fp);
    } else {
      solver = "k fastest processors (Communication Homogeneous, Failure "
               "Homogeneous)";
      mapping =
          poly::min_latency_comm_homogeneous(s.pipeline, s.platform, *max_fp);
    }
  }

  out << "solver: " << solver << '\n';
  if (!mapping) {
    return report_infeasible(out, constraint.empty() ? "the available links"
                                                     : constraint);
  }
  const Evaluation eval = evaluate(s.pipeline, s.platform, *mapping);
  // The threshold on the other criterion, if any, is checked on the result.
  if (opt.objective == "fp" && max_fp &&
      !within_bound(eval.failure_prob, *max_fp)) {
    return report_infeasible(out, constraint + (constraint.empty() ? "" : " and ") +
                                      "failure_prob <= " + num(*max_fp));
  }
  if (opt.objective == "latency" && max_latency &&
      !within_bound(eval.latency, *max_latency)) {
    return report_infeasible(out, constraint + (constraint.empty() ? "" : " and ") +
                                      "latency <= " + num(*max_latency));
  }
  print_mapping(out, s.platform, *mapping);
  print_evaluation(out, eval);
  return kSuccess;
}

int cmd_pareto(const Scenario& s, const exact::EnumLimits& limits,
               const std::string& csv_path, std::ostream& out,
               std::ostream& err) {
  const exact::ParetoFront front = exact::pareto_front(s.pipeline, s.platform,
                                                       limits);
  print_class(out, classify_platform(s.platform));
  out << "pareto front: " << front.entries.size() << " mappings\n";
  exact::write_front_csv(out, front, s.platform);
  if (!csv_path.empty()) {
    std::ofstream file(csv_path);
    if (!file) {
      err << "cannot write '" << csv_path << "'\n";
      return kUsageError;
    }
    exact::write_front_csv(file, front, s.platform);
  }
  return kSuccess;
}

int cmd_general(const Scenario& s, const std::string& dump_path,
                std::ostream& out, std::ostream& err) {
  if (!dump_path.empty()) {
    std::ofstream file(dump_path);
    if (!file) {
      err << "cannot write '" << dump_path << "'\n";
      return kUsageError;
    }
    write_layered_graph(file, build_layered_graph(s.pipeline, s.platform),
                        s.platform);
  }
  print_class(out, classify_platform(s.platform));
  const auto general = min_latency_general(s.pipeline, s.platform);
  if (!general) return report_infeasible(out, "the available links");
  print_general(out, s.platform, *general);
  return kSuccess;
}

int cmd_simulate(const Scenario& s, std::uint64_t trials, std::uint64_t seed,
                 unsigned threads, std::ostream& out, std::ostream& err) {
  if (!s.mapping) {
    err << "simulate: scenario has no mapping\n";
    return kValidationError;
  }
  const double analytic = failure_probability(s.platform, *s.mapping);
  const FailureEstimate mc =
      simulate_failure_probability(*s.mapping, s.platform, trials, seed,
                                   threads);
  print_mapping(out, s.platform, *s.mapping);
  out << "trials: " << mc.trials << '\n'
      << "seed: " << seed << '\n'
      << "failures: " << mc.failures << '\n'
      << "estimate: " << num(mc.estimate) << '\n'
      << "standard_error: " << num(mc.standard_error) << '\n'
      << "analytic_failure_prob: " << num(analytic) << '\n';
  if (mc.standard_error > 0) {
    out << "deviation_sigma: "
        << num(std::abs(mc.estimate - analytic) / mc.standard_error) << '\n';
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Map linear pipelines onto failure-prone platforms"};
  app.require_subcommand(1);

  std::string file;
  auto add_file = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "scenario file (JSON)")->required();
  };

  CLI::App* classify = app.add_subcommand("classify", "report platform class");
  add_file(classify);

  CLI::App* eval = app.add_subcommand(
      "evaluate", "latency and failure probability of the scenario's mapping");
  add_file(eval);

  SolveOptions solve_opt;
  CLI::App* solve = app.add_subcommand("solve", "optimize one criterion");
  add_file(solve);
  solve->add_option("--objective", solve_opt.objective, "fp or latency")
      ->required()
      ->check(CLI::IsMember({"fp", "latency"}));
  solve->add_option("--max-latency", solve_opt.max_latency,
                    "latency threshold");
  solve->add_option("--max-fp", solve_opt.max_fp,
                    "failure probability threshold")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_flag("--force-exact", solve_opt.force_exact,
                  "use the exhaustive search regardless of platform class");
  solve_opt.limits.attach(solve);

  LimitOptions pareto_limits;
  std::string csv_path;
  CLI::App* pareto = app.add_subcommand("pareto", "exhaustive Pareto front");
  add_file(pareto);
  pareto->add_option("--csv", csv_path, "also write the front as CSV");
  pareto_limits.attach(pareto);

  std::string dump_path;
  CLI::App* general = app.add_subcommand(
      "general-latency", "minimum latency over general mappings");
  add_file(general);
  general->add_option("--dump-graph", dump_path,
                      "write the layered graph, one edge per line");

  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo failure probability of the scenario's mapping");
  add_file(simulate);
  simulate->add_option("--trials", trials, "number of trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", seed, "random seed")->capture_default_str();
  simulate->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    const Scenario scenario = load_scenario(file);
    if (*classify) return cmd_classify(scenario, out);
    if (*eval) return cmd_evaluate(scenario, out, err);
    if (*solve) return cmd_solve(scenario, solve_opt, out);
    if (*pareto) {
      return cmd_pareto(scenario, pareto_limits.limits, csv_path, out, err);
    }
    if (*general) return cmd_general(scenario, dump_path, out, err);
    if (*simulate) {
      return cmd_simulate(scenario, trials, seed, threads, out, err);
    }
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << '\n';
    return kValidationError;
  } catch (const InvalidMapping& e) {
    err << e.what() << '\n';
    return kValidationError;
  } catch (const exact::LimitsExceeded& e) {
    err << e.what() << '\n';
    return kLimitsExceeded;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace pipemap::cli
