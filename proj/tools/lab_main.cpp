#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "ulab/config.hpp"
#include "ulab/diagnostics.hpp"
#include "ulab/error.hpp"
#include "ulab/experiment.hpp"
#include "ulab/process.hpp"
#include "ulab/suite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCriterion = 2;

struct RunArgs {
  std::string config;
  std::string out;
  unsigned jobs = 1;
};

struct DiagArgs {
  std::string condition;
  std::string process;
  std::vector<std::string> params;
  std::string sets;
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::uint64_t> seeds;
  std::uint64_t horizon = 0;
  std::uint64_t tail_start = 0;
  std::string out;
};

int do_run(const RunArgs& args) {
  const ulab::ExperimentConfig cfg = ulab::load_config(args.config);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
  const ulab::ExperimentTrace trace = ulab::run_experiment(cfg, args.jobs);
  const std::string dir = args.out.empty() ? cfg.output : args.out;
  if (dir.empty()) {
    ulab::write_trace_csv(trace, std::cout);
  } else {
    ulab::write_trace(trace, dir);
    std::cerr << "wrote " << trace.records.size() << " records to " << dir << "\n";
  }
  return kExitOk;
}

ulab::ProcessParams diag_params(ulab::ProcessKind kind, const std::vector<std::string>& items) {
  ulab::ProcessParams p;
  p.space = ulab::default_space(kind);
  bool x0 = false;
  bool x1 = false;
  std::vector<std::string> problems;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      problems.push_back("--param " + item + ": expected key=value");
      continue;
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "space") {
        if (value == "unit") {
          p.space = ulab::SpaceKind::kUnit;
        } else if (value == "natural") {
          p.space = ulab::SpaceKind::kNatural;
        } else {
          problems.push_back("--param space: expected unit|natural");
        }
      } else if (key == "k") {
        p.k = std::stoull(value);
      } else if (key == "stay") {
        p.stay = std::stod(value);
      } else if (key == "x0") {
        p.x0 = std::stod(value);
        x0 = true;
      } else if (key == "x1") {
        p.x1 = std::stod(value);
        x1 = true;
      } else {
        problems.push_back("--param " + key + ": unknown parameter");
      }
    } catch (const std::exception&) {
      problems.push_back("--param " + key + ": not a number");
    }
  }
  if (!problems.empty()) throw ulab::ConfigError(problems);
  if (p.space == ulab::SpaceKind::kNatural) {
    if (!x0) p.x0 = 0.0;
    if (!x1) p.x1 = 1.0;
  }
  ulab::validate_params(kind, p);
  return p;
}

nlohmann::json curve_json(const ulab::Curve& curve) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [t, v] : curve) out.push_back({{"t", t}, {"value", v}});
  return out;
}

int do_diag(const DiagArgs& args) {
  const ulab::ProcessKind kind = ulab::parse_process_kind(args.process);
  const ulab::ProcessParams params = diag_params(kind, args.params);
  std::vector<std::uint64_t> checkpoints = args.checkpoints;
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) throw ulab::ConfigError("--checkpoints: must be strictly increasing");
  }
  if (checkpoints.empty()) throw ulab::ConfigError("--checkpoints: required");
  const std::uint64_t horizon = args.horizon ? args.horizon : checkpoints.back();
  if (checkpoints.back() > horizon) throw ulab::ConfigError("--checkpoints: exceed --horizon");
  if (horizon > 100'000'000) throw ulab::ResourceError("--horizon: exceeds the 10^8 step cap");

  const ulab::ProcessClaims claims = ulab::claims_for(kind, params);
  auto claim_json = [](const ulab::Claim& c) {
    return nlohmann::json{{"status", ulab::to_string(c.status)}, {"reason", c.reason}};
  };
  nlohmann::json doc{
      {"caveat", ulab::kDiagnosticCaveat},
      {"condition", args.condition},
      {"process", args.process},
      {"sets", args.sets},
      {"claims", {{"c1", claim_json(claims.c1)}, {"c2", claim_json(claims.c2)}, {"c3", claim_json(claims.c3)},
                  {"crf", claim_json(claims.crf)}}},
      {"records", nlohmann::json::array()},
  };
  for (std::uint64_t seed : args.seeds) {
    ulab::ProcessStream stream = ulab::make_process(kind, params, seed);
    const std::vector<ulab::Point> sample = stream.take(horizon);
    nlohmann::json rec{{"seed", seed}, {"caveat", ulab::kDiagnosticCaveat}};
    if (args.condition == "1") {
      rec["curve"] = curve_json(
          ulab::condition1_curve(sample, ulab::CellFamily::parse(args.sets), checkpoints, args.tail_start));
    } else if (args.condition == "2") {
      rec["curve"] = curve_json(ulab::condition2_curve(sample, ulab::CellFamily::parse(args.sets), checkpoints));
    } else if (args.condition == "3") {
      const auto family = ulab::MonotoneFamily::parse(args.sets);
      rec["curve"] = curve_json(ulab::condition3_curve(sample, family, checkpoints));
    } else if (args.condition == "crf") {
      const auto bracket = ulab::crf_probe(sample, ulab::MeasurableSet::parse(args.sets), checkpoints);
      rec["bracket"] = {{"min", bracket.min}, {"max", bracket.max}};
    } else {
      throw ulab::ConfigError("--condition: expected 1|2|3|crf");
    }
    doc["records"].push_back(rec);
  }
  const std::string text = doc.dump(2) + "\n";
  if (args.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    if (!out) throw ulab::IoError("cannot open " + args.out + " for writing");
    out << text;
    if (!out) throw ulab::IoError("write failed for " + args.out);
  }
  return kExitOk;
}

int do_suite(const std::string& filter) {
  const auto results = ulab::run_suite(filter);
  bool all = true;
  for (const auto& r : results) {
    std::cout << ulab::format_result(r) << "\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitCriterion;
}

int do_list(const std::string& what) {
  if (what == "processes") {
    for (auto kind : ulab::all_process_kinds()) {
      const auto params = ulab::process_param_names(kind);
      std::string names;
      for (const auto& p : params) names += (names.empty() ? "" : ",") + p;
      std::cout << ulab::to_string(kind) << "\tspace=" << ulab::to_string(ulab::default_space(kind))
                << "\tparams=" << (names.empty() ? "-" : names) << "\n";
    }
  } else if (what == "rules") {
    for (auto r : {ulab::RuleKind::kNearestNeighbor, ulab::RuleKind::kMemorize, ulab::RuleKind::kErm,
                   ulab::RuleKind::kSelfAdaptive, ulab::RuleKind::kUnbounded}) {
      std::cout << ulab::to_string(r) << "\tinductive,self_adaptive\n";
    }
    for (auto r : {ulab::OnlineRuleKind::kMemorize, ulab::OnlineRuleKind::kAggregate}) {
      std::cout << ulab::to_string(r) << "\tonline\n";
    }
  } else if (what == "losses") {
    for (auto k : {ulab::LossKind::kZeroOne, ulab::LossKind::kAbsolute, ulab::LossKind::kSquared}) {
      std::cout << ulab::to_string(k) << "\n";
    }
    std::cout << "values: binary finite natural unit\n";
  } else {
    throw ulab::ConfigError("list: expected processes|rules|losses");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal learning laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ulab::version());

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write its trace");
  run_cmd->add_option("--config", run.config, "JSON experiment config")->required();
  run_cmd->add_option("--out", run.out, "Output directory (trace.csv, summary.json); stdout CSV if absent");
  run_cmd->add_option("--jobs", run.jobs, "Threads across seeds")->check(CLI::Range(1u, 256u));

  DiagArgs diag;
  auto* diag_cmd = app.add_subcommand("diag", "Finite-horizon condition diagnostics");
  diag_cmd->add_option("--condition", diag.condition, "1, 2, 3 or crf")->required();
  diag_cmd->add_option("--process", diag.process, "Process kind")->required();
  diag_cmd->add_option("--param", diag.params, "Process parameter key=value (repeatable)");
  diag_cmd->add_option("--sets", diag.sets, "Cells, monotone family, or one set for crf")->required();
  diag_cmd->add_option("--checkpoints", diag.checkpoints, "Increasing sample sizes")->delimiter(',')->required();
  diag_cmd->add_option("--seeds", diag.seeds, "Seeds")->delimiter(',')->required();
  diag_cmd->add_option("--horizon", diag.horizon, "Sample length (default: last checkpoint)");
  diag_cmd->add_option("--tail-start", diag.tail_start, "Condition 1 tail start (default ceil(T/4))");
  diag_cmd->add_option("--out", diag.out, "Output JSON file; stdout if absent");

  std::string filter;
  auto* suite_cmd = app.add_subcommand("suite", "Run the acceptance criteria");
  suite_cmd->add_option("--filter", filter, "Single criterion id, e.g. C4");

  std::string what;
  auto* list_cmd = app.add_subcommand("list", "List processes, rules or losses");
  list_cmd->add_option("what", what, "processes|rules|losses")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*diag_cmd) return do_diag(diag);
    if (*suite_cmd) return do_suite(filter);
    if (*list_cmd) return do_list(what);
  } catch (const ulab::ConfigError& e) {
    for (const auto& v : e.violations()) std::cerr << "config error: " << v << "\n";
    return kExitError;
  } catch (const ulab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
