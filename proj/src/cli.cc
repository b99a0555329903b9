// Copyright 2026 The wateralloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wateralloc/cli.h"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "wateralloc/errors.h"
#include "wateralloc/mps.h"
#include "wateralloc/pareto.h"
#include "wateralloc/report.h"
#include "wateralloc/scenario_io.h"
#include "wateralloc/smoothed.h"

namespace wateralloc {

namespace {

namespace fs = std::filesystem;

// Thrown for command-routing mistakes that CLI11 cannot see.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string scenario_path;
  std::string builtin;
  std::string year = "dry";
  std::string model = "1";
  int weights = 20;
  std::uint64_t seed = 0;
  bool jitter = false;
  bool fixed_normalization = false;
  std::string clamp;
  std::string out_dir;
  std::string formats;
  std::string solver = "exact";
  int starts = 20;
  std::string mps_path;
  std::string parameter;
  std::vector<double> values;
};

void add_scenario_options(CLI::App* cmd, RunConfig* cfg) {
  auto* path = cmd->add_option("--scenario", cfg->scenario_path,
                               "Scenario file (.toml) or CSV bundle directory");
  auto* builtin = cmd->add_option("--builtin", cfg->builtin, "Bundled scenario")
                      ->check(CLI::IsMember({"rajshahi"}));
  path->excludes(builtin);
  builtin->excludes(path);
  cmd->add_option("--clamp", cfg->clamp, "Requirement clamp override")
      ->check(CLI::IsMember({"none", "monthly", "per-crop", "per_crop"}));
}

void add_output_options(CLI::App* cmd, RunConfig* cfg) {
  cmd->add_option("--out", cfg->out_dir,
                  std::string("Output directory (default $") + kOutDirEnv + ")");
  cmd->add_option("--format", cfg->formats,
                  "Comma-separated subset of json,csv,table,plot");
}

std::set<std::string> parse_formats(const RunConfig& cfg, bool have_dir) {
  std::set<std::string> out;
  if (cfg.formats.empty()) {
    if (have_dir) return {"json", "csv", "table", "plot"};
    return {"table"};
  }
  std::stringstream ss(cfg.formats);
  for (std::string f; std::getline(ss, f, ',');) {
    if (f != "json" && f != "csv" && f != "table" && f != "plot") {
      throw UsageError("unknown format '" + f + "'");
    }
    out.insert(f);
  }
  return out;
}

std::string output_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv(kOutDirEnv)) return env;
  return "";
}

Scenario load(const RunConfig& cfg) {
  if (cfg.scenario_path.empty() && cfg.builtin.empty()) {
    throw UsageError("one of --scenario or --builtin is required");
  }
  Scenario s = cfg.builtin.empty() ? load_scenario(cfg.scenario_path)
                                   : builtin_rajshahi();
  if (!cfg.clamp.empty()) s.options.requirement_clamp = parse_clamp(cfg.clamp);
  return s;
}

ProblemKind parse_model(const std::string& label) {
  if (label == "3" || label == "model3") {
    throw UsageError("model 3 is bi-objective; use the pareto command");
  }
  if (label == "1" || label == "model1") return ProblemKind::kModel1;
  if (label == "2" || label == "model2") return ProblemKind::kModel2;
  throw UsageError("--model must be 1 or 2");
}

YearType year_of(const Scenario& s, const std::string& label) {
  YearType y;
  try {
    y = parse_year(label);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!s.years.count(y)) {
    throw ValidationError("scenario has no " + label + " year");
  }
  return y;
}

using FileList = std::vector<std::pair<fs::path, std::string>>;

void emit(const std::string& dir, FileList files, std::ostream& out) {
  if (files.empty()) return;
  if (dir.empty()) {
    // No directory: the table is already on stdout, the rest follows it.
    for (const auto& [path, content] : files) {
      if (path.extension() != ".txt") out << content;
    }
    return;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot use output directory " + dir);
  }
  for (auto& [path, content] : files) path = fs::path(dir) / path;
  write_files_atomically(files);
  for (const auto& [path, content] : files) out << "wrote " << path.string() << "\n";
}

std::string solve_plot(const SolveResult& r) {
  std::ostringstream out;
  out << "# month env_flow pumping\n";
  for (int m = 0; m < kMonths; ++m) {
    out << kMonthNames[m] << " " << format_exact(r.report.decision.env_flow[m])
        << " " << format_exact(r.flows.pumping[m]) << "\n";
  }
  return out.str();
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ProblemKind kind = parse_model(cfg.model);
  if (cfg.solver != "exact" && cfg.solver != "smoothed") {
    throw UsageError("--solver must be exact or smoothed");
  }
  const Scenario s = load(cfg);
  const YearType year = year_of(s, cfg.year);
  const std::string dir = output_dir(cfg);
  const std::set<std::string> formats = parse_formats(cfg, !dir.empty());
  const ProblemSpec p = build_problem(s, year, kind);

  SolveReport report = cfg.solver == "exact"
                           ? solve_problem(p)
                           : solve_smoothed_multistart(p, cfg.starts, cfg.seed);
  const SolveResult result = make_solve_result(s, report);
  const std::string table = format_solve_table(result);
  if (formats.count("table")) out << table;

  const std::string stem = "solve_" + std::string(kind_label(kind)) + "_" +
                           std::string(year_label(year));
  FileList files;
  if (formats.count("json")) files.emplace_back(stem + ".json", solve_to_json(result).dump(2) + "\n");
  if (formats.count("csv")) files.emplace_back(stem + ".csv", solve_to_csv(result));
  if (formats.count("table")) files.emplace_back(stem + ".txt", table);
  if (formats.count("plot") && !report.decision.areas.empty()) {
    files.emplace_back(stem + "_plot.dat", solve_plot(result));
  }
  if (!cfg.mps_path.empty()) {
    write_files_atomically({{cfg.mps_path, to_mps(lower(p).lp)}});
  }
  emit(dir, std::move(files), out);
  if (!report.ok()) {
    err << "solver failure: " << solve_status_name(report.status)
        << (report.message.empty() ? "" : " (" + report.message + ")") << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_pareto(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.weights < 2) throw UsageError("--weights must be at least 2");
  const Scenario s = load(cfg);
  const YearType year = year_of(s, cfg.year);
  const std::string dir = output_dir(cfg);
  const std::set<std::string> formats = parse_formats(cfg, !dir.empty());
  ParetoOptions opt;
  opt.n_weights = cfg.weights;
  opt.seed = cfg.seed;
  opt.jitter = cfg.jitter;
  opt.anchor_normalization = !cfg.fixed_normalization;
  const FrontRun run = trace_front(s, year, opt);
  for (const std::string& d : run.diagnostics) err << "note: " << d << "\n";

  std::vector<std::string> crops;
  for (const CropSpec& c : s.crops) crops.push_back(c.name);
  const std::string table = format_front_table(run.front);
  if (formats.count("table")) out << table;
  const std::string stem = "front_" + std::string(year_label(year));
  FileList files;
  if (formats.count("json")) {
    files.emplace_back(stem + ".json", front_to_json(run.front, crops).dump(2) + "\n");
  }
  if (formats.count("csv")) files.emplace_back(stem + ".csv", front_to_csv(run.front, crops));
  if (formats.count("table")) files.emplace_back(stem + ".txt", table);
  if (formats.count("plot")) files.emplace_back(stem + "_plot.dat", front_plot_data(run.front));
  emit(dir, std::move(files), out);
  return kExitOk;
}

Scenario with_parameter(const Scenario& base, const std::string& parameter,
                        double v) {
  Scenario s = base;
  if (parameter == "t_pump") {
    s.limits.t_pump = v;
  } else if (parameter == "canal_cap") {
    s.limits.canal_cap = v;
  } else if (parameter == "tef_fraction_high") {
    if (v < 0.0 || v > 1.0) throw ValidationError("tef_fraction_high must be in [0, 1]");
    for (auto& [label, year] : s.years) year.tef_fraction = tessmann_fractions(v);
  } else if (parameter == "min_area_scale") {
    if (v < 0.0) throw ValidationError("min_area_scale must be nonnegative");
    for (CropSpec& c : s.crops) c.min_area *= v;
  } else {
    throw UsageError("unknown sweep parameter '" + parameter + "'");
  }
  const ValidationReport report = validate(s);
  if (!report.ok) throw ValidationError(report.to_string());
  return s;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ProblemKind kind = parse_model(cfg.model);
  if (cfg.values.empty()) throw UsageError("--values needs at least one value");
  const Scenario base = load(cfg);
  const YearType year = year_of(base, cfg.year);
  const std::string dir = output_dir(cfg);
  const std::set<std::string> formats = parse_formats(cfg, !dir.empty());
  std::vector<SweepRow> rows;
  bool failed = false;
  for (double v : cfg.values) {
    const Scenario s = with_parameter(base, cfg.parameter, v);
    const SolveReport r = solve_problem(build_problem(s, year, kind));
    const SolveResult res = make_solve_result(s, r);
    rows.push_back({cfg.parameter, v, year, kind, r.status, r.nb, r.efd,
                    res.total_pumping});
    if (!r.ok()) {
      failed = true;
      err << "solver failure at " << cfg.parameter << "=" << v << ": "
          << solve_status_name(r.status) << "\n";
    }
  }
  const std::string table = format_sweep_table(rows);
  if (formats.count("table")) out << table;
  const std::string stem = "sweep_" + cfg.parameter + "_" +
                           std::string(kind_label(kind)) + "_" +
                           std::string(year_label(year));
  FileList files;
  if (formats.count("csv")) files.emplace_back(stem + ".csv", sweep_to_csv(rows));
  if (formats.count("json")) {
    nlohmann::json doc;
    doc["schema"] = kSweepSchema;
    doc["scenario"] = base.name;
    doc["parameter"] = cfg.parameter;
    doc["year"] = std::string(year_label(year));
    doc["model"] = std::string(kind_label(kind));
    for (const SweepRow& r : rows) {
      doc["rows"].push_back({{"value", r.value},
                             {"status", std::string(solve_status_name(r.status))},
                             {"nb", r.nb},
                             {"efd", r.efd},
                             {"total_pumping", r.total_pumping}});
    }
    files.emplace_back(stem + ".json", doc.dump(2) + "\n");
  }
  if (formats.count("table")) files.emplace_back(stem + ".txt", table);
  if (formats.count("plot")) files.emplace_back(stem + "_plot.dat", sweep_plot_data(rows));
  emit(dir, std::move(files), out);
  return failed ? kExitSolver : kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.scenario_path.empty() && cfg.builtin.empty()) {
    throw UsageError("one of --scenario or --builtin is required");
  }
  Scenario s = cfg.builtin.empty() ? read_scenario(cfg.scenario_path)
                                   : builtin_rajshahi();
  if (!cfg.clamp.empty()) s.options.requirement_clamp = parse_clamp(cfg.clamp);
  const ValidationReport report = validate(s);
  out << report.to_string();
  return report.ok ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Irrigation water allocation: net benefit, environmental flow "
               "deficiency and their trade-off"};
  app.name("wateralloc");
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* solve = app.add_subcommand("solve", "Solve Model 1 or Model 2");
  add_scenario_options(solve, &cfg);
  add_output_options(solve, &cfg);
  solve->add_option("--year", cfg.year, "dry, avg or wet");
  solve->add_option("--model", cfg.model, "1 (net benefit) or 2 (deficiency)");
  solve->add_option("--solver", cfg.solver, "exact or smoothed");
  solve->add_option("--starts", cfg.starts, "Starts for the smoothed solver")
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", cfg.seed, "Seed for the smoothed solver");
  solve->add_option("--mps", cfg.mps_path, "Also write the lowered program as MPS");

  CLI::App* pareto = app.add_subcommand("pareto", "Trace the trade-off front");
  add_scenario_options(pareto, &cfg);
  add_output_options(pareto, &cfg);
  pareto->add_option("--year", cfg.year, "dry, avg or wet");
  pareto->add_option("--weights", cfg.weights, "Number of weight pairs (>= 2)");
  pareto->add_option("--seed", cfg.seed, "Seed for weight jitter");
  pareto->add_flag("--jitter", cfg.jitter, "Jitter the weight grid");
  pareto->add_flag("--fixed-normalization", cfg.fixed_normalization,
                   "Scale objectives by fixed factors instead of the anchors");

  CLI::App* sweep = app.add_subcommand("sweep", "Re-solve over parameter values");
  add_scenario_options(sweep, &cfg);
  add_output_options(sweep, &cfg);
  sweep->add_option("--year", cfg.year, "dry, avg or wet");
  sweep->add_option("--model", cfg.model, "1 or 2");
  sweep->add_option("--parameter", cfg.parameter,
                    "t_pump, canal_cap, tef_fraction_high or min_area_scale")
      ->required();
  sweep->add_option("--values", cfg.values, "Comma-separated values")
      ->delimiter(',')
      ->required();

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a scenario and print findings");
  add_scenario_options(validate_cmd, &cfg);

  std::vector<std::string> argv_store = {"wateralloc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(cfg, out, err);
    if (*pareto) return cmd_pareto(cfg, out, err);
    if (*sweep) return cmd_sweep(cfg, out, err);
    return cmd_validate(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NotFoundError& e) {
    err << "not found: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace wateralloc
