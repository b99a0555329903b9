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

#include "wateralloc/report.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "wateralloc/errors.h"

namespace wateralloc {

using nlohmann::json;

std::string format_tk(double value) {
  if (value == 0.0) return "0";
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f x 10^%d", value / std::pow(10.0, exponent),
                exponent);
  return buf;
}

std::string format_gl(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  std::string s = buf;
  return s == "-0.0000" ? "0.0000" : s;
}

std::string format_exact(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

namespace {

std::string format_area(double value) {
  char buf[64];
  if (std::abs(value - std::round(value)) < 1e-6) {
    std::snprintf(buf, sizeof(buf), "%.0f", std::round(value));
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f", value);
  }
  return buf;
}

std::string pad(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string month_row(const std::string& label, const MonthSeries& v) {
  std::string line = pad(label, 18);
  for (int m = 0; m < kMonths; ++m) line += lpad(format_gl(v[m]), 11);
  return line + "\n";
}

json series(const MonthSeries& v) { return json(std::vector<double>(v.begin(), v.end())); }

MonthSeries read_series(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != kMonths) {
    throw ParseError("json", 0, field, "expected 12 numbers");
  }
  MonthSeries out{};
  for (int m = 0; m < kMonths; ++m) out[m] = j.at(m).get<double>();
  return out;
}

std::string title(const SolveResult& r) {
  std::string kind;
  switch (r.report.kind) {
    case ProblemKind::kModel1:
      kind = "Model 1 (max net benefit)";
      break;
    case ProblemKind::kModel2:
      kind = "Model 2 (min env. flow deficiency)";
      break;
    case ProblemKind::kSub1:
      kind = "Subproblem 1";
      break;
    case ProblemKind::kSub2:
      kind = "Subproblem 2";
      break;
  }
  return kind + ", " + std::string(year_label(r.report.year)) + " year, " +
         r.scenario;
}

}  // namespace

SolveResult make_solve_result(const Scenario& s, const SolveReport& report) {
  SolveResult r;
  r.scenario = s.name;
  r.inflow_provenance = s.inflow_provenance;
  for (const CropSpec& c : s.crops) r.crop_names.push_back(c.name);
  r.clamp = s.options.requirement_clamp;
  r.report = report;
  if (report.decision.areas.size() == s.crops.size()) {
    r.flows = derive_flows(s, report.year, report.decision);
    r.total_pumping =
        std::accumulate(r.flows.pumping.begin(), r.flows.pumping.end(), 0.0);
  }
  return r;
}

std::string format_solve_table(const SolveResult& r) {
  std::ostringstream out;
  const SolveReport& rep = r.report;
  out << title(r) << "\n";
  out << "status: " << solve_status_name(rep.status) << " ("
      << solver_name(rep.solver) << ", certificate "
      << (rep.certificate.passed ? "passed" : "not passed") << ")\n";
  if (!rep.message.empty()) out << "note: " << rep.message << "\n";
  if (rep.decision.areas.empty()) return out.str();
  out << "\n" << pad("Crop", 18) << lpad("X_c (ha)", 14) << "\n";
  for (size_t c = 0; c < r.crop_names.size(); ++c) {
    out << pad(r.crop_names[c], 18) << lpad(format_area(rep.decision.areas[c]), 14)
        << "\n";
  }
  out << "\n" << pad("Month", 18);
  for (int m = 0; m < kMonths; ++m) out << lpad(std::string(kMonthNames[m]), 11);
  out << "\n";
  out << month_row("Env.Flow (GL)", rep.decision.env_flow);
  out << month_row("P (GL)", r.flows.pumping);
  out << "\nNet benefit f1   " << format_tk(rep.nb) << " Tk\n";
  out << "EFD f2           " << format_gl(rep.efd) << " GL\n";
  out << "Total pumping    " << format_gl(r.total_pumping) << " GL\n";
  if (r.inflow_provenance != "published" && !r.inflow_provenance.empty()) {
    out << "(inflow series: " << r.inflow_provenance << ")\n";
  }
  return out.str();
}

json solve_to_json(const SolveResult& r) {
  const SolveReport& rep = r.report;
  json doc;
  doc["schema"] = kSolveSchema;
  doc["scenario"] = r.scenario;
  doc["inflow_provenance"] = r.inflow_provenance;
  doc["requirement_clamp"] = std::string(clamp_label(r.clamp));
  doc["year"] = std::string(year_label(rep.year));
  doc["model"] = std::string(kind_label(rep.kind));
  if (rep.weight) doc["weight"] = {{"w1", rep.weight->w1}, {"w2", rep.weight->w2}};
  doc["status"] = std::string(solve_status_name(rep.status));
  doc["solver"] = std::string(solver_name(rep.solver));
  doc["message"] = rep.message;
  doc["objective"] = rep.objective;
  doc["nb"] = rep.nb;
  doc["efd"] = rep.efd;
  doc["stage_values"] = rep.stage_values;
  json areas = json::array();
  for (size_t c = 0; c < r.crop_names.size() && c < rep.decision.areas.size(); ++c) {
    areas.push_back({{"crop", r.crop_names[c]}, {"area", rep.decision.areas[c]}});
  }
  doc["decision"] = {{"areas", areas}, {"env_flow", series(rep.decision.env_flow)}};
  doc["derived"] = {{"requirement", series(r.flows.requirement)},
                    {"allocation", series(r.flows.allocation)},
                    {"pumping", series(r.flows.pumping)},
                    {"tef", series(r.flows.tef)},
                    {"total_pumping", r.total_pumping}};
  json aux = json::array();
  for (const AuxValue& a : rep.auxiliaries) {
    aux.push_back({{"column", a.column},
                   {"role", std::string(role_label(a.role))},
                   {"month", a.month},
                   {"value", a.value}});
  }
  doc["auxiliaries"] = aux;
  const Certificate& c = rep.certificate;
  doc["certificate"] = {{"passed", c.passed},
                        {"failures", c.failures},
                        {"feasible", c.feasible},
                        {"recomputed_nb", c.nb},
                        {"recomputed_efd", c.efd},
                        {"tightness_residual", c.tightness_residual},
                        {"raw_tightness_residual", c.raw_tightness_residual},
                        {"objective_residual", c.objective_residual},
                        {"lp_violation", c.lp_violation},
                        {"big_m_ratio", c.big_m_ratio}};
  if (c.scalarization_slack) {
    doc["certificate"]["scalarization_slack"] = *c.scalarization_slack;
  }
  doc["iterations"] = rep.iterations;
  doc["nodes"] = rep.nodes;
  return doc;
}

std::string solve_to_csv(const SolveResult& r) {
  const SolveReport& rep = r.report;
  std::ostringstream out;
  out << "# schema: " << kSolveSchema << "\n";
  out << "# scenario: " << r.scenario << ", year: " << year_label(rep.year)
      << ", model: " << kind_label(rep.kind)
      << ", status: " << solve_status_name(rep.status) << "\n";
  out << "quantity,index,label,value\n";
  for (size_t c = 0; c < rep.decision.areas.size(); ++c) {
    out << "area," << c << "," << r.crop_names[c] << ","
        << format_exact(rep.decision.areas[c]) << "\n";
  }
  if (!rep.decision.areas.empty()) {
    for (int m = 0; m < kMonths; ++m) {
      out << "env_flow," << m << "," << kMonthNames[m] << ","
          << format_exact(rep.decision.env_flow[m]) << "\n";
    }
    for (int m = 0; m < kMonths; ++m) {
      out << "pumping," << m << "," << kMonthNames[m] << ","
          << format_exact(r.flows.pumping[m]) << "\n";
    }
  }
  out << "nb,,," << format_exact(rep.nb) << "\n";
  out << "efd,,," << format_exact(rep.efd) << "\n";
  out << "total_pumping,,," << format_exact(r.total_pumping) << "\n";
  return out.str();
}

DecisionRecord decision_from_json(const json& doc) {
  try {
    DecisionRecord rec;
    const json& d = doc.at("decision");
    for (const json& a : d.at("areas")) {
      rec.decision.areas.push_back(a.is_object() ? a.at("area").get<double>()
                                                 : a.get<double>());
    }
    rec.decision.env_flow = read_series(d.at("env_flow"), "env_flow");
    rec.nb = doc.at("nb").get<double>();
    rec.efd = doc.at("efd").get<double>();
    if (doc.contains("scenario")) rec.scenario = doc["scenario"].get<std::string>();
    if (doc.contains("year")) rec.year = parse_year(doc["year"].get<std::string>());
    return rec;
  } catch (const json::exception& e) {
    throw ParseError("json", 0, "decision", e.what());
  }
}

std::string format_front_table(const ParetoFront& front) {
  std::ostringstream out;
  out << "Pareto front, " << year_label(front.year) << " year, "
      << front.scenario << " (" << front.points.size() << " points, seed "
      << front.seed << ")\n\n";
  out << lpad("#", 4) << lpad("Net benefit (Tk)", 22) << lpad("EFD (GL)", 14)
      << lpad("w1", 10) << "  source\n";
  for (size_t k = 0; k < front.points.size(); ++k) {
    const ParetoPoint& p = front.points[k];
    char w[32];
    std::snprintf(w, sizeof(w), "%.4f", p.weight.w1);
    out << lpad(std::to_string(k + 1), 4) << lpad(format_tk(p.nb), 22)
        << lpad(format_gl(p.efd), 14) << lpad(w, 10) << "  "
        << source_label(p.provenance) << "\n";
  }
  return out.str();
}

json front_to_json(const ParetoFront& front,
                   const std::vector<std::string>& crop_names) {
  json doc;
  doc["schema"] = kFrontSchema;
  doc["scenario"] = front.scenario;
  doc["year"] = std::string(year_label(front.year));
  doc["seed"] = front.seed;
  doc["crops"] = crop_names;
  json points = json::array();
  for (const ParetoPoint& p : front.points) {
    points.push_back({{"nb", p.nb},
                      {"efd", p.efd},
                      {"w1", p.weight.w1},
                      {"w2", p.weight.w2},
                      {"weight_index", p.weight_index},
                      {"provenance", std::string(source_label(p.provenance))},
                      {"decision",
                       {{"areas", p.decision.areas},
                        {"env_flow", series(p.decision.env_flow)}}}});
  }
  doc["points"] = points;
  return doc;
}

std::string front_to_csv(const ParetoFront& front,
                         const std::vector<std::string>& crop_names) {
  std::ostringstream out;
  out << "# schema: " << kFrontSchema << "\n";
  out << "# scenario: " << front.scenario << ", year: " << year_label(front.year)
      << ", seed: " << front.seed << "\n";
  out << "nb,efd,w1,provenance";
  for (const std::string& c : crop_names) out << ",X[" << c << "]";
  for (int m = 0; m < kMonths; ++m) out << ",E[" << kMonthNames[m] << "]";
  out << "\n";
  for (const ParetoPoint& p : front.points) {
    out << format_exact(p.nb) << "," << format_exact(p.efd) << ","
        << format_exact(p.weight.w1) << "," << source_label(p.provenance);
    for (double a : p.decision.areas) out << "," << format_exact(a);
    for (int m = 0; m < kMonths; ++m) out << "," << format_exact(p.decision.env_flow[m]);
    out << "\n";
  }
  return out.str();
}

std::string front_plot_data(const ParetoFront& front) {
  std::ostringstream out;
  out << "# nb efd\n";
  for (const ParetoPoint& p : front.points) {
    out << format_exact(p.nb) << " " << format_exact(p.efd) << "\n";
  }
  return out.str();
}

ParetoFront front_from_json(const json& doc) {
  try {
    ParetoFront front;
    front.scenario = doc.at("scenario").get<std::string>();
    front.year = parse_year(doc.at("year").get<std::string>());
    front.seed = doc.at("seed").get<std::uint64_t>();
    for (const json& j : doc.at("points")) {
      ParetoPoint p;
      p.nb = j.at("nb").get<double>();
      p.efd = j.at("efd").get<double>();
      p.weight = {j.at("w1").get<double>(), j.at("w2").get<double>()};
      p.weight_index = j.at("weight_index").get<int>();
      p.provenance = parse_source(j.at("provenance").get<std::string>());
      p.decision.areas = j.at("decision").at("areas").get<std::vector<double>>();
      p.decision.env_flow = read_series(j.at("decision").at("env_flow"), "env_flow");
      front.points.push_back(std::move(p));
    }
    return front;
  } catch (const json::exception& e) {
    throw ParseError("json", 0, "front", e.what());
  }
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "# schema: " << kSweepSchema << "\n";
  out << "parameter,value,year,model,status,nb,efd,total_pumping\n";
  for (const SweepRow& r : rows) {
    out << r.parameter << "," << format_exact(r.value) << "," << year_label(r.year)
        << "," << kind_label(r.kind) << "," << solve_status_name(r.status) << ","
        << format_exact(r.nb) << "," << format_exact(r.efd) << ","
        << format_exact(r.total_pumping) << "\n";
  }
  return out.str();
}

std::string format_sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  if (!rows.empty()) {
    out << "Sweep of " << rows.front().parameter << ", "
        << kind_label(rows.front().kind) << ", " << year_label(rows.front().year)
        << " year\n\n";
  }
  out << lpad("value", 12) << lpad("Net benefit (Tk)", 22) << lpad("EFD (GL)", 14)
      << lpad("Pumping (GL)", 16) << "  status\n";
  for (const SweepRow& r : rows) {
    out << lpad(format_exact(r.value), 12) << lpad(format_tk(r.nb), 22)
        << lpad(format_gl(r.efd), 14) << lpad(format_gl(r.total_pumping), 16)
        << "  " << solve_status_name(r.status) << "\n";
  }
  return out.str();
}

std::string sweep_plot_data(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "# value nb efd\n";
  for (const SweepRow& r : rows) {
    out << format_exact(r.value) << " " << format_exact(r.nb) << " "
        << format_exact(r.efd) << "\n";
  }
  return out.str();
}

void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ec;
    for (const fs::path& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        cleanup();
        throw IoError("cannot write " + path.string());
      }
      temps.push_back(tmp);
      out << content;
      out.flush();
      if (!out) {
        cleanup();
        throw IoError("cannot write " + path.string());
      }
    }
  }
  for (size_t k = 0; k < files.size(); ++k) {
    std::error_code ec;
    fs::rename(temps[k], files[k].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot rename into " + files[k].first.string() + ": " +
                    ec.message());
    }
  }
}

}  // namespace wateralloc
