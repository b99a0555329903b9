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

// Text tables, machine formats and plot data for solves, fronts and sweeps.
// Every format of one result is rendered from the same result object.

#ifndef WATERALLOC_REPORT_H_
#define WATERALLOC_REPORT_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wateralloc/hydrology.h"
#include "wateralloc/pareto.h"
#include "wateralloc/scenario.h"
#include "wateralloc/solve.h"

namespace wateralloc {

inline constexpr char kSolveSchema[] = "wateralloc.solve/1";
inline constexpr char kFrontSchema[] = "wateralloc.front/1";
inline constexpr char kSweepSchema[] = "wateralloc.sweep/1";

// "2.4565 x 10^10": money the way the published tables print it.
std::string format_tk(double value);
// Four decimals, for GL.
std::string format_gl(double value);
// Shortest text that reads back to the same double.
std::string format_exact(double value);

struct SolveResult {
  std::string scenario;
  std::string inflow_provenance;
  std::vector<std::string> crop_names;
  RequirementClamp clamp = RequirementClamp::kMonthly;
  SolveReport report;
  DerivedFlows flows;
  double total_pumping = 0.0;
};

SolveResult make_solve_result(const Scenario& s, const SolveReport& report);

std::string format_solve_table(const SolveResult& r);
nlohmann::json solve_to_json(const SolveResult& r);
std::string solve_to_csv(const SolveResult& r);

// The decision and stored objectives of a solve document or a front point.
struct DecisionRecord {
  DecisionVector decision;
  double nb = 0.0;
  double efd = 0.0;
  std::string scenario;
  YearType year = YearType::kDry;
};

// Throws ParseError on a document that does not follow the solve schema.
DecisionRecord decision_from_json(const nlohmann::json& doc);

std::string format_front_table(const ParetoFront& front);
nlohmann::json front_to_json(const ParetoFront& front,
                             const std::vector<std::string>& crop_names);
// nb, efd, w1, provenance, then one column per crop area and per month.
std::string front_to_csv(const ParetoFront& front,
                         const std::vector<std::string>& crop_names);
// Two columns, nb and efd.
std::string front_plot_data(const ParetoFront& front);
ParetoFront front_from_json(const nlohmann::json& doc);

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  YearType year = YearType::kDry;
  ProblemKind kind = ProblemKind::kModel1;
  SolveStatus status = SolveStatus::kOptimal;
  double nb = 0.0;
  double efd = 0.0;
  double total_pumping = 0.0;
};

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string format_sweep_table(const std::vector<SweepRow>& rows);
std::string sweep_plot_data(const std::vector<SweepRow>& rows);

// Writes every file to a temporary sibling first and renames them only
// when all writes succeeded. Throws IoError and leaves no partial file.
void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace wateralloc

#endif  // WATERALLOC_REPORT_H_
