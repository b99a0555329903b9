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

// The net-benefit model, the deficiency model and the two weighted-
// constraint subproblems, and their lowering to linear programs.
//
// Every max(0, expr) term becomes an auxiliary column y >= expr, y >= 0.
// That is exact whenever raising y can never help the solver (its objective
// and constraint coefficients all point the "costly" way). Terms that fail
// this sign test get a binary z and the big-M pair
//   y <= expr + M (1 - z),   y <= M z,
// which pins y to max(0, expr).

#ifndef WATERALLOC_MODEL_H_
#define WATERALLOC_MODEL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wateralloc/hydrology.h"
#include "wateralloc/lp.h"
#include "wateralloc/scenario.h"

namespace wateralloc {

enum class ProblemKind { kModel1, kModel2, kSub1, kSub2 };

std::string_view kind_label(ProblemKind kind);
// Accepts "model1", "model2", "sub1", "sub2" (and "1", "2").
ProblemKind parse_kind(std::string_view label);

enum class Structure {
  kConcaveMaxLp,
  kConvexMinLp,
  kConvexConstrainedLp,
  kReverseConvexMilp,
};

std::string_view structure_label(Structure structure);

struct WeightPair {
  double w1 = 0.5;
  double w2 = 0.5;

  bool operator==(const WeightPair&) const = default;
};

// Throws InvalidArgument unless both weights are positive and sum to 1.
void check_weight(const WeightPair& w);

// Scalarized objectives F1 = (f1 - f1_offset) * f1_scale and likewise F2.
struct Normalization {
  double f1_offset = 0.0;
  double f1_scale = 1e-8;
  double f2_offset = 0.0;
  double f2_scale = 1e-2;

  // The fixed scales used when no anchors are available.
  static Normalization fixed();
  // Maps the f2 anchor to (0, 0) and the f1 anchor to (1, 1). A degenerate
  // range falls back to unit scale for that objective.
  static Normalization from_anchors(double nb_at_f1_anchor,
                                    double efd_at_f1_anchor,
                                    double nb_at_f2_anchor,
                                    double efd_at_f2_anchor);

  double F1(double f1) const { return (f1 - f1_offset) * f1_scale; }
  double F2(double f2) const { return (f2 - f2_offset) * f2_scale; }

  bool operator==(const Normalization&) const = default;
};

// Secondary objectives used to pick one optimum when the primary one has
// many (f2 does not depend on the areas at all).
enum class Model2TieBreak {
  kMinimalFootprint,  // min f2, then min total area, then min total pumping
  kMaxBenefit,        // min f2, then max f1
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kModel1;
  Scenario scenario;
  YearType year = YearType::kDry;
  std::optional<WeightPair> weight;
  Normalization normalization;
  Structure structure = Structure::kConcaveMaxLp;

  const HydroYear& hydro() const { return scenario.year(year); }
};

// Throws InvalidArgument for a missing or extra weight, a bad weight, or an
// unknown year. The structure is set by sign analysis of the lowering.
ProblemSpec build_problem(const Scenario& s, YearType year, ProblemKind kind,
                          std::optional<WeightPair> weight = std::nullopt,
                          const Normalization& normalization =
                              Normalization::fixed());

enum class ColumnRole {
  kArea,
  kEnvFlow,
  kRequirement,  // u_m = max(0, W_m), monthly clamp only
  kPumping,      // t_m
  kDeficiency,   // s_m
  kBinary,       // z for one of the above
};

std::string_view role_label(ColumnRole role);

struct ColumnTag {
  ColumnRole role = ColumnRole::kArea;
  int index = 0;  // crop for areas, month otherwise
  // For binaries: the auxiliary column they encode.
  int target_column = -1;
};

struct LoweringOptions {
  // Drops auxiliaries whose expression has a fixed sign over the box.
  bool eliminate_sign_determined = true;
  // Adds the secondary objectives used for tie-breaking.
  bool lexicographic = true;
  Model2TieBreak model2_tie_break = Model2TieBreak::kMinimalFootprint;
};

struct ObjectiveStage {
  std::string name;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<double> coefficients;
  double offset = 0.0;
};

// Affine form over the program's columns.
struct AffineForm {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  double evaluate(const std::vector<double>& x) const;
};

// One max(0, expr) term of the original problem.
struct MaxTerm {
  ColumnRole role = ColumnRole::kPumping;
  int month = 0;
  AffineForm expr;
  double lower = 0.0;  // bounds of expr over the box
  double upper = 0.0;
  // Column carrying the term, or -1 when eliminated (then the term equals
  // expr when lower >= 0 and 0 when upper <= 0).
  int column = -1;
  bool exact = false;  // encoded with a binary
  int binary = -1;
  double big_m = 0.0;
  bool pressured = false;  // the final objective pushes the column down
};

struct LoweredProgram {
  LinearProgram lp;  // objective = stages.front()
  std::vector<ColumnTag> columns;
  std::vector<ObjectiveStage> stages;
  std::vector<MaxTerm> terms;
  Structure structure = Structure::kConcaveMaxLp;
  ProblemSpec problem;
  LoweringOptions options;

  std::vector<int> area_cols;  // per crop
  std::vector<int> env_cols;   // per month
  AffineForm f1;
  AffineForm f2;
  AffineForm total_pumping;

  int num_binaries() const;
  // Reads areas and env flows out of a column vector.
  DecisionVector decision(const std::vector<double>& x) const;
  // Sets every auxiliary and binary to the value implied by the decision
  // columns, in dependency order.
  std::vector<double> tightened(const std::vector<double>& x) const;
  // Column vector for a decision, with tightened auxiliaries.
  std::vector<double> embed(const DecisionVector& d) const;
};

// Throws InvalidArgument when p needs binaries.
LoweredProgram lower_to_lp(const ProblemSpec& p,
                           const LoweringOptions& options = {});
// Throws InvalidArgument unless p needs binaries.
LoweredProgram lower_to_milp(const ProblemSpec& p,
                             const LoweringOptions& options = {});
// Either of the above, as the structure requires.
LoweredProgram lower(const ProblemSpec& p, const LoweringOptions& options = {});

}  // namespace wateralloc

#endif  // WATERALLOC_MODEL_H_
