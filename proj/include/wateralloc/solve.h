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

// Exact solves of lowered programs and the audit that certifies them.
//
// A lowered program may carry several objective stages. Each later stage is
// solved with the earlier optima pinned by one extra row, so the returned
// point is lexicographically optimal up to the stage tolerance.

#ifndef WATERALLOC_SOLVE_H_
#define WATERALLOC_SOLVE_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wateralloc/branch_and_bound.h"
#include "wateralloc/hydrology.h"
#include "wateralloc/model.h"

namespace wateralloc {

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kLocalOnly,
};

std::string_view solve_status_name(SolveStatus status);

enum class SolverId { kSimplex, kBranchBound, kSmoothedMultistart };

std::string_view solver_name(SolverId id);

using TraceFn = std::function<void(const std::string&)>;

struct Certificate {
  bool checked = false;
  bool passed = false;
  std::vector<std::string> failures;

  // Objectives recomputed from the decision by the hydrology functions.
  double nb = 0.0;
  double efd = 0.0;
  bool feasible = false;
  double worst_feasibility = 0.0;
  // Largest |aux - max(0, expr)| / max(1, |expr|) over the reported
  // auxiliaries.
  double tightness_residual = 0.0;
  // Same, on the raw solver output, over columns the final objective
  // pushes down. Set by the exact solvers only.
  double raw_tightness_residual = 0.0;
  // Relative gap between the reported and recomputed primary objective.
  double objective_residual = 0.0;
  // Row and bound violation of the reported column vector.
  double lp_violation = 0.0;
  // Largest |expr| / M over big-M encoded terms; must stay below 1.
  double big_m_ratio = 0.0;
  // Slack of the scalarization constraint on recomputed values (>= -tol).
  std::optional<double> scalarization_slack;
};

struct AuxValue {
  std::string column;
  ColumnRole role = ColumnRole::kPumping;
  int month = 0;
  double value = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kIterationLimit;
  SolverId solver = SolverId::kSimplex;
  ProblemKind kind = ProblemKind::kModel1;
  YearType year = YearType::kDry;
  std::optional<WeightPair> weight;
  Normalization normalization;

  // Primary objective, unscaled, original sense.
  double objective = 0.0;
  // Value of every stage at the returned point.
  std::vector<double> stage_values;
  double nb = 0.0;
  double efd = 0.0;
  DecisionVector decision;
  std::vector<AuxValue> auxiliaries;
  // Full column vector (exact solvers only).
  std::vector<double> x;
  std::vector<double> duals;  // last stage, exact LP route only

  int iterations = 0;
  int nodes = 0;
  double bound = 0.0;  // proven bound of the primary stage (MILP route)
  std::vector<ProofLogEntry> proof_log;
  double wall_seconds = 0.0;

  // Failure detail.
  std::vector<double> ray;
  std::vector<std::string> infeasible_rows;
  std::string message;

  Certificate certificate;

  bool ok() const {
    return status == SolveStatus::kOptimal || status == SolveStatus::kLocalOnly;
  }
};

struct SolveOptions {
  double optimality_tol = 1e-8;
  double mip_gap = 1e-6;
  int node_limit = 100000;
  LoweringOptions lowering;
  TraceFn trace;
};

// Solves every stage of an LP lowering with the simplex method.
// Throws InvalidArgument when the program has integer columns.
SolveReport solve_lp(const LoweredProgram& lowered, double tol = 1e-8,
                     const TraceFn& trace = {});

// Same for a lowering with binaries, by branch and bound.
SolveReport solve_milp(const LoweredProgram& lowered, double gap = 1e-6,
                       int node_limit = 100000, const TraceFn& trace = {});

// Lowers p, picks the route and certifies the result. An audit failure
// downgrades an optimal status to iteration-limit.
SolveReport solve_problem(const ProblemSpec& p, const SolveOptions& options = {});

// Recomputes everything from the decision via the hydrology functions.
Certificate certify(const SolveReport& report, const Scenario& s,
                    YearType year, ProblemKind kind,
                    std::optional<WeightPair> weight = std::nullopt,
                    const Normalization& normalization = Normalization::fixed());

// Relative tolerances used by the audit.
inline constexpr double kTightnessTol = 1e-8;
inline constexpr double kObjectiveTol = 1e-8;
inline constexpr double kFeasibilityTol = 1e-6;

}  // namespace wateralloc

#endif  // WATERALLOC_SOLVE_H_
