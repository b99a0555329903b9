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

// Bounded-variable revised primal simplex with a dense explicit basis
// inverse. Intended for the small programs built in this library (a few
// hundred columns at most).

#ifndef WATERALLOC_SIMPLEX_H_
#define WATERALLOC_SIMPLEX_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wateralloc/lp.h"

namespace wateralloc {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view lp_status_name(LpStatus status);

struct SimplexOptions {
  double optimality_tol = 1e-9;   // on scaled reduced costs
  double feasibility_tol = 1e-9;  // on scaled primal values
  double pivot_tol = 1e-9;
  int iteration_limit = 50000;
  int refactor_interval = 50;
  // Consecutive degenerate pivots before Bland's rule takes over.
  int degenerate_streak = 50;
  bool scale = true;
  // Receives one key=value line per iteration when set.
  std::function<void(const std::string&)> trace;
};

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;  // original sense, including the offset
  std::vector<double> x;
  // Change of the objective per unit increase of each row's rhs.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  // Unbounded: a direction of improvement for x.
  std::vector<double> ray;
  // Infeasible: rows that phase 1 could not satisfy.
  std::vector<int> infeasible_rows;
  int iterations = 0;
  int phase1_iterations = 0;
  int bland_pivots = 0;
};

// Ignores any integrality flags.
LpResult solve_simplex(const LinearProgram& lp,
                       const SimplexOptions& options = {});

}  // namespace wateralloc

#endif  // WATERALLOC_SIMPLEX_H_
