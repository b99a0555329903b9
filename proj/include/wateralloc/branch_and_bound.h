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

// Best-first branch and bound over the integer columns of a LinearProgram,
// with the simplex solver for node relaxations.

#ifndef WATERALLOC_BRANCH_AND_BOUND_H_
#define WATERALLOC_BRANCH_AND_BOUND_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wateralloc/lp.h"
#include "wateralloc/simplex.h"

namespace wateralloc {

enum class MilpStatus { kOptimal, kInfeasible, kUnbounded, kNodeLimit };

std::string_view milp_status_name(MilpStatus status);

// One line per processed node. Bounds are in the program's own sense.
struct ProofLogEntry {
  int node = 0;
  int depth = 0;
  double node_bound = 0.0;    // relaxation value at this node
  double global_bound = 0.0;  // best bound over open nodes
  double incumbent = 0.0;     // +-infinity before the first incumbent
  bool has_incumbent = false;
};

struct MilpOptions {
  double relative_gap = 1e-6;
  double absolute_gap = 1e-9;
  int node_limit = 100000;
  double integrality_tol = 1e-6;
  SimplexOptions lp;
  // Optional repair heuristic: maps a relaxed node solution to a candidate
  // full solution. Candidates are verified before they are accepted.
  std::function<std::optional<std::vector<double>>(const std::vector<double>&)>
      heuristic;
  std::function<void(const std::string&)> trace;
};

struct MilpResult {
  MilpStatus status = MilpStatus::kInfeasible;
  double objective = 0.0;  // incumbent, original sense
  double bound = 0.0;      // proven bound, original sense
  std::vector<double> x;
  int nodes = 0;
  int lp_iterations = 0;
  std::vector<ProofLogEntry> log;

  bool has_solution() const { return !x.empty(); }
  double gap() const;
};

MilpResult solve_branch_and_bound(const LinearProgram& lp,
                                  const MilpOptions& options = {});

}  // namespace wateralloc

#endif  // WATERALLOC_BRANCH_AND_BOUND_H_
