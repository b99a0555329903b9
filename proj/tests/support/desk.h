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

// Test fixtures: a two-crop desk instance small enough for brute force, a
// grid-search oracle over it, and random scenario generation.

#ifndef WATERALLOC_TESTS_SUPPORT_DESK_H_
#define WATERALLOC_TESTS_SUPPORT_DESK_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "wateralloc/hydrology.h"
#include "wateralloc/model.h"
#include "wateralloc/scenario.h"

namespace wateralloc::testing {

// Two crops, demand in January to May only, inflow in January to April.
// Data are integral (1 GL per ha of demand) so that the optima sit on the
// one-unit grid.
Scenario desk_scenario();

// Normalization used for the desk subproblems.
Normalization desk_normalization();

struct GridPoint {
  DecisionVector decision;
  double nb = 0.0;
  double efd = 0.0;
};

struct GridResult {
  bool found = false;
  double best = 0.0;  // optimum of the primary objective over the grid
  // Every grid point whose primary value ties `best` within 1e-9 relative.
  std::vector<GridPoint> optima;
  long evaluated = 0;
  long feasible = 0;
};

// Exhaustive search over areas on a `area_step` grid and env flows on a
// `flow_step` grid (each month from its lower to its upper bound, both
// included). Objectives and feasibility come from the hydrology functions.
GridResult grid_search(const Scenario& s, YearType year, ProblemKind kind,
                       std::optional<WeightPair> weight = std::nullopt,
                       const Normalization& normalization = desk_normalization(),
                       double area_step = 1.0, double flow_step = 1.0);

// Largest per-coordinate gap between two decisions.
double decision_distance(const DecisionVector& a, const DecisionVector& b);

// A random but valid scenario: 2 to 5 crops, random coefficients, inflows and
// limits, with min areas and pumping capacity chosen so the models stay
// feasible. Mixes all three requirement clamps.
Scenario random_scenario(std::uint64_t seed);

}  // namespace wateralloc::testing

#endif  // WATERALLOC_TESTS_SUPPORT_DESK_H_
