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

// Approximate solver working on the original nonsmooth problem: every
// max(0, x) is replaced by mu * log(1 + exp(x / mu)), and a projected
// gradient method with an augmented Lagrangian for the pumping cap (and the
// scalarization row of the subproblems) runs from many random starts.
// Nothing here certifies global optimality; results are "local-only".

#ifndef WATERALLOC_SMOOTHED_H_
#define WATERALLOC_SMOOTHED_H_

#include <cstdint>
#include <vector>

#include "wateralloc/model.h"
#include "wateralloc/solve.h"

namespace wateralloc {

// mu * log(1 + exp(x / mu)), evaluated without overflow.
double softplus(double x, double mu);

struct SmoothingSchedule {
  double initial_factor = 1e-2;  // times each term's own scale
  double decay = 10.0;           // mu divisor between stages
  int stages = 3;
};

struct SmoothedOptions {
  int n_starts = 20;
  std::uint64_t seed = 1;
  SmoothingSchedule schedule;
  int inner_iterations = 400;
  int outer_iterations = 25;
  // Used before any random start, in order. Each counts as one start.
  std::vector<DecisionVector> initial_points;
  TraceFn trace;
};

// Smoothed f1, f2 and total pumping at d, with mu = factor * term scale.
struct SmoothedValues {
  double f1 = 0.0;
  double f2 = 0.0;
  double total_pumping = 0.0;
};

SmoothedValues smoothed_objectives(const Scenario& s, YearType year,
                                   const DecisionVector& d, double mu_factor);

// The random starting decisions for a seed, in start order.
std::vector<DecisionVector> random_starts(const Scenario& s, YearType year,
                                          int count, std::uint64_t seed);

SolveReport solve_smoothed_multistart(const ProblemSpec& p,
                                      const SmoothedOptions& options);
SolveReport solve_smoothed_multistart(const ProblemSpec& p, int n_starts,
                                      std::uint64_t seed,
                                      const SmoothingSchedule& schedule = {});

}  // namespace wateralloc

#endif  // WATERALLOC_SMOOTHED_H_
