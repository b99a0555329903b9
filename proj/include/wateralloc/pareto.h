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

// Weighted-constraint approximation of the net-benefit / deficiency front:
// two anchor solves, a grid of weights, one pair of subproblems per weight
// and a dominance filter over everything found.

#ifndef WATERALLOC_PARETO_H_
#define WATERALLOC_PARETO_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wateralloc/model.h"
#include "wateralloc/solve.h"

namespace wateralloc {

enum class PointSource { kSub1, kSub2, kAnchorF1, kAnchorF2 };

std::string_view source_label(PointSource source);
PointSource parse_source(std::string_view label);

struct ParetoPoint {
  double nb = 0.0;   // recomputed from the decision
  double efd = 0.0;  // recomputed from the decision
  DecisionVector decision;
  WeightPair weight;
  PointSource provenance = PointSource::kSub1;
  // Position in the weight sequence; anchors sort first (-2 and -1).
  int weight_index = 0;
};

struct ParetoFront {
  std::vector<ParetoPoint> points;  // nb ascending
  std::string scenario;
  YearType year = YearType::kDry;
  std::uint64_t seed = 0;
};

struct AnchorPair {
  ParetoPoint f1;  // max net benefit
  ParetoPoint f2;  // min deficiency, ties broken by max net benefit
  SolveReport f1_report;
  SolveReport f2_report;
};

// Throws SolverError when either anchor solve is not certified optimal.
AnchorPair anchors(const Scenario& s, YearType year,
                   const SolveOptions& options = {});

// w1 = k / (n + 1), k = 1..n. With jitter each w1 moves by up to
// 1 / (4 (n + 1)) drawn from the seed. Throws InvalidArgument for n < 2.
std::vector<WeightPair> generate_weights(int n, std::uint64_t seed = 0,
                                         bool jitter = false);

struct WeightPairOutcome {
  std::vector<ParetoPoint> points;  // zero, one or two
  std::vector<std::string> diagnostics;
  SolveReport sub1;
  SolveReport sub2;
};

// Decisions coincide when every component differs by at most this much,
// relative to max(1, |component|).
inline constexpr double kCoincidenceTol = 1e-6;
// Points whose objectives agree this closely (relative) are merged.
inline constexpr double kMergeTol = 1e-8;

bool decisions_coincide(const DecisionVector& a, const DecisionVector& b,
                        double tol = kCoincidenceTol);
// a dominates b: no worse in both objectives and strictly better in one.
bool dominates(const ParetoPoint& a, const ParetoPoint& b);

WeightPairOutcome solve_weight_pair(const Scenario& s, YearType year,
                                    const WeightPair& w,
                                    const Normalization& normalization,
                                    int weight_index = 0,
                                    const SolveOptions& options = {});

ParetoFront assemble_front(std::vector<ParetoPoint> candidates,
                           const std::string& scenario = "",
                           YearType year = YearType::kDry,
                           std::uint64_t seed = 0);

struct ParetoOptions {
  int n_weights = 20;
  std::uint64_t seed = 0;
  bool jitter = false;
  // Normalize the scalarization with the anchors; fixed scales otherwise.
  bool anchor_normalization = true;
  SolveOptions solve;
};

struct FrontRun {
  ParetoFront front;
  AnchorPair anchors;
  Normalization normalization;
  std::vector<WeightPair> weights;
  std::vector<std::string> diagnostics;
};

FrontRun trace_front(const Scenario& s, YearType year,
                     const ParetoOptions& options = {});

}  // namespace wateralloc

#endif  // WATERALLOC_PARETO_H_
