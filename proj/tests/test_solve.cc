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

#include <gtest/gtest.h>

#include <cmath>

#include "support/desk.h"
#include "wateralloc/errors.h"
#include "wateralloc/hydrology.h"
#include "wateralloc/solve.h"

namespace wateralloc {
namespace {

using testing::desk_normalization;
using testing::desk_scenario;

constexpr YearType kDry = YearType::kDry;
const WeightPair kEven{0.5, 0.5};

std::optional<WeightPair> weight_for(ProblemKind kind) {
  if (kind == ProblemKind::kSub1 || kind == ProblemKind::kSub2) return kEven;
  return std::nullopt;
}

const ProblemKind kAllKinds[] = {ProblemKind::kModel1, ProblemKind::kModel2,
                                 ProblemKind::kSub1, ProblemKind::kSub2};

SolveReport solve_desk(ProblemKind kind, const Scenario& s = desk_scenario()) {
  return solve_problem(build_problem(s, kDry, kind, weight_for(kind),
                                     desk_normalization()));
}

TEST(DeskOracle, GridSearchAgrees) {
  const Scenario s = desk_scenario();
  for (ProblemKind kind : kAllKinds) {
    const SolveReport r = solve_desk(kind);
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << kind_label(kind);
    ASSERT_TRUE(r.certificate.passed) << kind_label(kind);
    const testing::GridResult g =
        testing::grid_search(s, kDry, kind, weight_for(kind));
    ASSERT_TRUE(g.found);
    const bool max_nb = kind == ProblemKind::kModel1 || kind == ProblemKind::kSub1;
    const double value = max_nb ? r.certificate.nb : r.certificate.efd;
    EXPECT_LE(std::abs(value - g.best), 1e-6 * std::max(1.0, std::abs(g.best)))
        << kind_label(kind);
    double nearest = 1e300;
    for (const testing::GridPoint& p : g.optima) {
      nearest = std::min(nearest, testing::decision_distance(p.decision, r.decision));
    }
    EXPECT_LE(nearest, 1.0) << kind_label(kind);
  }
}

TEST(DeskOracle, KnownOptima) {
  const SolveReport m1 = solve_desk(ProblemKind::kModel1);
  EXPECT_NEAR(m1.nb, 67.0, 1e-7);
  EXPECT_NEAR(m1.decision.areas[0], 3.0, 1e-7);
  EXPECT_NEAR(m1.decision.areas[1], 10.0, 1e-7);
  const SolveReport m2 = solve_desk(ProblemKind::kModel2);
  EXPECT_NEAR(m2.efd, 0.0, 1e-7);
  // Footprint tie-break: minimum areas.
  EXPECT_NEAR(m2.decision.areas[0], 2.0, 1e-9);
  EXPECT_NEAR(m2.decision.areas[1], 3.0, 1e-9);
}

TEST(Status, InfeasibleWhenPumpingCannotCoverMinimums) {
  Scenario s = desk_scenario();
  s.limits.t_pump = 1.0;
  for (ProblemKind kind : {ProblemKind::kModel1, ProblemKind::kModel2}) {
    const SolveReport r = solve_desk(kind, s);
    EXPECT_EQ(r.status, SolveStatus::kInfeasible) << kind_label(kind);
    EXPECT_FALSE(r.ok());
  }
}

TEST(Status, FixedScalesMakeBundledSub2Infeasible) {
  // With the fixed scales F1 is in the hundreds and F2 below twenty, so
  // w1 F1 <= w2 F2 has no solution at even weights.
  const SolveReport r = solve_problem(
      build_problem(builtin_rajshahi(), kDry, ProblemKind::kSub2, kEven));
  EXPECT_EQ(r.status, SolveStatus::kInfeasible);
}

TEST(Status, Names) {
  EXPECT_EQ(solve_status_name(SolveStatus::kOptimal), "optimal");
  EXPECT_EQ(solve_status_name(SolveStatus::kLocalOnly), "local-only");
  EXPECT_EQ(solver_name(SolverId::kBranchBound), "branch-bound");
}

TEST(Routing, SolverFollowsStructure) {
  const Scenario s = builtin_rajshahi();
  const SolveReport m1 = solve_problem(build_problem(s, kDry, ProblemKind::kModel1));
  EXPECT_EQ(m1.solver, SolverId::kSimplex);
  EXPECT_FALSE(m1.duals.empty());
  const SolveReport m2 = solve_problem(build_problem(s, kDry, ProblemKind::kModel2));
  const Normalization n =
      Normalization::from_anchors(m1.nb, m1.efd, m2.nb, m2.efd);
  const SolveReport s2 =
      solve_problem(build_problem(s, kDry, ProblemKind::kSub2, kEven, n));
  EXPECT_EQ(s2.status, SolveStatus::kOptimal) << s2.message;
  EXPECT_EQ(s2.solver, SolverId::kBranchBound);
  EXPECT_GE(s2.nodes, 1);
  EXPECT_FALSE(s2.proof_log.empty());
  EXPECT_TRUE(s2.certificate.passed);
}

TEST(Bundled, Model1PotatoTakesTheSpareLand) {
  const Scenario s = builtin_rajshahi();
  const SolveReport r = solve_problem(build_problem(s, kDry, ProblemKind::kModel1));
  ASSERT_TRUE(r.certificate.passed);
  for (int c = 0; c < s.num_crops(); ++c) {
    const double expected = s.crops[c].name == "Potato" ? 55271.0 : s.crops[c].min_area;
    EXPECT_EQ(std::lround(r.decision.areas[c]), std::lround(expected)) << s.crops[c].name;
  }
}

TEST(Certificate, ReportsMatchRecomputation) {
  const SolveReport r = solve_desk(ProblemKind::kSub2);
  const Certificate& c = r.certificate;
  EXPECT_TRUE(c.checked);
  EXPECT_TRUE(c.passed);
  EXPECT_TRUE(c.failures.empty());
  EXPECT_TRUE(c.feasible);
  EXPECT_LE(c.tightness_residual, kTightnessTol);
  EXPECT_LE(c.objective_residual, kObjectiveTol);
  EXPECT_LT(c.big_m_ratio, 1.0);
  ASSERT_TRUE(c.scalarization_slack.has_value());
  EXPECT_GE(*c.scalarization_slack, -1e-6);
  EXPECT_DOUBLE_EQ(c.nb, eval_net_benefit(desk_scenario(), kDry, r.decision));
}

TEST(Certificate, CatchesTamperedDecision) {
  const Scenario s = desk_scenario();
  SolveReport r = solve_desk(ProblemKind::kModel1);
  r.decision.areas[1] += 1.0;  // breaks the pumping cap and the stored nb
  const Certificate c = certify(r, s, kDry, ProblemKind::kModel1);
  EXPECT_FALSE(c.passed);
  EXPECT_FALSE(c.feasible);
  EXPECT_FALSE(c.failures.empty());
}

TEST(Certificate, CatchesLooseAuxiliary) {
  const Scenario s = desk_scenario();
  SolveReport r = solve_desk(ProblemKind::kModel2);
  ASSERT_FALSE(r.auxiliaries.empty());
  r.auxiliaries[0].value += 1.0;
  EXPECT_FALSE(certify(r, s, kDry, ProblemKind::kModel2).passed);
}

TEST(Certificate, CatchesWrongObjective) {
  const Scenario s = desk_scenario();
  SolveReport r = solve_desk(ProblemKind::kModel1);
  r.objective *= 1.001;
  EXPECT_FALSE(certify(r, s, kDry, ProblemKind::kModel1).passed);
}

TEST(Certificate, CatchesScalarizationBreach) {
  const Scenario s = desk_scenario();
  // The Model 1 optimum has far too much deficiency for sub1 at even weights.
  const SolveReport m1 = solve_desk(ProblemKind::kModel1);
  SolveReport fake = solve_desk(ProblemKind::kSub1);
  fake.decision = m1.decision;
  fake.nb = m1.nb;
  fake.efd = m1.efd;
  fake.objective = m1.nb;
  fake.auxiliaries = m1.auxiliaries;
  const Certificate c =
      certify(fake, s, kDry, ProblemKind::kSub1, kEven, desk_normalization());
  EXPECT_FALSE(c.passed);
  ASSERT_TRUE(c.scalarization_slack.has_value());
  EXPECT_LT(*c.scalarization_slack, 0.0);
}

// Every auxiliary of every certified optimum equals its max expression.
TEST(Tightness, RandomScenarios) {
  int certified = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    const Normalization n = Normalization::fixed();
    for (ProblemKind kind : kAllKinds) {
      const SolveReport r =
          solve_problem(build_problem(s, kDry, kind, weight_for(kind), n));
      if (r.status != SolveStatus::kOptimal) continue;
      ASSERT_TRUE(r.certificate.passed)
          << seed << " " << kind_label(kind) << ": "
          << (r.certificate.failures.empty() ? "" : r.certificate.failures[0]);
      EXPECT_LE(r.certificate.tightness_residual, kTightnessTol);
      ++certified;
    }
  }
  EXPECT_GT(certified, 80);
}

TEST(Determinism, SameInputSameOutput) {
  const Scenario s = builtin_rajshahi();
  const ProblemSpec p = build_problem(s, kDry, ProblemKind::kSub2, kEven);
  const SolveReport a = solve_problem(p);
  const SolveReport b = solve_problem(p);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(Trace, LinesAreKeyValue) {
  SolveOptions opt;
  std::vector<std::string> lines;
  opt.trace = [&](const std::string& l) { lines.push_back(l); };
  solve_problem(build_problem(desk_scenario(), kDry, ProblemKind::kSub2, kEven,
                              desk_normalization()),
                opt);
  ASSERT_FALSE(lines.empty());
  for (const std::string& l : lines) EXPECT_NE(l.find('='), std::string::npos) << l;
}

TEST(Lexicographic, Model2MinimizesPumpingAfterArea) {
  const Scenario s = builtin_rajshahi();
  const SolveReport r = solve_problem(build_problem(s, kDry, ProblemKind::kModel2));
  ASSERT_TRUE(r.certificate.passed);
  for (int c = 0; c < s.num_crops(); ++c) {
    EXPECT_EQ(std::lround(r.decision.areas[c]), std::lround(s.crops[c].min_area));
  }
  ASSERT_EQ(r.stage_values.size(), 3u);
  // Any other deficiency-optimal decision at minimum areas pumps at least as
  // much: try releasing each month's diversion to the river.
  DecisionVector alt = r.decision;
  const HydroYear& y = s.year(kDry);
  for (int m = 0; m < kMonths; ++m) alt.env_flow[m] = y.inflow[m];
  double pumped = 0.0;
  for (double p : derive_flows(s, kDry, alt).pumping) pumped += p;
  EXPECT_LE(r.stage_values[2], pumped + 1e-6);
}

}  // namespace
}  // namespace wateralloc
