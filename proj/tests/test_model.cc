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

#include <algorithm>
#include <cmath>
#include <random>

#include "support/desk.h"
#include "wateralloc/errors.h"
#include "wateralloc/hydrology.h"
#include "wateralloc/model.h"

namespace wateralloc {
namespace {

constexpr YearType kDry = YearType::kDry;
const WeightPair kEven{0.5, 0.5};

std::optional<WeightPair> weight_for(ProblemKind kind) {
  if (kind == ProblemKind::kSub1 || kind == ProblemKind::kSub2) return kEven;
  return std::nullopt;
}

const ProblemKind kAllKinds[] = {ProblemKind::kModel1, ProblemKind::kModel2,
                                 ProblemKind::kSub1, ProblemKind::kSub2};

// Random point of the box over which the lowering bounds its terms.
DecisionVector random_box_point(const Scenario& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const HydroYear& y = s.year(kDry);
  DecisionVector d = min_area_decision(s);
  const double spare = s.limits.t_area - s.total_min_area();
  for (double& x : d.areas) x += u(rng) * spare / s.num_crops();
  for (int m = 0; m < kMonths; ++m) {
    const double lo = std::max(0.0, y.inflow[m] - s.limits.canal_cap);
    d.env_flow[m] = lo + u(rng) * (y.inflow[m] - lo);
  }
  return d;
}

TEST(Labels, KindsRoundTrip) {
  for (ProblemKind k : kAllKinds) EXPECT_EQ(parse_kind(kind_label(k)), k);
  EXPECT_EQ(parse_kind("1"), ProblemKind::kModel1);
  EXPECT_EQ(parse_kind("2"), ProblemKind::kModel2);
  EXPECT_THROW(parse_kind("model3"), InvalidArgument);
  EXPECT_EQ(structure_label(Structure::kReverseConvexMilp), "reverse-convex-MILP");
}

TEST(Weights, Validation) {
  EXPECT_NO_THROW(check_weight({0.3, 0.7}));
  EXPECT_THROW(check_weight({0.0, 1.0}), InvalidArgument);
  EXPECT_THROW(check_weight({0.6, 0.6}), InvalidArgument);
  EXPECT_THROW(check_weight({-0.5, 1.5}), InvalidArgument);
}

TEST(BuildProblem, WeightPresentIffSubproblem) {
  const Scenario s = builtin_rajshahi();
  EXPECT_THROW(build_problem(s, kDry, ProblemKind::kModel1, kEven), InvalidArgument);
  EXPECT_THROW(build_problem(s, kDry, ProblemKind::kSub1), InvalidArgument);
  EXPECT_THROW(build_problem(s, kDry, ProblemKind::kSub2, WeightPair{0.5, 0.6}),
               InvalidArgument);
  EXPECT_NO_THROW(build_problem(s, kDry, ProblemKind::kSub2, kEven));
}

TEST(BuildProblem, MissingYear) {
  const Scenario s = testing::desk_scenario();
  EXPECT_THROW(build_problem(s, YearType::kWet, ProblemKind::kModel1), InvalidArgument);
}

TEST(Structure, BundledScenario) {
  const Scenario s = builtin_rajshahi();
  for (YearType y : {YearType::kDry, YearType::kAverage, YearType::kWet}) {
    EXPECT_EQ(build_problem(s, y, ProblemKind::kModel1).structure,
              Structure::kConcaveMaxLp);
    EXPECT_EQ(build_problem(s, y, ProblemKind::kModel2).structure,
              Structure::kConvexMinLp);
    EXPECT_EQ(build_problem(s, y, ProblemKind::kSub1, WeightPair{0.9, 0.1}).structure,
              Structure::kConvexConstrainedLp);
    EXPECT_EQ(build_problem(s, y, ProblemKind::kSub2, kEven).structure,
              Structure::kReverseConvexMilp);
  }
}

TEST(Structure, CheapPumpingNeedsBinariesInModel1) {
  Scenario s = testing::desk_scenario();
  s.economics.cp = 0.5;
  const ProblemSpec p = build_problem(s, kDry, ProblemKind::kModel1);
  EXPECT_EQ(p.structure, Structure::kReverseConvexMilp);
  EXPECT_GT(lower(p).num_binaries(), 0);
  EXPECT_THROW(lower_to_lp(p), InvalidArgument);
}

TEST(Lowering, RoutesByStructure) {
  const Scenario s = builtin_rajshahi();
  const ProblemSpec m1 = build_problem(s, kDry, ProblemKind::kModel1);
  const ProblemSpec s2 = build_problem(s, kDry, ProblemKind::kSub2, kEven);
  EXPECT_THROW(lower_to_milp(m1), InvalidArgument);
  EXPECT_THROW(lower_to_lp(s2), InvalidArgument);
  EXPECT_EQ(lower(m1).num_binaries(), 0);
  EXPECT_FALSE(lower(m1).lp.is_mip());
  EXPECT_TRUE(lower(s2).lp.is_mip());
}

TEST(Lowering, BinaryCounts) {
  Scenario s = builtin_rajshahi();
  LoweringOptions keep;
  keep.eliminate_sign_determined = false;
  const ProblemSpec p = build_problem(s, kDry, ProblemKind::kSub2, kEven);
  // One binary per pumping and per deficiency term.
  EXPECT_EQ(lower(p, keep).num_binaries(), 24);
  EXPECT_LT(lower(p).num_binaries(), 24);
  s.options.requirement_clamp = RequirementClamp::kMonthly;
  EXPECT_EQ(lower(build_problem(s, kDry, ProblemKind::kSub2, kEven), keep).num_binaries(),
            36);
}

TEST(Lowering, ColumnNames) {
  const LoweredProgram l =
      lower(build_problem(builtin_rajshahi(), kDry, ProblemKind::kSub2, kEven));
  const auto& names = l.lp.col_names;
  auto has = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  EXPECT_TRUE(has("X_1"));
  EXPECT_TRUE(has("X_9"));
  EXPECT_TRUE(has("E_Jan"));
  EXPECT_TRUE(has("E_Dec"));
  EXPECT_EQ(l.area_cols.size(), 9u);
  EXPECT_EQ(l.env_cols.size(), 12u);
  const auto& rows = l.lp.row_names;
  EXPECT_NE(std::find(rows.begin(), rows.end(), "pump_cap"), rows.end());
  EXPECT_NE(std::find(rows.begin(), rows.end(), "scalarize_sub2"), rows.end());
  for (int j = 0; j < l.lp.num_cols(); ++j) {
    if (l.columns[j].role == ColumnRole::kBinary) {
      EXPECT_EQ(names[j].rfind("z_", 0), 0u) << names[j];
      EXPECT_TRUE(l.lp.integer[j]);
    }
  }
}

TEST(Lowering, BigMCoversTermRange) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    const LoweredProgram l = lower(build_problem(s, kDry, ProblemKind::kSub2, kEven));
    for (const MaxTerm& t : l.terms) {
      if (!t.exact) continue;
      EXPECT_GE(t.big_m, std::max(std::abs(t.lower), std::abs(t.upper)));
      EXPECT_GE(t.binary, 0);
    }
  }
}

// The affine objective forms, read at the embedding of any box point, agree
// with the hydrology evaluation.
TEST(Lowering, ObjectiveFormsMatchHydrology) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    std::mt19937_64 rng(seed);
    for (ProblemKind kind : kAllKinds) {
      const LoweredProgram l = lower(build_problem(s, kDry, kind, weight_for(kind)));
      for (int k = 0; k < 4; ++k) {
        const DecisionVector d = random_box_point(s, rng);
        const std::vector<double> x = l.embed(d);
        const double nb = eval_net_benefit(s, kDry, d);
        const double efd = eval_efd(s, kDry, d);
        EXPECT_NEAR(l.f1.evaluate(x), nb, 1e-9 * std::max(1.0, std::abs(nb)))
            << seed << " " << kind_label(kind);
        EXPECT_NEAR(l.f2.evaluate(x), efd, 1e-9 * std::max(1.0, efd))
            << seed << " " << kind_label(kind);
        EXPECT_EQ(l.decision(x), d);
      }
    }
  }
}

TEST(Lowering, EmbeddedFeasiblePointsSatisfyRows) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    std::mt19937_64 rng(seed);
    for (ProblemKind kind : {ProblemKind::kModel1, ProblemKind::kModel2}) {
      const LoweredProgram l = lower(build_problem(s, kDry, kind));
      for (int k = 0; k < 6; ++k) {
        const DecisionVector d = random_box_point(s, rng);
        const bool feasible = check_feasible(s, kDry, d, 1e-12).feasible;
        const double violation = l.lp.max_violation(l.embed(d));
        if (feasible) {
          EXPECT_LE(violation, 1e-9) << seed;
        } else {
          EXPECT_GT(violation, 0.0) << seed;
        }
      }
    }
  }
}

TEST(Lowering, TightenedIsIdempotent) {
  const Scenario s = testing::random_scenario(3);
  const LoweredProgram l = lower(build_problem(s, kDry, ProblemKind::kSub2, kEven));
  std::mt19937_64 rng(3);
  std::vector<double> x = l.embed(random_box_point(s, rng));
  // Loosen every auxiliary, then tighten twice.
  for (const MaxTerm& t : l.terms) {
    if (t.column >= 0) x[t.column] += 5.0;
  }
  const std::vector<double> once = l.tightened(x);
  EXPECT_EQ(l.tightened(once), once);
  for (const MaxTerm& t : l.terms) {
    if (t.column < 0) continue;
    EXPECT_NEAR(once[t.column], std::max(0.0, t.expr.evaluate(once)), 1e-12);
  }
}

TEST(Lowering, EliminatedTermsHaveFixedSign) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = testing::random_scenario(seed);
    const LoweredProgram l = lower(build_problem(s, kDry, ProblemKind::kModel1));
    for (const MaxTerm& t : l.terms) {
      if (t.column >= 0) continue;
      EXPECT_TRUE(t.lower >= 0.0 || t.upper <= 0.0) << seed;
    }
  }
}

TEST(Lowering, StagesFollowTieBreak) {
  const Scenario s = builtin_rajshahi();
  const LoweredProgram m2 = lower(build_problem(s, kDry, ProblemKind::kModel2));
  ASSERT_EQ(m2.stages.size(), 3u);
  EXPECT_EQ(m2.stages[0].sense, ObjectiveSense::kMinimize);
  LoweringOptions benefit;
  benefit.model2_tie_break = Model2TieBreak::kMaxBenefit;
  const LoweredProgram alt = lower(build_problem(s, kDry, ProblemKind::kModel2), benefit);
  ASSERT_EQ(alt.stages.size(), 2u);
  EXPECT_EQ(alt.stages[1].sense, ObjectiveSense::kMaximize);
  LoweringOptions single;
  single.lexicographic = false;
  EXPECT_EQ(lower(build_problem(s, kDry, ProblemKind::kModel1), single).stages.size(), 1u);
}

TEST(Normalization, AnchorsMapToUnitSquare) {
  const Normalization n = Normalization::from_anchors(10.0, 8.0, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(n.F1(2.0), 0.0);
  EXPECT_DOUBLE_EQ(n.F1(10.0), 1.0);
  EXPECT_DOUBLE_EQ(n.F2(0.5), 0.0);
  EXPECT_DOUBLE_EQ(n.F2(8.0), 1.0);
  const Normalization flat = Normalization::from_anchors(3.0, 1.0, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(flat.f1_scale, 1.0);
  EXPECT_DOUBLE_EQ(flat.f2_scale, 1.0);
}

}  // namespace
}  // namespace wateralloc
