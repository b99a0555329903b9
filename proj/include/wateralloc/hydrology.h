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

// Exact evaluation of water flows and both objectives for a candidate
// allocation. Solvers never evaluate objectives themselves; certification
// always goes through these functions.

#ifndef WATERALLOC_HYDROLOGY_H_
#define WATERALLOC_HYDROLOGY_H_

#include <string>
#include <vector>

#include "wateralloc/scenario.h"

namespace wateralloc {

struct DecisionVector {
  std::vector<double> areas;  // ha, one per crop in scenario order
  MonthSeries env_flow{};     // GL

  bool operator==(const DecisionVector&) const = default;
};

struct DerivedFlows {
  MonthSeries requirement{};          // signed W_m
  MonthSeries pumping_requirement{};  // W_m after the clamp option
  MonthSeries allocation{};
  MonthSeries pumping{};
  MonthSeries tef{};
};

// Requirement used for pumping and surface-water cost under `clamp`.
MonthSeries clamped_requirement(const Scenario& s, const HydroYear& year,
                                const std::vector<double>& areas,
                                RequirementClamp clamp);

// All functions below throw DimensionError if d does not match s.
DerivedFlows derive_flows(const Scenario& s, YearType year,
                          const DecisionVector& d);

enum class BenefitMode { kLegacy, kExtended };

double eval_net_benefit(const Scenario& s, YearType year,
                        const DecisionVector& d,
                        BenefitMode mode = BenefitMode::kExtended);

double eval_efd(const Scenario& s, YearType year, const DecisionVector& d);

// Constraint families of the feasible set.
inline constexpr char kFamilyPumping[] = "pumping capacity";
inline constexpr char kFamilyMinArea[] = "minimum area";
inline constexpr char kFamilyTotalArea[] = "total area";
inline constexpr char kFamilyEnvFlow[] = "env_flow <= inflow";
inline constexpr char kFamilyCanal[] = "canal capacity";
inline constexpr char kFamilyNonnegative[] = "nonnegativity";

struct ConstraintSlack {
  std::string family;
  int index = -1;  // crop or month; -1 for aggregate rows
  double slack = 0.0;  // >= 0 when satisfied
  double scale = 1.0;  // slack is judged relative to this
  bool violated = false;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<ConstraintSlack> slacks;

  std::vector<std::string> violated_families() const;
  double worst_relative_violation() const;
};

// `tol` is relative to each family's own scale.
FeasibilityVerdict check_feasible(const Scenario& s, YearType year,
                                  const DecisionVector& d, double tol = 1e-6);

// Decision with every crop at its minimum area and env_flow as given.
DecisionVector min_area_decision(const Scenario& s,
                                 const MonthSeries& env_flow = {});

}  // namespace wateralloc

#endif  // WATERALLOC_HYDROLOGY_H_
