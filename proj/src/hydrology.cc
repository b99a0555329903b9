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

#include "wateralloc/hydrology.h"

#include <algorithm>
#include <cmath>

#include "wateralloc/errors.h"

namespace wateralloc {

namespace {

void check_dimensions(const Scenario& s, const DecisionVector& d) {
  if (static_cast<int>(d.areas.size()) != s.num_crops()) {
    throw DimensionError("decision has " + std::to_string(d.areas.size()) +
                         " areas, scenario has " +
                         std::to_string(s.num_crops()) + " crops");
  }
}

}  // namespace

MonthSeries clamped_requirement(const Scenario& s, const HydroYear& year,
                                const std::vector<double>& areas,
                                RequirementClamp clamp) {
  MonthSeries out{};
  for (int m = 0; m < kMonths; ++m) {
    double sum = 0.0;
    for (int c = 0; c < s.num_crops(); ++c) {
      const double a = net_demand(s.crops[c], year, m);
      sum += (clamp == RequirementClamp::kPerCrop ? std::max(a, 0.0) : a) *
             areas[c];
    }
    out[m] = clamp == RequirementClamp::kMonthly ? std::max(sum, 0.0) : sum;
  }
  return out;
}

DerivedFlows derive_flows(const Scenario& s, YearType year_label,
                          const DecisionVector& d) {
  check_dimensions(s, d);
  const HydroYear& year = s.year(year_label);
  DerivedFlows f;
  f.requirement =
      clamped_requirement(s, year, d.areas, RequirementClamp::kNone);
  f.pumping_requirement =
      clamped_requirement(s, year, d.areas, s.options.requirement_clamp);
  for (int m = 0; m < kMonths; ++m) {
    f.allocation[m] = std::max(year.inflow[m] - d.env_flow[m], 0.0);
    f.pumping[m] = std::max(f.pumping_requirement[m] - f.allocation[m], 0.0);
    f.tef[m] = year.tef_fraction[m] * year.inflow[m];
  }
  return f;
}

double eval_net_benefit(const Scenario& s, YearType year_label,
                        const DecisionVector& d, BenefitMode mode) {
  const DerivedFlows f = derive_flows(s, year_label, d);
  double crops = 0.0;
  for (int c = 0; c < s.num_crops(); ++c) {
    crops += s.crops[c].gross_margin() * d.areas[c];
  }
  const double cw = s.economics.cw;
  const double cp = s.economics.cp;
  double water = 0.0;
  for (int m = 0; m < kMonths; ++m) {
    if (mode == BenefitMode::kLegacy) {
      // Signed pumping; surface water charged on W - P = allocation.
      const double p = f.requirement[m] - f.allocation[m];
      water += cw * (f.requirement[m] - p) + cp * p;
    } else {
      water += cw * (f.pumping_requirement[m] - f.pumping[m]) +
               cp * f.pumping[m];
    }
  }
  return crops - water;
}

double eval_efd(const Scenario& s, YearType year_label,
                const DecisionVector& d) {
  check_dimensions(s, d);
  const HydroYear& year = s.year(year_label);
  double sum = 0.0;
  for (int m = 0; m < kMonths; ++m) {
    sum += std::max(year.tef_fraction[m] * year.inflow[m] - d.env_flow[m], 0.0);
  }
  return sum;
}

std::vector<std::string> FeasibilityVerdict::violated_families() const {
  std::vector<std::string> out;
  for (const ConstraintSlack& c : slacks) {
    if (c.violated &&
        std::find(out.begin(), out.end(), c.family) == out.end()) {
      out.push_back(c.family);
    }
  }
  return out;
}

double FeasibilityVerdict::worst_relative_violation() const {
  double worst = 0.0;
  for (const ConstraintSlack& c : slacks) {
    worst = std::max(worst, -c.slack / c.scale);
  }
  return worst;
}

FeasibilityVerdict check_feasible(const Scenario& s, YearType year_label,
                                  const DecisionVector& d, double tol) {
  const DerivedFlows f = derive_flows(s, year_label, d);
  const HydroYear& year = s.year(year_label);
  FeasibilityVerdict v;
  auto add = [&](const char* family, int index, double slack, double scale) {
    scale = std::max(scale, 1.0);
    const bool violated = !(slack >= -tol * scale);
    v.slacks.push_back({family, index, slack, scale, violated});
    if (violated) v.feasible = false;
  };

  double pumped = 0.0;
  for (double p : f.pumping) pumped += p;
  add(kFamilyPumping, -1, s.limits.t_pump - pumped, s.limits.t_pump);

  double total = 0.0;
  for (int c = 0; c < s.num_crops(); ++c) {
    total += d.areas[c];
    add(kFamilyMinArea, c, d.areas[c] - s.crops[c].min_area,
        std::max(s.crops[c].min_area, s.limits.t_area));
    add(kFamilyNonnegative, c, d.areas[c], s.limits.t_area);
  }
  add(kFamilyTotalArea, -1, s.limits.t_area - total, s.limits.t_area);

  for (int m = 0; m < kMonths; ++m) {
    add(kFamilyEnvFlow, m, year.inflow[m] - d.env_flow[m], year.inflow[m]);
    add(kFamilyCanal, m, s.limits.canal_cap - (year.inflow[m] - d.env_flow[m]),
        s.limits.canal_cap);
    add(kFamilyNonnegative, s.num_crops() + m, d.env_flow[m], year.inflow[m]);
  }
  return v;
}

DecisionVector min_area_decision(const Scenario& s,
                                 const MonthSeries& env_flow) {
  DecisionVector d;
  d.areas.reserve(s.crops.size());
  for (const CropSpec& c : s.crops) d.areas.push_back(c.min_area);
  d.env_flow = env_flow;
  return d;
}

}  // namespace wateralloc
