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

// Problem instances: crops, hydrological years, economics and limits.
// Internal units are GL, ha and Tk throughout.

#ifndef WATERALLOC_SCENARIO_H_
#define WATERALLOC_SCENARIO_H_

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wateralloc {

inline constexpr int kMonths = 12;
using MonthSeries = std::array<double, kMonths>;

inline constexpr std::array<std::string_view, kMonths> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

enum class YearType { kDry, kAverage, kWet };

// "dry", "avg", "wet".
std::string_view year_label(YearType year);
// Accepts "dry", "avg", "average", "wet". Throws InvalidArgument.
YearType parse_year(std::string_view label);

enum class RequirementClamp { kNone, kMonthly, kPerCrop };

std::string_view clamp_label(RequirementClamp clamp);
// Accepts "none", "monthly", "per_crop" and "per-crop".
RequirementClamp parse_clamp(std::string_view label);

struct CropSpec {
  std::string name;
  double price = 0.0;       // Tk per ton
  double crop_yield = 0.0;  // ton per ha
  double var_cost = 0.0;    // Tk per ha
  double min_area = 0.0;    // ha
  MonthSeries kc{};

  // Revenue less variable cost, Tk per ha.
  double gross_margin() const { return price * crop_yield - var_cost; }

  bool operator==(const CropSpec&) const = default;
};

struct HydroYear {
  YearType label = YearType::kDry;
  MonthSeries rainfall{};  // GL per ha
  MonthSeries et0{};       // GL per ha
  MonthSeries inflow{};    // GL
  MonthSeries tef_fraction{};

  bool operator==(const HydroYear&) const = default;
};

// 1.0 for November to April, `high_flow_fraction` for May to October.
MonthSeries tessmann_fractions(double high_flow_fraction = 0.4);

struct EconomicParams {
  double cw = 0.0;  // Tk per GL of surface water
  double cp = 0.0;  // Tk per GL of pumped groundwater

  bool operator==(const EconomicParams&) const = default;
};

struct SystemLimits {
  double t_pump = 0.0;     // GL per year
  double t_area = 0.0;     // ha
  double canal_cap = 0.0;  // GL per month

  bool operator==(const SystemLimits&) const = default;
};

struct ModelOptions {
  RequirementClamp requirement_clamp = RequirementClamp::kMonthly;

  bool operator==(const ModelOptions&) const = default;
};

struct Scenario {
  std::string name;
  std::string inflow_provenance;
  std::vector<CropSpec> crops;
  std::map<YearType, HydroYear> years;
  EconomicParams economics;
  SystemLimits limits;
  ModelOptions options;

  int num_crops() const { return static_cast<int>(crops.size()); }
  // Throws InvalidArgument when the year is absent.
  const HydroYear& year(YearType label) const;
  // -1 when absent.
  int crop_index(std::string_view crop_name) const;
  // Throws InvalidArgument when absent.
  const CropSpec& crop(std::string_view crop_name) const;
  double total_min_area() const;

  bool operator==(const Scenario&) const = default;
};

// Net monthly water demand per hectare, K*ET - R, in GL/ha.
double net_demand(const CropSpec& crop, const HydroYear& year, int month);

enum class Severity { kWarning, kError };

struct Finding {
  Severity severity = Severity::kError;
  std::string path;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Finding> findings;

  std::string to_string() const;
};

ValidationReport validate(const Scenario& s);

// The Rajshahi case study, parsed from the bundled data/rajshahi.toml.
Scenario builtin_rajshahi();

}  // namespace wateralloc

#endif  // WATERALLOC_SCENARIO_H_
