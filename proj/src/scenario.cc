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

#include "wateralloc/scenario.h"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "embedded_data.h"
#include "wateralloc/errors.h"
#include "wateralloc/scenario_io.h"

namespace wateralloc {

std::string_view year_label(YearType year) {
  switch (year) {
    case YearType::kDry:
      return "dry";
    case YearType::kAverage:
      return "avg";
    case YearType::kWet:
      return "wet";
  }
  return "?";
}

YearType parse_year(std::string_view label) {
  if (label == "dry") return YearType::kDry;
  if (label == "avg" || label == "average") return YearType::kAverage;
  if (label == "wet") return YearType::kWet;
  throw InvalidArgument("unknown year label '" + std::string(label) +
                        "' (expected dry, avg or wet)");
}

std::string_view clamp_label(RequirementClamp clamp) {
  switch (clamp) {
    case RequirementClamp::kNone:
      return "none";
    case RequirementClamp::kMonthly:
      return "monthly";
    case RequirementClamp::kPerCrop:
      return "per_crop";
  }
  return "?";
}

RequirementClamp parse_clamp(std::string_view label) {
  if (label == "none") return RequirementClamp::kNone;
  if (label == "monthly") return RequirementClamp::kMonthly;
  if (label == "per_crop" || label == "per-crop") {
    return RequirementClamp::kPerCrop;
  }
  throw InvalidArgument("unknown requirement clamp '" + std::string(label) +
                        "' (expected none, monthly or per-crop)");
}

MonthSeries tessmann_fractions(double high_flow_fraction) {
  MonthSeries f;
  for (int m = 0; m < kMonths; ++m) {
    // May (index 4) through October (index 9) are the high-flow months.
    f[m] = (m >= 4 && m <= 9) ? high_flow_fraction : 1.0;
  }
  return f;
}

const HydroYear& Scenario::year(YearType label) const {
  auto it = years.find(label);
  if (it == years.end()) {
    throw InvalidArgument("scenario '" + name + "' has no " +
                          std::string(year_label(label)) + " year");
  }
  return it->second;
}

int Scenario::crop_index(std::string_view crop_name) const {
  for (int c = 0; c < num_crops(); ++c) {
    if (crops[c].name == crop_name) return c;
  }
  return -1;
}

const CropSpec& Scenario::crop(std::string_view crop_name) const {
  const int c = crop_index(crop_name);
  if (c < 0) {
    throw InvalidArgument("no crop named '" + std::string(crop_name) + "'");
  }
  return crops[c];
}

double Scenario::total_min_area() const {
  double sum = 0.0;
  for (const CropSpec& c : crops) sum += c.min_area;
  return sum;
}

double net_demand(const CropSpec& crop, const HydroYear& year, int month) {
  return crop.kc[month] * year.et0[month] - year.rainfall[month];
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  out << (ok ? "ok" : "invalid") << " (" << findings.size() << " finding"
      << (findings.size() == 1 ? "" : "s") << ")\n";
  for (const Finding& f : findings) {
    out << (f.severity == Severity::kError ? "error" : "warning") << ": "
        << f.path << ": " << f.message << "\n";
  }
  return out.str();
}

namespace {

class Checker {
 public:
  void error(std::string path, std::string message) {
    report_.findings.push_back(
        {Severity::kError, std::move(path), std::move(message)});
    report_.ok = false;
  }
  void warning(std::string path, std::string message) {
    report_.findings.push_back(
        {Severity::kWarning, std::move(path), std::move(message)});
  }

  void nonnegative(const std::string& path, double v) {
    if (!std::isfinite(v)) {
      error(path, "value is not finite");
    } else if (v < 0.0) {
      error(path, "must be nonnegative, got " + format(v));
    }
  }
  void positive(const std::string& path, double v) {
    if (!std::isfinite(v)) {
      error(path, "value is not finite");
    } else if (v <= 0.0) {
      error(path, "must be positive, got " + format(v));
    }
  }
  void in_range(const std::string& path, double v, double lo, double hi,
                const char* what) {
    if (!std::isfinite(v) || v < lo || v > hi) {
      error(path, std::string(what) + " out of range [" + format(lo) + ", " +
                      format(hi) + "], got " + format(v));
    }
  }

  static std::string format(double v) {
    std::ostringstream s;
    s.precision(10);
    s << v;
    return s.str();
  }

  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Scenario& s) {
  Checker check;
  if (s.crops.empty()) check.error("crops", "at least one crop is required");
  std::set<std::string> names;
  for (int c = 0; c < s.num_crops(); ++c) {
    const CropSpec& crop = s.crops[c];
    const std::string base = "crops[" + std::to_string(c) + "]";
    if (crop.name.empty()) check.error(base + ".name", "crop name is empty");
    if (!names.insert(crop.name).second) {
      check.error(base + ".name", "duplicate crop name '" + crop.name + "'");
    }
    check.nonnegative(base + ".price", crop.price);
    check.nonnegative(base + ".yield", crop.crop_yield);
    check.nonnegative(base + ".var_cost", crop.var_cost);
    check.nonnegative(base + ".min_area", crop.min_area);
    for (int m = 0; m < kMonths; ++m) {
      check.in_range(base + ".kc[" + std::to_string(m) + "]", crop.kc[m], 0.0,
                     2.0, "crop coefficient");
    }
    if (std::isfinite(crop.gross_margin()) && crop.gross_margin() < 0.0) {
      check.warning(base, "'" + crop.name +
                              "' has a negative gross margin per hectare (" +
                              Checker::format(crop.gross_margin()) + " Tk/ha)");
    }
  }

  if (s.years.empty()) {
    check.error("years", "at least one hydrological year is required");
  }
  for (const auto& [label, year] : s.years) {
    const std::string base = "years." + std::string(year_label(label));
    if (year.label != label) {
      check.error(base + ".label", "label does not match its key");
    }
    for (int m = 0; m < kMonths; ++m) {
      const std::string idx = "[" + std::to_string(m) + "]";
      check.nonnegative(base + ".rainfall" + idx, year.rainfall[m]);
      check.nonnegative(base + ".et0" + idx, year.et0[m]);
      check.nonnegative(base + ".inflow" + idx, year.inflow[m]);
      check.in_range(base + ".tef_fraction" + idx, year.tef_fraction[m], 0.0,
                     1.0, "fraction");
    }
  }

  check.nonnegative("economics.cw", s.economics.cw);
  check.nonnegative("economics.cp", s.economics.cp);
  if (s.economics.cp < s.economics.cw) {
    check.warning("economics",
                  "pumping is cheaper than surface water; the net-benefit "
                  "model needs binary encodings for pumping");
  }
  check.positive("limits.t_pump", s.limits.t_pump);
  check.positive("limits.t_area", s.limits.t_area);
  check.positive("limits.canal_cap", s.limits.canal_cap);

  const double min_total = s.total_min_area();
  if (std::isfinite(min_total) && std::isfinite(s.limits.t_area) &&
      min_total > s.limits.t_area) {
    check.error("crops.min_area",
                "min areas exceed total area (" + Checker::format(min_total) +
                    " > " + Checker::format(s.limits.t_area) + " ha)");
  }
  if (s.inflow_provenance == "reconstructed") {
    check.warning("meta.inflow_provenance",
                  "inflow series is reconstructed, not observed data");
  }
  return check.take();
}

Scenario builtin_rajshahi() {
  return parse_scenario_text(internal::kRajshahiScenarioText,
                             "builtin:rajshahi");
}

}  // namespace wateralloc
