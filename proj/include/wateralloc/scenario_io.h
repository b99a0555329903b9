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

// Scenario files. Two on-disk forms are supported:
//
//  * a single text file with [meta], [units], [economics], [limits],
//    [options], [[crops]] and [year.dry|avg|wet] sections (a TOML subset);
//  * a CSV bundle directory holding min_area.csv, crop_economics.csv,
//    crop_coefficients.csv, rainfall_et.csv, inflow.csv and system.csv,
//    with an optional tef_fraction.csv.
//
// Rainfall and ET units must be declared ("GL/ha" or "1e-4 GL/ha") and are
// converted to GL/ha here and nowhere else.

#ifndef WATERALLOC_SCENARIO_IO_H_
#define WATERALLOC_SCENARIO_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "wateralloc/scenario.h"

namespace wateralloc {

enum class ScenarioFormat { kAuto, kText, kCsvBundle };

// Parses without running validate(). Throws ParseError or NotFoundError.
Scenario read_scenario(const std::filesystem::path& path,
                       ScenarioFormat format = ScenarioFormat::kAuto);
Scenario parse_scenario_text(std::string_view text,
                             std::string_view source_name = "<text>");

// read_scenario followed by validate(); throws ValidationError listing the
// findings when the instance is invalid.
Scenario load_scenario(const std::filesystem::path& path,
                       ScenarioFormat format = ScenarioFormat::kAuto);

// Writes GL/ha values at full precision so that loading reproduces `s`.
std::string format_scenario_text(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path,
                   ScenarioFormat format = ScenarioFormat::kText);

}  // namespace wateralloc

#endif  // WATERALLOC_SCENARIO_IO_H_
