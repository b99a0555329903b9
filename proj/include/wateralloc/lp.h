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

// A plain (mixed-integer) linear program in row/triplet form.

#ifndef WATERALLOC_LP_H_
#define WATERALLOC_LP_H_

#include <limits>
#include <string>
#include <vector>

namespace wateralloc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearProgram {
  std::string name = "lp";
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<double> objective;
  double objective_offset = 0.0;

  std::vector<Triplet> entries;
  std::vector<RowSense> row_sense;
  std::vector<double> rhs;
  std::vector<std::string> row_names;

  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> col_names;
  // Empty for a pure LP; otherwise one flag per column.
  std::vector<bool> integer;

  int num_rows() const { return static_cast<int>(rhs.size()); }
  int num_cols() const { return static_cast<int>(objective.size()); }
  bool is_mip() const;

  int add_column(std::string col_name, double lb, double ub, double cost = 0.0,
                 bool is_integer = false);
  int add_row(std::string row_name, RowSense sense, double rhs_value);
  void add_entry(int row, int col, double value);

  // Objective including the offset.
  double evaluate(const std::vector<double>& x) const;
  // Row activities a_i . x.
  std::vector<double> activities(const std::vector<double>& x) const;
  // Largest bound or row violation, each divided by max(1, |bound|).
  double max_violation(const std::vector<double>& x) const;
};

}  // namespace wateralloc

#endif  // WATERALLOC_LP_H_
