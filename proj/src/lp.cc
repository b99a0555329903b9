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

#include "wateralloc/lp.h"

#include <algorithm>
#include <cmath>

#include "wateralloc/errors.h"

namespace wateralloc {

bool LinearProgram::is_mip() const {
  return std::find(integer.begin(), integer.end(), true) != integer.end();
}

int LinearProgram::add_column(std::string col_name, double lb, double ub,
                              double cost, bool is_integer) {
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  col_names.push_back(std::move(col_name));
  if (is_integer || !integer.empty()) {
    integer.resize(objective.size() - 1, false);
    integer.push_back(is_integer);
  }
  return num_cols() - 1;
}

int LinearProgram::add_row(std::string row_name, RowSense sense,
                           double rhs_value) {
  row_sense.push_back(sense);
  rhs.push_back(rhs_value);
  row_names.push_back(std::move(row_name));
  return num_rows() - 1;
}

void LinearProgram::add_entry(int row, int col, double value) {
  if (row < 0 || row >= num_rows() || col < 0 || col >= num_cols()) {
    throw DimensionError("matrix entry (" + std::to_string(row) + ", " +
                         std::to_string(col) + ") out of range");
  }
  if (value != 0.0) entries.push_back({row, col, value});
}

double LinearProgram::evaluate(const std::vector<double>& x) const {
  double v = objective_offset;
  for (int j = 0; j < num_cols(); ++j) v += objective[j] * x[j];
  return v;
}

std::vector<double> LinearProgram::activities(
    const std::vector<double>& x) const {
  std::vector<double> a(num_rows(), 0.0);
  for (const Triplet& t : entries) a[t.row] += t.value * x[t.col];
  return a;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  auto rel = [](double amount, double bound) {
    return amount / std::max(1.0, std::abs(bound));
  };
  for (int j = 0; j < num_cols(); ++j) {
    if (x[j] < lower[j]) worst = std::max(worst, rel(lower[j] - x[j], lower[j]));
    if (x[j] > upper[j]) worst = std::max(worst, rel(x[j] - upper[j], upper[j]));
  }
  const std::vector<double> a = activities(x);
  for (int i = 0; i < num_rows(); ++i) {
    if (row_sense[i] != RowSense::kGreaterEqual && a[i] > rhs[i]) {
      worst = std::max(worst, rel(a[i] - rhs[i], rhs[i]));
    }
    if (row_sense[i] != RowSense::kLessEqual && a[i] < rhs[i]) {
      worst = std::max(worst, rel(rhs[i] - a[i], rhs[i]));
    }
  }
  return worst;
}

}  // namespace wateralloc
