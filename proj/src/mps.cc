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

#include "wateralloc/mps.h"

#include <charconv>
#include <map>
#include <sstream>
#include <vector>

#include "wateralloc/errors.h"

namespace wateralloc {

namespace {

std::string num(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

char sense_code(RowSense s) {
  switch (s) {
    case RowSense::kLessEqual:
      return 'L';
    case RowSense::kGreaterEqual:
      return 'G';
    case RowSense::kEqual:
      return 'E';
  }
  return 'E';
}

constexpr char kObjRow[] = "obj";

}  // namespace

std::string to_mps(const LinearProgram& lp) {
  std::ostringstream out;
  out << "NAME " << lp.name << "\n";
  if (lp.sense == ObjectiveSense::kMaximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  " << kObjRow << "\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << " " << sense_code(lp.row_sense[i]) << "  " << lp.row_names[i] << "\n";
  }
  std::vector<std::vector<std::pair<int, double>>> by_col(lp.num_cols());
  for (const Triplet& t : lp.entries) by_col[t.col].emplace_back(t.row, t.value);
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    const bool is_int = j < static_cast<int>(lp.integer.size()) && lp.integer[j];
    if (is_int != in_int) {
      out << "    MARKER" << marker++ << " 'MARKER' "
          << (is_int ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = is_int;
    }
    const std::string& name = lp.col_names[j];
    if (lp.objective[j] != 0.0) {
      out << "    " << name << " " << kObjRow << " " << num(lp.objective[j]) << "\n";
    }
    for (const auto& [row, v] : by_col[j]) {
      out << "    " << name << " " << lp.row_names[row] << " " << num(v) << "\n";
    }
    if (lp.objective[j] == 0.0 && by_col[j].empty()) {
      out << "    " << name << " " << kObjRow << " 0\n";
    }
  }
  if (in_int) out << "    MARKER" << marker << " 'MARKER' 'INTEND'\n";
  out << "RHS\n";
  if (lp.objective_offset != 0.0) {
    out << "    RHS " << kObjRow << " " << num(-lp.objective_offset) << "\n";
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    if (lp.rhs[i] != 0.0) {
      out << "    RHS " << lp.row_names[i] << " " << num(lp.rhs[i]) << "\n";
    }
  }
  out << "BOUNDS\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const std::string& name = lp.col_names[j];
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    const bool is_int = j < static_cast<int>(lp.integer.size()) && lp.integer[j];
    if (lo == hi) {
      out << " FX BND " << name << " " << num(lo) << "\n";
      continue;
    }
    if (lo == -kInfinity && hi == kInfinity) {
      out << " FR BND " << name << "\n";
      continue;
    }
    if (lo == -kInfinity) {
      out << " MI BND " << name << "\n";
    } else if (lo != 0.0 || is_int) {
      out << " LO BND " << name << " " << num(lo) << "\n";
    }
    if (hi == kInfinity) {
      if (is_int) out << " PL BND " << name << "\n";
    } else {
      out << " UP BND " << name << " " << num(hi) << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

LinearProgram parse_mps(std::string_view text) {
  LinearProgram lp;
  std::map<std::string, int> rows, cols;
  std::string section;
  bool in_int = false;
  bool sense_next = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("mps", line_no, section, msg);
  };
  auto to_num = [&](const std::string& s) {
    try {
      size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw fail("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw fail("bad number '" + s + "'");
    }
  };
  auto col_of = [&](const std::string& name) {
    auto it = cols.find(name);
    if (it == cols.end()) throw fail("unknown column " + name);
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> f;
    for (std::string tok; ls >> tok;) f.push_back(tok);
    if (f.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      section = f[0];
      if (section == "NAME") lp.name = f.size() > 1 ? f[1] : "";
      if (section == "OBJSENSE") {
        if (f.size() > 1) {
          lp.sense = f[1] == "MAX" ? ObjectiveSense::kMaximize
                                   : ObjectiveSense::kMinimize;
        } else {
          sense_next = true;
        }
      }
      if (section == "ENDATA") break;
      continue;
    }
    if (sense_next) {
      lp.sense = f[0] == "MAX" ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
      sense_next = false;
    } else if (section == "ROWS") {
      if (f.size() != 2) throw fail("expected sense and name");
      if (f[0] == "N") {
        rows[f[1]] = -1;
        continue;
      }
      const RowSense s = f[0] == "L"   ? RowSense::kLessEqual
                         : f[0] == "G" ? RowSense::kGreaterEqual
                         : f[0] == "E" ? RowSense::kEqual
                                       : throw fail("unknown row sense " + f[0]);
      rows[f[1]] = lp.add_row(f[1], s, 0.0);
    } else if (section == "COLUMNS") {
      if (f.size() == 3 && f[1] == "'MARKER'") {
        in_int = f[2] == "'INTORG'";
        continue;
      }
      if (f.size() < 3 || f.size() % 2 == 0) throw fail("expected name row value");
      int j;
      auto it = cols.find(f[0]);
      if (it == cols.end()) {
        j = lp.add_column(f[0], 0.0, kInfinity, 0.0, in_int);
        cols[f[0]] = j;
      } else {
        j = it->second;
      }
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        auto r = rows.find(f[k]);
        if (r == rows.end()) throw fail("unknown row " + f[k]);
        const double v = to_num(f[k + 1]);
        if (r->second < 0) {
          lp.objective[j] += v;
        } else {
          lp.add_entry(r->second, j, v);
        }
      }
    } else if (section == "RHS") {
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        auto r = rows.find(f[k]);
        if (r == rows.end()) throw fail("unknown row " + f[k]);
        const double v = to_num(f[k + 1]);
        if (r->second < 0) {
          lp.objective_offset = -v;
        } else {
          lp.rhs[r->second] = v;
        }
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) throw fail("short bound line");
      const int j = col_of(f[2]);
      const std::string& t = f[0];
      const double v = f.size() > 3 ? to_num(f[3]) : 0.0;
      if (t == "LO") {
        lp.lower[j] = v;
      } else if (t == "UP") {
        lp.upper[j] = v;
      } else if (t == "FX") {
        lp.lower[j] = lp.upper[j] = v;
      } else if (t == "FR") {
        lp.lower[j] = -kInfinity;
        lp.upper[j] = kInfinity;
      } else if (t == "MI") {
        lp.lower[j] = -kInfinity;
      } else if (t == "PL") {
        lp.upper[j] = kInfinity;
      } else if (t == "BV") {
        lp.lower[j] = 0.0;
        lp.upper[j] = 1.0;
        lp.integer.resize(lp.num_cols(), false);
        lp.integer[j] = true;
      } else {
        throw fail("unsupported bound type " + t);
      }
    } else {
      throw fail("unsupported section");
    }
  }
  return lp;
}

}  // namespace wateralloc
