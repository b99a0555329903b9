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

#include "wateralloc/scenario_io.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "wateralloc/errors.h"

namespace wateralloc {

ParseError::ParseError(std::string source, int line, std::string field,
                       const std::string& message)
    : Error(source + (line > 0 ? ":" + std::to_string(line) : "") +
            (field.empty() ? "" : ": " + field) + ": " + message),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

namespace {

namespace fs = std::filesystem;

constexpr double kPrintedUnit = 1e-4;  // "1e-4 GL/ha"

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::optional<double> to_number(std::string_view token) {
  std::string t = trim(token);
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

// Multiplier that converts a declared per-hectare unit to GL/ha.
std::optional<double> depth_unit_scale(const std::string& unit) {
  std::string u;
  for (char ch : unit) {
    if (!std::isspace(static_cast<unsigned char>(ch))) u += ch;
  }
  if (u == "GL/ha") return 1.0;
  if (u == "1e-4GL/ha") return kPrintedUnit;
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Text format: a small TOML subset.

struct Value {
  enum class Kind { kString, kNumber, kArray };
  Kind kind = Kind::kNumber;
  std::string text;
  double number = 0.0;
  std::vector<double> array;
  int line = 0;
};

struct Table {
  std::string name;
  int line = 0;
  std::map<std::string, Value> entries;
};

struct Document {
  std::map<std::string, Table> tables;
  std::vector<Table> crops;
};

class TextParser {
 public:
  TextParser(std::string_view text, std::string source)
      : text_(text), source_(std::move(source)) {}

  Document parse() {
    Document doc;
    Table* current = nullptr;
    std::istringstream in{std::string(text_)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = trim(strip_comment(raw));
      if (line.empty()) continue;
      if (line.rfind("[[", 0) == 0) {
        if (line.size() < 4 || line.substr(line.size() - 2) != "]]") {
          fail(line_no, "", "malformed array-of-tables header");
        }
        const std::string name = trim(line.substr(2, line.size() - 4));
        if (name != "crops") {
          fail(line_no, name, "unknown array of tables");
        }
        doc.crops.push_back(Table{name, line_no, {}});
        current = &doc.crops.back();
        continue;
      }
      if (line[0] == '[') {
        if (line.back() != ']') fail(line_no, "", "malformed table header");
        const std::string name = trim(line.substr(1, line.size() - 2));
        if (name.empty()) fail(line_no, "", "empty table name");
        if (doc.tables.count(name)) {
          fail(line_no, name, "table defined twice");
        }
        current = &doc.tables[name];
        current->name = name;
        current->line = line_no;
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos) {
        fail(line_no, "", "expected 'key = value'");
      }
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) fail(line_no, "", "missing key");
      if (current == nullptr) {
        fail(line_no, key, "key outside of any table");
      }
      std::string rhs = trim(line.substr(eq + 1));
      const int value_line = line_no;
      if (!rhs.empty() && rhs[0] == '[') {
        // Arrays may span several lines.
        while (rhs.find(']') == std::string::npos) {
          if (!std::getline(in, raw)) {
            fail(value_line, key, "unterminated array");
          }
          ++line_no;
          rhs += " " + trim(strip_comment(raw));
        }
      }
      Value v = parse_value(rhs, value_line, key);
      if (current->entries.count(key)) {
        fail(value_line, qualified(*current, key), "key defined twice");
      }
      current->entries[key] = std::move(v);
    }
    return doc;
  }

  [[noreturn]] void fail(int line, const std::string& field,
                         const std::string& message) const {
    throw ParseError(source_, line, field, message);
  }

  static std::string qualified(const Table& t, const std::string& key) {
    return t.name + "." + key;
  }

 private:
  static std::string strip_comment(const std::string& raw) {
    bool in_string = false;
    for (size_t i = 0; i < raw.size(); ++i) {
      const char ch = raw[i];
      if (in_string && ch == '\\') {
        ++i;
      } else if (ch == '"') {
        in_string = !in_string;
      } else if (ch == '#' && !in_string) {
        return raw.substr(0, i);
      }
    }
    return raw;
  }

  Value parse_value(const std::string& rhs, int line,
                    const std::string& key) const {
    Value v;
    v.line = line;
    if (rhs.empty()) fail(line, key, "missing value");
    if (rhs[0] == '"') {
      v.kind = Value::Kind::kString;
      size_t i = 1;
      for (; i < rhs.size() && rhs[i] != '"'; ++i) {
        if (rhs[i] == '\\' && i + 1 < rhs.size()) ++i;
        v.text += rhs[i];
      }
      if (i >= rhs.size()) fail(line, key, "unterminated string");
      if (!trim(rhs.substr(i + 1)).empty()) {
        fail(line, key, "trailing characters after string");
      }
      return v;
    }
    if (rhs[0] == '[') {
      v.kind = Value::Kind::kArray;
      const size_t close = rhs.find(']');
      if (!trim(rhs.substr(close + 1)).empty()) {
        fail(line, key, "trailing characters after array");
      }
      const std::string body = rhs.substr(1, close - 1);
      std::stringstream items(body);
      std::string item;
      int index = 0;
      while (std::getline(items, item, ',')) {
        if (trim(item).empty()) {
          // A single trailing comma is allowed.
          if (items.peek() == std::char_traits<char>::eof()) break;
          fail(line, key + "[" + std::to_string(index) + "]", "empty entry");
        }
        auto num = to_number(item);
        if (!num) {
          fail(line, key + "[" + std::to_string(index) + "]",
               "not a number: '" + trim(item) + "'");
        }
        v.array.push_back(*num);
        ++index;
      }
      return v;
    }
    auto num = to_number(rhs);
    if (!num) fail(line, key, "not a number or string: '" + rhs + "'");
    v.number = *num;
    return v;
  }

  std::string_view text_;
  std::string source_;
};

class TableReader {
 public:
  TableReader(const TextParser& parser, const Table& table)
      : parser_(parser), table_(table) {}

  ~TableReader() = default;

  const Value* find(const std::string& key) {
    used_.insert(key);
    auto it = table_.entries.find(key);
    return it == table_.entries.end() ? nullptr : &it->second;
  }

  double number(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) parser_.fail(table_.line, field(key), "missing field");
    if (v->kind != Value::Kind::kNumber) {
      parser_.fail(v->line, field(key), "expected a number");
    }
    return v->number;
  }

  std::optional<std::string> optional_string(const std::string& key) {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != Value::Kind::kString) {
      parser_.fail(v->line, field(key), "expected a string");
    }
    return v->text;
  }

  std::string string(const std::string& key) {
    auto s = optional_string(key);
    if (!s) parser_.fail(table_.line, field(key), "missing field");
    return *s;
  }

  std::optional<MonthSeries> optional_series(const std::string& key,
                                             double scale = 1.0) {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (v->kind != Value::Kind::kArray) {
      parser_.fail(v->line, field(key), "expected an array of 12 numbers");
    }
    if (static_cast<int>(v->array.size()) != kMonths) {
      parser_.fail(v->line, field(key),
                   "series length: expected 12 values, got " +
                       std::to_string(v->array.size()));
    }
    MonthSeries out;
    for (int m = 0; m < kMonths; ++m) out[m] = v->array[m] * scale;
    return out;
  }

  MonthSeries series(const std::string& key, double scale = 1.0) {
    auto s = optional_series(key, scale);
    if (!s) parser_.fail(table_.line, field(key), "missing field");
    return *s;
  }

  void reject_unknown() {
    for (const auto& [key, value] : table_.entries) {
      if (!used_.count(key)) {
        parser_.fail(value.line, field(key), "unknown field");
      }
    }
  }

  std::string field(const std::string& key) const {
    return table_.name + "." + key;
  }

 private:
  const TextParser& parser_;
  const Table& table_;
  std::set<std::string> used_;
};

double unit_scale(const TextParser& parser, TableReader& units,
                  const Table& table, const std::string& key) {
  const Value* v = units.find(key);
  if (v == nullptr) {
    parser.fail(table.line, "units." + key,
                "unit declaration missing (use \"GL/ha\" or \"1e-4 GL/ha\")");
  }
  if (v->kind != Value::Kind::kString) {
    parser.fail(v->line, "units." + key, "expected a string");
  }
  auto scale = depth_unit_scale(v->text);
  if (!scale) {
    parser.fail(v->line, "units." + key, "unsupported unit '" + v->text + "'");
  }
  return *scale;
}

Scenario build_from_document(const TextParser& parser, const Document& doc,
                             const std::string& source) {
  static const std::set<std::string> kKnown = {
      "meta",     "units",    "economics", "limits",
      "options",  "year.dry", "year.avg",  "year.wet"};
  for (const auto& [name, table] : doc.tables) {
    if (!kKnown.count(name)) {
      parser.fail(table.line, name,
                  name.rfind("year.", 0) == 0
                      ? "unknown year label (expected dry, avg or wet)"
                      : "unknown table");
    }
  }
  auto require = [&](const std::string& name) -> const Table& {
    auto it = doc.tables.find(name);
    if (it == doc.tables.end()) {
      parser.fail(0, name, "missing [" + name + "] table");
    }
    return it->second;
  };

  Scenario s;
  if (auto it = doc.tables.find("meta"); it != doc.tables.end()) {
    TableReader meta(parser, it->second);
    s.name = meta.optional_string("name").value_or("");
    s.inflow_provenance = meta.optional_string("inflow_provenance").value_or("");
    meta.reject_unknown();
  }
  if (s.name.empty()) s.name = fs::path(source).stem().string();

  const Table& units_table = require("units");
  TableReader units(parser, units_table);
  const double rain_scale = unit_scale(parser, units, units_table, "rainfall");
  const double et_scale = unit_scale(parser, units, units_table, "et0");
  if (auto inflow_unit = units.optional_string("inflow")) {
    if (trim(*inflow_unit) != "GL") {
      parser.fail(units_table.entries.at("inflow").line, "units.inflow",
                  "unsupported unit '" + *inflow_unit + "' (expected GL)");
    }
  }
  units.reject_unknown();

  {
    TableReader econ(parser, require("economics"));
    s.economics.cw = econ.number("cw");
    s.economics.cp = econ.number("cp");
    econ.reject_unknown();
  }
  {
    TableReader limits(parser, require("limits"));
    s.limits.t_pump = limits.number("t_pump");
    s.limits.t_area = limits.number("t_area");
    s.limits.canal_cap = limits.number("canal_cap");
    limits.reject_unknown();
  }
  if (auto it = doc.tables.find("options"); it != doc.tables.end()) {
    TableReader options(parser, it->second);
    if (auto clamp = options.optional_string("requirement_clamp")) {
      try {
        s.options.requirement_clamp = parse_clamp(*clamp);
      } catch (const InvalidArgument& e) {
        parser.fail(it->second.entries.at("requirement_clamp").line,
                    "options.requirement_clamp", e.what());
      }
    }
    options.reject_unknown();
  }

  if (doc.crops.empty()) parser.fail(0, "crops", "no [[crops]] entries");
  for (const Table& table : doc.crops) {
    TableReader r(parser, table);
    CropSpec crop;
    crop.name = r.string("name");
    crop.price = r.number("price");
    crop.crop_yield = r.number("yield");
    crop.var_cost = r.number("var_cost");
    crop.min_area = r.number("min_area");
    crop.kc = r.series("kc");
    r.reject_unknown();
    s.crops.push_back(std::move(crop));
  }

  for (YearType label : {YearType::kDry, YearType::kAverage, YearType::kWet}) {
    auto it = doc.tables.find("year." + std::string(year_label(label)));
    if (it == doc.tables.end()) continue;
    TableReader r(parser, it->second);
    HydroYear year;
    year.label = label;
    year.rainfall = r.series("rainfall", rain_scale);
    year.et0 = r.series("et0", et_scale);
    year.inflow = r.series("inflow");
    year.tef_fraction =
        r.optional_series("tef_fraction").value_or(tessmann_fractions());
    r.reject_unknown();
    s.years[label] = year;
  }
  if (s.years.empty()) {
    parser.fail(0, "year", "no [year.*] tables");
  }
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError(path.string() + ": not found");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// CSV bundle.

struct CsvRow {
  int line = 0;
  std::vector<std::string> cells;
};

struct CsvFile {
  std::string source;
  std::map<std::string, std::string> directives;  // from "# key: value"
  std::vector<std::string> header;
  int header_line = 0;
  std::vector<CsvRow> rows;

  [[noreturn]] void fail(int line, const std::string& field,
                         const std::string& message) const {
    throw ParseError(source, line, field, message);
  }

  double number(const CsvRow& row, size_t col) const {
    auto v = to_number(row.cells[col]);
    if (!v) {
      fail(row.line, header[col],
           "not a number: '" + trim(row.cells[col]) + "'");
    }
    return *v;
  }

  MonthSeries months(const CsvRow& row, size_t first_col,
                     double scale = 1.0) const {
    MonthSeries out;
    for (int m = 0; m < kMonths; ++m) out[m] = number(row, first_col + m) * scale;
    return out;
  }
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

CsvFile read_csv(const fs::path& path, size_t expected_columns) {
  CsvFile f;
  f.source = path.string();
  std::istringstream in(read_file(path));
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const size_t colon = body.find(':');
      if (colon != std::string::npos) {
        f.directives[trim(body.substr(0, colon))] =
            trim(body.substr(colon + 1));
      }
      continue;
    }
    std::vector<std::string> cells = split_csv(line);
    if (f.header.empty()) {
      f.header = std::move(cells);
      f.header_line = line_no;
      if (f.header.size() != expected_columns) {
        f.fail(line_no, "header",
               "expected " + std::to_string(expected_columns) +
                   " columns, got " + std::to_string(f.header.size()));
      }
      continue;
    }
    if (cells.size() != expected_columns) {
      const bool month_row = expected_columns >= kMonths;
      f.fail(line_no, cells.empty() ? "" : cells[0],
             month_row ? "series length: expected " +
                             std::to_string(expected_columns) +
                             " columns, got " + std::to_string(cells.size())
                       : "expected " + std::to_string(expected_columns) +
                             " columns, got " + std::to_string(cells.size()));
    }
    f.rows.push_back({line_no, std::move(cells)});
  }
  if (f.header.empty()) f.fail(0, "", "file is empty");
  return f;
}

Scenario read_csv_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw NotFoundError(dir.string() + ": not found");
  Scenario s;
  s.name = dir.filename().string();
  if (s.name.empty()) s.name = dir.parent_path().filename().string();

  const CsvFile econ = read_csv(dir / "crop_economics.csv", 4);
  for (const CsvRow& row : econ.rows) {
    CropSpec crop;
    crop.name = row.cells[0];
    crop.price = econ.number(row, 1);
    crop.crop_yield = econ.number(row, 2);
    crop.var_cost = econ.number(row, 3);
    if (s.crop_index(crop.name) >= 0) {
      econ.fail(row.line, crop.name, "duplicate crop");
    }
    s.crops.push_back(std::move(crop));
  }
  if (s.crops.empty()) econ.fail(0, "", "no crops listed");

  auto crop_for = [&](const CsvFile& f, const CsvRow& row) -> CropSpec& {
    const int c = s.crop_index(row.cells[0]);
    if (c < 0) {
      f.fail(row.line, row.cells[0],
             "crop not listed in crop_economics.csv");
    }
    return s.crops[c];
  };
  auto require_all = [&](const CsvFile& f, const std::set<std::string>& seen) {
    for (const CropSpec& crop : s.crops) {
      if (!seen.count(crop.name)) f.fail(0, crop.name, "crop missing");
    }
  };

  const CsvFile minima = read_csv(dir / "min_area.csv", 2);
  std::set<std::string> seen;
  for (const CsvRow& row : minima.rows) {
    crop_for(minima, row).min_area = minima.number(row, 1);
    seen.insert(row.cells[0]);
  }
  require_all(minima, seen);

  const CsvFile kc = read_csv(dir / "crop_coefficients.csv", 1 + kMonths);
  seen.clear();
  for (const CsvRow& row : kc.rows) {
    crop_for(kc, row).kc = kc.months(row, 1);
    seen.insert(row.cells[0]);
  }
  require_all(kc, seen);

  const CsvFile climate = read_csv(dir / "rainfall_et.csv", 2 + kMonths);
  auto unit = climate.directives.find("unit");
  if (unit == climate.directives.end()) {
    climate.fail(0, "unit",
                 "unit declaration missing (add '# unit: 1e-4 GL/ha')");
  }
  auto scale = depth_unit_scale(unit->second);
  if (!scale) {
    climate.fail(0, "unit", "unsupported unit '" + unit->second + "'");
  }
  std::map<YearType, std::set<std::string>> series_seen;
  auto parse_label = [](const CsvFile& f, const CsvRow& row) {
    try {
      return parse_year(row.cells[0]);
    } catch (const InvalidArgument& e) {
      f.fail(row.line, "year", e.what());
    }
  };
  for (const CsvRow& row : climate.rows) {
    const YearType label = parse_label(climate, row);
    HydroYear& year = s.years[label];
    year.label = label;
    year.tef_fraction = tessmann_fractions();
    const std::string& series = row.cells[1];
    if (series == "rainfall") {
      year.rainfall = climate.months(row, 2, *scale);
    } else if (series == "et0") {
      year.et0 = climate.months(row, 2, *scale);
    } else {
      climate.fail(row.line, "series",
                   "expected 'rainfall' or 'et0', got '" + series + "'");
    }
    series_seen[label].insert(series);
  }
  for (const auto& [label, names] : series_seen) {
    if (names.size() != 2) {
      climate.fail(0, std::string(year_label(label)),
                   "both rainfall and et0 rows are required");
    }
  }

  const CsvFile inflow = read_csv(dir / "inflow.csv", 1 + kMonths);
  if (auto u = inflow.directives.find("unit");
      u != inflow.directives.end() && u->second != "GL") {
    inflow.fail(0, "unit", "unsupported unit '" + u->second + "'");
  }
  if (auto p = inflow.directives.find("provenance");
      p != inflow.directives.end()) {
    s.inflow_provenance = p->second;
  }
  std::set<YearType> inflow_seen;
  for (const CsvRow& row : inflow.rows) {
    const YearType label = parse_label(inflow, row);
    if (!s.years.count(label)) {
      inflow.fail(row.line, row.cells[0],
                  "year has no rainfall/et0 rows in rainfall_et.csv");
    }
    s.years[label].inflow = inflow.months(row, 1);
    inflow_seen.insert(label);
  }
  for (const auto& [label, year] : s.years) {
    if (!inflow_seen.count(label)) {
      inflow.fail(0, std::string(year_label(label)), "inflow row missing");
    }
  }

  if (fs::exists(dir / "tef_fraction.csv")) {
    const CsvFile tef = read_csv(dir / "tef_fraction.csv", 1 + kMonths);
    for (const CsvRow& row : tef.rows) {
      const YearType label = parse_label(tef, row);
      if (!s.years.count(label)) {
        tef.fail(row.line, row.cells[0], "unknown year in this bundle");
      }
      s.years[label].tef_fraction = tef.months(row, 1);
    }
  }

  const CsvFile system = read_csv(dir / "system.csv", 2);
  std::map<std::string, const CsvRow*> keys;
  for (const CsvRow& row : system.rows) keys[row.cells[0]] = &row;
  auto system_number = [&](const std::string& key) {
    auto it = keys.find(key);
    if (it == keys.end()) system.fail(0, key, "missing field");
    return system.number(*it->second, 1);
  };
  s.economics.cw = system_number("cw");
  s.economics.cp = system_number("cp");
  s.limits.t_pump = system_number("t_pump");
  s.limits.t_area = system_number("t_area");
  s.limits.canal_cap = system_number("canal_cap");
  if (auto it = keys.find("name"); it != keys.end()) {
    s.name = it->second->cells[1];
  }
  if (auto it = keys.find("requirement_clamp"); it != keys.end()) {
    try {
      s.options.requirement_clamp = parse_clamp(it->second->cells[1]);
    } catch (const InvalidArgument& e) {
      system.fail(it->second->line, "requirement_clamp", e.what());
    }
  }
  static const std::set<std::string> kSystemKeys = {
      "name", "cw", "cp", "t_pump", "t_area", "canal_cap", "requirement_clamp"};
  for (const CsvRow& row : system.rows) {
    if (!kSystemKeys.count(row.cells[0])) {
      system.fail(row.line, row.cells[0], "unknown field");
    }
  }
  return s;
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string month_header() {
  std::string h;
  for (auto name : kMonthNames) h += "," + std::string(name);
  return h;
}

std::string month_cells(const MonthSeries& v) {
  std::string out;
  for (double x : v) out += "," + format_double(x);
  return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw Error(path.string() + ": write failed");
}

void save_csv_bundle(const Scenario& s, const fs::path& dir) {
  fs::create_directories(dir);
  std::string econ = "crop,price_tk_per_ton,yield_ton_per_ha,var_cost_tk_per_ha\n";
  std::string minima = "crop,min_area_ha\n";
  std::string kc = "crop" + month_header() + "\n";
  for (const CropSpec& c : s.crops) {
    econ += csv_quote(c.name) + "," + format_double(c.price) + "," +
            format_double(c.crop_yield) + "," + format_double(c.var_cost) +
            "\n";
    minima += csv_quote(c.name) + "," + format_double(c.min_area) + "\n";
    kc += csv_quote(c.name) + month_cells(c.kc) + "\n";
  }
  std::string climate = "# unit: GL/ha\nyear,series" + month_header() + "\n";
  std::string inflow = "# unit: GL\n";
  if (!s.inflow_provenance.empty()) {
    inflow += "# provenance: " + s.inflow_provenance + "\n";
  }
  inflow += "year" + month_header() + "\n";
  std::string tef = "year" + month_header() + "\n";
  for (const auto& [label, y] : s.years) {
    const std::string l(year_label(label));
    climate += l + ",rainfall" + month_cells(y.rainfall) + "\n";
    climate += l + ",et0" + month_cells(y.et0) + "\n";
    inflow += l + month_cells(y.inflow) + "\n";
    tef += l + month_cells(y.tef_fraction) + "\n";
  }
  std::string system = "key,value\n";
  system += "name," + csv_quote(s.name) + "\n";
  system += "cw," + format_double(s.economics.cw) + "\n";
  system += "cp," + format_double(s.economics.cp) + "\n";
  system += "t_pump," + format_double(s.limits.t_pump) + "\n";
  system += "t_area," + format_double(s.limits.t_area) + "\n";
  system += "canal_cap," + format_double(s.limits.canal_cap) + "\n";
  system += "requirement_clamp," +
            std::string(clamp_label(s.options.requirement_clamp)) + "\n";

  write_text_file(dir / "crop_economics.csv", econ);
  write_text_file(dir / "min_area.csv", minima);
  write_text_file(dir / "crop_coefficients.csv", kc);
  write_text_file(dir / "rainfall_et.csv", climate);
  write_text_file(dir / "inflow.csv", inflow);
  write_text_file(dir / "tef_fraction.csv", tef);
  write_text_file(dir / "system.csv", system);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string array_text(const MonthSeries& v) {
  std::string out = "[";
  for (int m = 0; m < kMonths; ++m) {
    if (m > 0) out += ", ";
    out += format_double(v[m]);
  }
  return out + "]";
}

}  // namespace

Scenario parse_scenario_text(std::string_view text,
                             std::string_view source_name) {
  TextParser parser(text, std::string(source_name));
  const Document doc = parser.parse();
  return build_from_document(parser, doc, std::string(source_name));
}

Scenario read_scenario(const fs::path& path, ScenarioFormat format) {
  if (format == ScenarioFormat::kAuto) {
    if (!fs::exists(path)) throw NotFoundError(path.string() + ": not found");
    format = fs::is_directory(path) ? ScenarioFormat::kCsvBundle
                                    : ScenarioFormat::kText;
  }
  if (format == ScenarioFormat::kCsvBundle) return read_csv_bundle(path);
  return parse_scenario_text(read_file(path), path.string());
}

Scenario load_scenario(const fs::path& path, ScenarioFormat format) {
  Scenario s = read_scenario(path, format);
  const ValidationReport report = validate(s);
  if (!report.ok) {
    throw ValidationError(path.string() + ": " + report.to_string());
  }
  return s;
}

std::string format_scenario_text(const Scenario& s) {
  std::string out = "# wateralloc scenario, format version 1\n\n[meta]\n";
  out += "name = " + quote(s.name) + "\n";
  if (!s.inflow_provenance.empty()) {
    out += "inflow_provenance = " + quote(s.inflow_provenance) + "\n";
  }
  out += "\n[units]\nrainfall = \"GL/ha\"\net0 = \"GL/ha\"\ninflow = \"GL\"\n";
  out += "\n[economics]\ncw = " + format_double(s.economics.cw) +
         "\ncp = " + format_double(s.economics.cp) + "\n";
  out += "\n[limits]\nt_pump = " + format_double(s.limits.t_pump) +
         "\nt_area = " + format_double(s.limits.t_area) +
         "\ncanal_cap = " + format_double(s.limits.canal_cap) + "\n";
  out += "\n[options]\nrequirement_clamp = " +
         quote(std::string(clamp_label(s.options.requirement_clamp))) + "\n";
  for (const CropSpec& c : s.crops) {
    out += "\n[[crops]]\nname = " + quote(c.name) +
           "\nprice = " + format_double(c.price) +
           "\nyield = " + format_double(c.crop_yield) +
           "\nvar_cost = " + format_double(c.var_cost) +
           "\nmin_area = " + format_double(c.min_area) +
           "\nkc = " + array_text(c.kc) + "\n";
  }
  for (const auto& [label, y] : s.years) {
    out += "\n[year." + std::string(year_label(label)) + "]\n";
    out += "rainfall = " + array_text(y.rainfall) + "\n";
    out += "et0 = " + array_text(y.et0) + "\n";
    out += "inflow = " + array_text(y.inflow) + "\n";
    out += "tef_fraction = " + array_text(y.tef_fraction) + "\n";
  }
  return out;
}

void save_scenario(const Scenario& s, const fs::path& path,
                   ScenarioFormat format) {
  if (format == ScenarioFormat::kCsvBundle) {
    save_csv_bundle(s, path);
    return;
  }
  write_text_file(path, format_scenario_text(s));
}

}  // namespace wateralloc
