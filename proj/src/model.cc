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

#include "wateralloc/model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "wateralloc/errors.h"

namespace wateralloc {

std::string_view kind_label(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kModel1:
      return "model1";
    case ProblemKind::kModel2:
      return "model2";
    case ProblemKind::kSub1:
      return "sub1";
    case ProblemKind::kSub2:
      return "sub2";
  }
  return "?";
}

ProblemKind parse_kind(std::string_view label) {
  if (label == "model1" || label == "1") return ProblemKind::kModel1;
  if (label == "model2" || label == "2") return ProblemKind::kModel2;
  if (label == "sub1") return ProblemKind::kSub1;
  if (label == "sub2") return ProblemKind::kSub2;
  throw InvalidArgument("unknown problem kind '" + std::string(label) + "'");
}

std::string_view structure_label(Structure structure) {
  switch (structure) {
    case Structure::kConcaveMaxLp:
      return "concave-max-LP";
    case Structure::kConvexMinLp:
      return "convex-min-LP";
    case Structure::kConvexConstrainedLp:
      return "convex-constrained-LP";
    case Structure::kReverseConvexMilp:
      return "reverse-convex-MILP";
  }
  return "?";
}

std::string_view role_label(ColumnRole role) {
  switch (role) {
    case ColumnRole::kArea:
      return "area";
    case ColumnRole::kEnvFlow:
      return "env_flow";
    case ColumnRole::kRequirement:
      return "epigraph-requirement";
    case ColumnRole::kPumping:
      return "epigraph-pumping";
    case ColumnRole::kDeficiency:
      return "epigraph-deficiency";
    case ColumnRole::kBinary:
      return "big-M binary";
  }
  return "?";
}

void check_weight(const WeightPair& w) {
  if (!(w.w1 > 0.0) || !(w.w2 > 0.0)) {
    throw InvalidArgument("weights must be strictly positive");
  }
  if (std::abs(w.w1 + w.w2 - 1.0) > 1e-12) {
    throw InvalidArgument("weights must sum to 1");
  }
}

Normalization Normalization::fixed() { return Normalization{}; }

Normalization Normalization::from_anchors(double nb_at_f1_anchor,
                                          double efd_at_f1_anchor,
                                          double nb_at_f2_anchor,
                                          double efd_at_f2_anchor) {
  Normalization n;
  const double d1 = nb_at_f1_anchor - nb_at_f2_anchor;
  const double d2 = efd_at_f1_anchor - efd_at_f2_anchor;
  n.f1_offset = nb_at_f2_anchor;
  n.f2_offset = efd_at_f2_anchor;
  n.f1_scale = d1 > 1e-9 * std::max(1.0, std::abs(nb_at_f1_anchor)) ? 1.0 / d1
                                                                      : 1.0;
  n.f2_scale = d2 > 1e-9 * std::max(1.0, std::abs(efd_at_f1_anchor)) ? 1.0 / d2
                                                                       : 1.0;
  return n;
}

double AffineForm::evaluate(const std::vector<double>& x) const {
  double v = constant;
  for (const auto& [col, coef] : terms) v += coef * x[col];
  return v;
}

int LoweredProgram::num_binaries() const {
  int n = 0;
  for (const ColumnTag& t : columns) n += t.role == ColumnRole::kBinary;
  return n;
}

DecisionVector LoweredProgram::decision(const std::vector<double>& x) const {
  DecisionVector d;
  d.areas.reserve(area_cols.size());
  for (int j : area_cols) d.areas.push_back(x[j]);
  for (int m = 0; m < kMonths; ++m) d.env_flow[m] = x[env_cols[m]];
  return d;
}

std::vector<double> LoweredProgram::tightened(
    const std::vector<double>& x) const {
  std::vector<double> out = x;
  for (const MaxTerm& t : terms) {
    if (t.column < 0) continue;
    const double e = t.expr.evaluate(out);
    out[t.column] = std::max(0.0, e);
    if (t.binary >= 0) out[t.binary] = e > 0.0 ? 1.0 : 0.0;
  }
  return out;
}

std::vector<double> LoweredProgram::embed(const DecisionVector& d) const {
  if (d.areas.size() != area_cols.size()) {
    throw DimensionError("decision does not match the program's crops");
  }
  std::vector<double> x(lp.num_cols(), 0.0);
  for (size_t c = 0; c < area_cols.size(); ++c) x[area_cols[c]] = d.areas[c];
  for (int m = 0; m < kMonths; ++m) x[env_cols[m]] = d.env_flow[m];
  return tightened(x);
}

namespace {

using TermKey = std::pair<ColumnRole, int>;

class Builder {
 public:
  Builder(const ProblemSpec& p, const LoweringOptions& opt,
          const std::set<TermKey>& exact)
      : p_(p), opt_(opt), exact_(exact) {}

  LoweredProgram build() {
    out_.problem = p_;
    out_.options = opt_;
    out_.lp.name = std::string(kind_label(p_.kind)) + "_" +
                   std::string(year_label(p_.year));
    const Scenario& s = p_.scenario;
    const HydroYear& year = p_.hydro();
    const double min_total = s.total_min_area();

    // Original decision columns.
    for (int c = 0; c < s.num_crops(); ++c) {
      const int j = add_column("X_" + std::to_string(c + 1),
                               s.crops[c].min_area, kInfinity,
                               {ColumnRole::kArea, c, -1});
      box_hi_[j] = s.limits.t_area - (min_total - s.crops[c].min_area);
      out_.area_cols.push_back(j);
    }
    for (int m = 0; m < kMonths; ++m) {
      const double hi = year.inflow[m];
      const double lo = std::max(0.0, year.inflow[m] - s.limits.canal_cap);
      out_.env_cols.push_back(add_column("E_" + std::string(kMonthNames[m]),
                                         lo, hi, {ColumnRole::kEnvFlow, m, -1}));
    }

    std::map<int, double> f1, f2, pumping;
    double f1_const = 0.0, f2_const = 0.0, pumping_const = 0.0;
    const double cw = s.economics.cw;
    const double cp = s.economics.cp;
    for (int c = 0; c < s.num_crops(); ++c) {
      f1[out_.area_cols[c]] += s.crops[c].gross_margin();
    }
    const RequirementClamp clamp = s.options.requirement_clamp;
    for (int m = 0; m < kMonths; ++m) {
      std::map<int, double> w;
      for (int c = 0; c < s.num_crops(); ++c) {
        double a = net_demand(s.crops[c], year, m);
        if (clamp == RequirementClamp::kPerCrop) a = std::max(a, 0.0);
        if (a != 0.0) w[out_.area_cols[c]] += a;
      }
      AffineForm req = form(w, 0.0);
      if (clamp == RequirementClamp::kMonthly) {
        req = max_term(ColumnRole::kRequirement, m, req);
      }
      // Pumping: max(0, req - (inflow - E)).
      std::map<int, double> pe = to_map(req);
      pe[out_.env_cols[m]] += 1.0;
      const AffineForm t =
          max_term(ColumnRole::kPumping, m, form(pe, req.constant - year.inflow[m]));
      // Deficiency: max(0, tef - E).
      const double tef = year.tef_fraction[m] * year.inflow[m];
      const AffineForm sdef = max_term(ColumnRole::kDeficiency, m,
                                       form({{out_.env_cols[m], -1.0}}, tef));

      for (const auto& [j, v] : req.terms) f1[j] -= cw * v;
      f1_const -= cw * req.constant;
      for (const auto& [j, v] : t.terms) {
        f1[j] -= (cp - cw) * v;
        pumping[j] += v;
      }
      f1_const -= (cp - cw) * t.constant;
      pumping_const += t.constant;
      for (const auto& [j, v] : sdef.terms) f2[j] += v;
      f2_const += sdef.constant;
    }
    out_.f1 = form(f1, f1_const);
    out_.f2 = form(f2, f2_const);
    out_.total_pumping = form(pumping, pumping_const);

    add_row_le("pump_cap", out_.total_pumping, s.limits.t_pump);
    std::map<int, double> area;
    for (int j : out_.area_cols) area[j] = 1.0;
    add_row_le("area_cap", form(area, 0.0), s.limits.t_area);

    const Normalization& n = p_.normalization;
    if (p_.kind == ProblemKind::kSub1 || p_.kind == ProblemKind::kSub2) {
      const WeightPair w = *p_.weight;
      // a * F1 - b * F2 <= 0 with (a, b) = (-w1, -w2) for sub1 and
      // (w1, w2) for sub2.
      const double a = (p_.kind == ProblemKind::kSub1 ? -1.0 : 1.0) * w.w1 *
                       n.f1_scale;
      const double b = (p_.kind == ProblemKind::kSub1 ? -1.0 : 1.0) * w.w2 *
                       n.f2_scale;
      std::map<int, double> row;
      for (const auto& [j, v] : out_.f1.terms) row[j] += a * v;
      for (const auto& [j, v] : out_.f2.terms) row[j] -= b * v;
      const double constant = a * (out_.f1.constant - n.f1_offset) -
                              b * (out_.f2.constant - n.f2_offset);
      add_row_le(p_.kind == ProblemKind::kSub1 ? "scalarize_sub1"
                                               : "scalarize_sub2",
                 form(row, constant), 0.0);
    }

    build_stages();
    out_.lp.objective = out_.stages.front().coefficients;
    out_.lp.objective_offset = out_.stages.front().offset;
    out_.lp.sense = out_.stages.front().sense;
    return std::move(out_);
  }

  // Columns whose increase could help some row or objective.
  std::set<TermKey> unsafe_terms(const LoweredProgram& lowered) const {
    std::set<TermKey> unsafe;
    std::vector<std::vector<double>> stage_mins;
    for (const ObjectiveStage& st : lowered.stages) {
      std::vector<double> c = st.coefficients;
      if (st.sense == ObjectiveSense::kMaximize) {
        for (double& v : c) v = -v;
      }
      stage_mins.push_back(std::move(c));
    }
    for (const MaxTerm& t : lowered.terms) {
      if (t.column < 0 || t.exact) continue;
      const int y = t.column;
      bool harmless = true;
      for (const auto& c : stage_mins) {
        if (c[y] < 0.0) harmless = false;
      }
      for (const Triplet& e : lowered.lp.entries) {
        if (e.col != y || row_owner_[e.row] == y) continue;
        switch (lowered.lp.row_sense[e.row]) {
          case RowSense::kLessEqual:
            if (e.value < 0.0) harmless = false;
            break;
          case RowSense::kGreaterEqual:
            if (e.value > 0.0) harmless = false;
            break;
          case RowSense::kEqual:
            harmless = false;
            break;
        }
      }
      if (!harmless) unsafe.insert({t.role, t.month});
    }
    return unsafe;
  }

  static void mark_pressure(LoweredProgram* lowered) {
    const ObjectiveStage& last = lowered->stages.back();
    const double sign = last.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    for (MaxTerm& t : lowered->terms) {
      t.pressured =
          t.column >= 0 && (t.exact || sign * last.coefficients[t.column] > 0.0);
    }
  }

 private:
  static AffineForm form(const std::map<int, double>& m, double constant) {
    AffineForm f;
    for (const auto& [j, v] : m) {
      if (v != 0.0) f.terms.emplace_back(j, v);
    }
    f.constant = constant;
    return f;
  }

  static std::map<int, double> to_map(const AffineForm& f) {
    std::map<int, double> m;
    for (const auto& [j, v] : f.terms) m[j] += v;
    return m;
  }

  int add_column(std::string name, double lb, double ub, ColumnTag tag,
                 bool is_integer = false) {
    const int j = out_.lp.add_column(std::move(name), lb, ub, 0.0, is_integer);
    out_.columns.push_back(tag);
    box_hi_[j] = ub;
    return j;
  }

  std::pair<double, double> range(const AffineForm& f) const {
    double lo = f.constant, hi = f.constant;
    for (const auto& [j, v] : f.terms) {
      const double l = out_.lp.lower[j];
      const double h = box_hi_.at(j);
      lo += v > 0 ? v * l : v * h;
      hi += v > 0 ? v * h : v * l;
    }
    return {lo, hi};
  }

  void add_row(const std::string& name, RowSense sense,
               const std::map<int, double>& coefs, double rhs, int owner) {
    const int r = out_.lp.add_row(name, sense, rhs);
    row_owner_.push_back(owner);
    for (const auto& [j, v] : coefs) out_.lp.add_entry(r, j, v);
  }

  void add_row_le(const std::string& name, const AffineForm& f, double bound) {
    add_row(name, RowSense::kLessEqual, to_map(f), bound - f.constant, -1);
  }

  AffineForm max_term(ColumnRole role, int month, const AffineForm& expr) {
    MaxTerm t;
    t.role = role;
    t.month = month;
    t.expr = expr;
    const auto [lo, hi] = range(expr);
    t.lower = lo;
    t.upper = hi;
    if (opt_.eliminate_sign_determined && (hi <= 0.0 || lo >= 0.0)) {
      out_.terms.push_back(t);
      return hi <= 0.0 ? AffineForm{} : expr;
    }
    const char* prefix = role == ColumnRole::kRequirement ? "u_"
                         : role == ColumnRole::kPumping   ? "t_"
                                                          : "s_";
    const std::string name = prefix + std::string(kMonthNames[month]);
    const int y = add_column(name, 0.0, std::max(hi, 0.0),
                             {role, month, -1});
    t.column = y;
    // y - expr >= 0
    std::map<int, double> epi = to_map(expr);
    for (auto& [j, v] : epi) v = -v;
    epi[y] += 1.0;
    add_row("epi_" + name, RowSense::kGreaterEqual, epi, expr.constant, y);
    if (exact_.count({role, month})) {
      t.exact = true;
      double big_m = 1.05 * std::max(std::abs(lo), std::abs(hi));
      if (big_m == 0.0) big_m = 1.0;
      t.big_m = big_m;
      const int z = add_column("z_" + name, 0.0, 1.0,
                               {ColumnRole::kBinary, month, y}, true);
      t.binary = z;
      // y - expr + M z <= M
      std::map<int, double> up = epi;
      up[z] += big_m;
      add_row("bigm_hi_" + name, RowSense::kLessEqual, up,
              big_m + expr.constant, y);
      // y - M z <= 0
      add_row("bigm_on_" + name, RowSense::kLessEqual, {{y, 1.0}, {z, -big_m}},
              0.0, y);
    }
    out_.terms.push_back(t);
    AffineForm ref;
    ref.terms.emplace_back(y, 1.0);
    return ref;
  }

  ObjectiveStage stage(std::string name, ObjectiveSense sense,
                       const AffineForm& f) const {
    ObjectiveStage st;
    st.name = std::move(name);
    st.sense = sense;
    st.coefficients.assign(out_.lp.num_cols(), 0.0);
    for (const auto& [j, v] : f.terms) st.coefficients[j] += v;
    st.offset = f.constant;
    return st;
  }

  void build_stages() {
    const auto kMax = ObjectiveSense::kMaximize;
    const auto kMin = ObjectiveSense::kMinimize;
    std::vector<ObjectiveStage>& st = out_.stages;
    switch (p_.kind) {
      case ProblemKind::kModel1:
      case ProblemKind::kSub1:
        st.push_back(stage("max_f1", kMax, out_.f1));
        if (opt_.lexicographic) st.push_back(stage("min_f2", kMin, out_.f2));
        break;
      case ProblemKind::kModel2:
        st.push_back(stage("min_f2", kMin, out_.f2));
        if (!opt_.lexicographic) break;
        if (opt_.model2_tie_break == Model2TieBreak::kMaxBenefit) {
          st.push_back(stage("max_f1", kMax, out_.f1));
        } else {
          AffineForm area;
          for (int j : out_.area_cols) area.terms.emplace_back(j, 1.0);
          st.push_back(stage("min_total_area", kMin, area));
          st.push_back(stage("min_total_pumping", kMin, out_.total_pumping));
        }
        break;
      case ProblemKind::kSub2:
        st.push_back(stage("min_f2", kMin, out_.f2));
        if (opt_.lexicographic) st.push_back(stage("max_f1", kMax, out_.f1));
        break;
    }
    // Columns added after a stage was built (none today) would be zero.
    for (ObjectiveStage& s : st) s.coefficients.resize(out_.lp.num_cols(), 0.0);
  }

  const ProblemSpec& p_;
  LoweringOptions opt_;
  std::set<TermKey> exact_;
  LoweredProgram out_;
  std::map<int, double> box_hi_;
  std::vector<int> row_owner_;
};

// Builds the lowering and grows the exact-term set until every remaining
// epigraph column is safe to relax.
LoweredProgram lower_any(const ProblemSpec& p, const LoweringOptions& options) {
  std::set<TermKey> exact;
  for (int round = 0; round < 8; ++round) {
    Builder b(p, options, exact);
    LoweredProgram lowered = b.build();
    const std::set<TermKey> unsafe = b.unsafe_terms(lowered);
    if (unsafe.empty()) {
      Builder::mark_pressure(&lowered);
      if (lowered.num_binaries() > 0) {
        lowered.structure = Structure::kReverseConvexMilp;
      } else if (p.kind == ProblemKind::kModel1) {
        lowered.structure = Structure::kConcaveMaxLp;
      } else if (p.kind == ProblemKind::kModel2) {
        lowered.structure = Structure::kConvexMinLp;
      } else {
        lowered.structure = Structure::kConvexConstrainedLp;
      }
      lowered.problem.structure = lowered.structure;
      return lowered;
    }
    exact.insert(unsafe.begin(), unsafe.end());
  }
  throw SolverError("sign analysis did not converge");
}

}  // namespace

ProblemSpec build_problem(const Scenario& s, YearType year, ProblemKind kind,
                          std::optional<WeightPair> weight,
                          const Normalization& normalization) {
  const bool needs_weight =
      kind == ProblemKind::kSub1 || kind == ProblemKind::kSub2;
  if (needs_weight && !weight) {
    throw InvalidArgument(std::string(kind_label(kind)) + " needs a weight");
  }
  if (!needs_weight && weight) {
    throw InvalidArgument(std::string(kind_label(kind)) +
                          " does not take a weight");
  }
  if (weight) check_weight(*weight);
  s.year(year);  // throws for an unknown year
  if (!(normalization.f1_scale > 0.0) || !(normalization.f2_scale > 0.0)) {
    throw InvalidArgument("normalization scales must be positive");
  }
  ProblemSpec p;
  p.kind = kind;
  p.scenario = s;
  p.year = year;
  p.weight = weight;
  p.normalization = normalization;
  p.structure = lower_any(p, LoweringOptions{}).structure;
  return p;
}

LoweredProgram lower_to_lp(const ProblemSpec& p,
                           const LoweringOptions& options) {
  if (p.structure == Structure::kReverseConvexMilp) {
    throw InvalidArgument(std::string(kind_label(p.kind)) +
                          " is a reverse-convex problem; use lower_to_milp");
  }
  LoweredProgram lowered = lower_any(p, options);
  if (lowered.num_binaries() > 0) {
    throw InvalidArgument(std::string(kind_label(p.kind)) +
                          " needs binaries under these options");
  }
  return lowered;
}

LoweredProgram lower_to_milp(const ProblemSpec& p,
                             const LoweringOptions& options) {
  if (p.structure != Structure::kReverseConvexMilp) {
    throw InvalidArgument(std::string(kind_label(p.kind)) +
                          " is convex; use lower_to_lp");
  }
  return lower_any(p, options);
}

LoweredProgram lower(const ProblemSpec& p, const LoweringOptions& options) {
  return lower_any(p, options);
}

}  // namespace wateralloc
