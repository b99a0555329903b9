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

// Acceptance run. One PASS/FAIL line per criterion, detail lines indented
// below it. Criteria 3 and 4 depend on the reconstructed inflow series and
// do not affect the exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "support/desk.h"
#include "wateralloc/hydrology.h"
#include "wateralloc/pareto.h"
#include "wateralloc/report.h"
#include "wateralloc/smoothed.h"
#include "wateralloc/solve.h"

namespace wateralloc {
namespace {

constexpr YearType kYears[] = {YearType::kDry, YearType::kAverage,
                               YearType::kWet};
constexpr ProblemKind kKinds[] = {ProblemKind::kModel1, ProblemKind::kModel2,
                                  ProblemKind::kSub1, ProblemKind::kSub2};
constexpr RequirementClamp kClamps[] = {RequirementClamp::kNone,
                                        RequirementClamp::kMonthly,
                                        RequirementClamp::kPerCrop};
constexpr WeightPair kEven{0.5, 0.5};

// Pinned tolerances.
constexpr double kRuntimeLimit = 5.0;        // s per solve
constexpr double kWetEfdTol = 1e-6;          // GL
constexpr double kAnchorBand = 0.05;         // relative
constexpr double kOracleObjTol = 1e-6;       // relative
constexpr double kOracleStep = 1.0;          // decision space
constexpr double kOracleRuntime = 60.0;      // s
constexpr int kRandomScenarios = 100;
constexpr double kCrossSolverTol = 1e-3;     // relative
constexpr int kSmoothedStarts = 20;
constexpr double kMonotoneTol = 1e-9;        // relative

struct Detail {
  std::vector<std::string> lines;
  void add(const char* fmt, ...) __attribute__((format(printf, 2, 3)));
};

void Detail::add(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  lines.emplace_back(buf);
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::optional<WeightPair> weight_for(ProblemKind kind) {
  if (kind == ProblemKind::kSub1 || kind == ProblemKind::kSub2) return kEven;
  return std::nullopt;
}

struct Timed {
  SolveReport report;
  double seconds = 0.0;
};

Timed timed_solve(const ProblemSpec& p, const SolveOptions& o = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{solve_problem(p, o), 0.0};
  t.seconds = seconds_since(t0);
  return t;
}

bool certified(const SolveReport& r) {
  return r.status == SolveStatus::kOptimal && r.certificate.passed;
}

std::string why(const SolveReport& r) {
  std::string out(solve_status_name(r.status));
  if (!r.certificate.failures.empty()) out += " / " + r.certificate.failures[0];
  if (!r.message.empty()) out += " / " + r.message;
  return out;
}

// 1. Model 1 keeps eight crops at their minimum and gives Potato the rest.
bool criterion1(const Scenario& s, Detail& d) {
  bool ok = true;
  const int potato = s.crop_index("Potato");
  for (YearType y : kYears) {
    const Timed t = timed_solve(build_problem(s, y, ProblemKind::kModel1));
    if (!certified(t.report)) {
      d.add("%s: %s", year_label(y).data(), why(t.report).c_str());
      ok = false;
      continue;
    }
    int at_min = 0;
    bool match = true;
    for (int c = 0; c < s.num_crops(); ++c) {
      const double x = t.report.decision.areas[c];
      const double want = c == potato ? 55271.0 : s.crops[c].min_area;
      if (std::abs(x - want) > 1e-6) match = false;
      if (c != potato && std::abs(x - s.crops[c].min_area) <= 1e-6) ++at_min;
    }
    const bool fast = t.seconds < kRuntimeLimit;
    ok = ok && match && fast;
    d.add("%s: potato %.6f ha, %d crops at min, %.3f s", year_label(y).data(),
          t.report.decision.areas[potato], at_min, t.seconds);
  }
  return ok;
}

// 2. Model 2 returns the min-area vector.
bool criterion2(const Scenario& s, Detail& d) {
  bool ok = true;
  for (YearType y : kYears) {
    const Timed t = timed_solve(build_problem(s, y, ProblemKind::kModel2));
    if (!certified(t.report)) {
      d.add("%s: %s", year_label(y).data(), why(t.report).c_str());
      ok = false;
      continue;
    }
    double worst = 0.0;
    for (int c = 0; c < s.num_crops(); ++c) {
      worst = std::max(worst,
                       std::abs(t.report.decision.areas[c] - s.crops[c].min_area));
    }
    const bool fast = t.seconds < kRuntimeLimit;
    ok = ok && worst <= 1e-6 && fast;
    d.add("%s: max |X - min_area| %.3g ha, efd %.4f GL, %.3f s",
          year_label(y).data(), worst, t.report.certificate.efd, t.seconds);
  }
  return ok;
}

Scenario with_clamp(Scenario s, RequirementClamp c) {
  s.options.requirement_clamp = c;
  return s;
}

// 3. Wet year deficiency is zero for both models.
bool criterion3(const Scenario& base, Detail& d) {
  bool ok = true;
  for (RequirementClamp c : kClamps) {
    const Scenario s = with_clamp(base, c);
    double efd[2] = {NAN, NAN};
    for (int k = 0; k < 2; ++k) {
      const ProblemKind kind = k == 0 ? ProblemKind::kModel1 : ProblemKind::kModel2;
      const SolveReport r = solve_problem(build_problem(s, YearType::kWet, kind));
      if (certified(r)) efd[k] = r.certificate.efd;
    }
    const bool pass = std::abs(efd[0]) <= kWetEfdTol && std::abs(efd[1]) <= kWetEfdTol;
    // The bundled clamp decides the verdict; the others are reported.
    if (c == base.options.requirement_clamp) ok = pass;
    d.add("clamp %s: model1 efd %.4f GL, model2 efd %.4f GL%s",
          clamp_label(c).data(), efd[0], efd[1],
          c == base.options.requirement_clamp ? " (bundled)" : "");
  }
  return ok;
}

// 4. Anchor values on the dry and average years.
bool criterion4(const Scenario& base, Detail& d) {
  bool ok = true;
  for (RequirementClamp c : kClamps) {
    const Scenario s = with_clamp(base, c);
    const AnchorPair dry = anchors(s, YearType::kDry);
    const AnchorPair avg = anchors(s, YearType::kAverage);
    const double g1 = dry.f1.nb / 2.6746e10 - 1.0;
    const double g2 = dry.f1.efd / 194.9720 - 1.0;
    const double g3 = dry.f2.nb / 1.7165e10 - 1.0;
    const double g4 = dry.f2.efd / 39.8460 - 1.0;
    const double g5 = avg.f1.efd / 451.6718 - 1.0;
    const bool pass = std::abs(g1) <= kAnchorBand && std::abs(g2) <= kAnchorBand &&
                      std::abs(g3) <= kAnchorBand && std::abs(g4) <= kAnchorBand &&
                      std::abs(g5) <= kAnchorBand;
    if (c == base.options.requirement_clamp) ok = pass;
    d.add("clamp %s%s:", clamp_label(c).data(),
          c == base.options.requirement_clamp ? " (bundled)" : "");
    d.add("  dry nb-max (%.4e, %.4f) gaps %+.1f%% %+.1f%%", dry.f1.nb, dry.f1.efd,
          100 * g1, 100 * g2);
    d.add("  dry efd-min (%.4e, %.4f) gaps %+.1f%% %+.1f%%", dry.f2.nb,
          dry.f2.efd, 100 * g3, 100 * g4);
    d.add("  avg nb-max efd %.4f gap %+.1f%%", avg.f1.efd, 100 * g5);
  }
  return ok;
}

// 5. Exhaustive grid search on the desk instance.
bool criterion5(Detail& d) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario s = testing::desk_scenario();
  const Normalization norm = testing::desk_normalization();
  bool ok = true;
  for (ProblemKind kind : kKinds) {
    const SolveReport r = solve_problem(
        build_problem(s, YearType::kDry, kind, weight_for(kind), norm));
    const testing::GridResult g =
        testing::grid_search(s, YearType::kDry, kind, weight_for(kind), norm);
    if (!certified(r) || !g.found) {
      d.add("%s: solver %s, grid found %d", kind_label(kind).data(),
            why(r).c_str(), g.found);
      ok = false;
      continue;
    }
    const bool max_nb = kind == ProblemKind::kModel1 || kind == ProblemKind::kSub1;
    const double value = max_nb ? r.certificate.nb : r.certificate.efd;
    const double gap = std::abs(value - g.best) / std::max(1.0, std::abs(g.best));
    double nearest = std::numeric_limits<double>::infinity();
    for (const testing::GridPoint& p : g.optima) {
      nearest = std::min(nearest, testing::decision_distance(p.decision, r.decision));
    }
    ok = ok && gap <= kOracleObjTol && nearest <= kOracleStep;
    d.add("%s: solver %.6f grid %.6f rel gap %.2g, distance %.3g, %ld grid points",
          kind_label(kind).data(), value, g.best, gap, nearest, g.evaluated);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < kOracleRuntime;
  d.add("oracle run %.2f s", secs);
  return ok;
}

// 6. Epigraph tightness over random scenarios.
bool criterion6(Detail& d) {
  int solves = 0, checked = 0, failures = 0, skipped = 0;
  double worst = 0.0, worst_raw = 0.0;
  for (int seed = 1; seed <= kRandomScenarios; ++seed) {
    const Scenario s = testing::random_scenario(static_cast<std::uint64_t>(seed));
    for (const auto& [y, hydro] : s.years) {
      const SolveReport m1 = solve_problem(build_problem(s, y, ProblemKind::kModel1));
      const SolveReport m2 = solve_problem(build_problem(s, y, ProblemKind::kModel2));
      Normalization norm = Normalization::fixed();
      if (certified(m1) && certified(m2)) {
        norm = Normalization::from_anchors(m1.certificate.nb, m1.certificate.efd,
                                           m2.certificate.nb, m2.certificate.efd);
      }
      for (ProblemKind kind : kKinds) {
        const SolveReport r =
            kind == ProblemKind::kModel1   ? m1
            : kind == ProblemKind::kModel2 ? m2
                                           : solve_problem(build_problem(
                                                 s, y, kind, weight_for(kind), norm));
        ++solves;
        if (r.status != SolveStatus::kOptimal) {
          ++skipped;
          continue;
        }
        ++checked;
        worst = std::max(worst, r.certificate.tightness_residual);
        worst_raw = std::max(worst_raw, r.certificate.raw_tightness_residual);
        if (!r.certificate.passed ||
            r.certificate.tightness_residual > kTightnessTol) {
          ++failures;
          if (failures <= 5) {
            d.add("seed %d %s %s: %s", seed, year_label(y).data(),
                  kind_label(kind).data(), why(r).c_str());
          }
        }
      }
    }
  }
  d.add("%d scenarios, %d solves, %d optimal, %d not optimal, %d failures",
        kRandomScenarios, solves, checked, skipped, failures);
  d.add("worst tightness %.3g, worst raw tightness %.3g", worst, worst_raw);
  return failures == 0 && checked >= kRandomScenarios;
}

// 7. Smoothed multistart against the certified optima.
bool criterion7(const Scenario& s, Detail& d) {
  bool ok = true;
  for (YearType y : kYears) {
    for (ProblemKind kind : {ProblemKind::kModel1, ProblemKind::kModel2}) {
      const ProblemSpec p = build_problem(s, y, kind);
      const SolveReport exact = solve_problem(p);
      const SolveReport smooth = solve_smoothed_multistart(p, kSmoothedStarts, 1);
      if (!certified(exact) || !smooth.ok()) {
        d.add("%s %s: exact %s, smoothed %s", year_label(y).data(),
              kind_label(kind).data(), why(exact).c_str(), why(smooth).c_str());
        ok = false;
        continue;
      }
      const bool nb = kind == ProblemKind::kModel1;
      const double a = nb ? exact.certificate.nb : exact.certificate.efd;
      const double b = nb ? smooth.certificate.nb : smooth.certificate.efd;
      const double gap = rel(a, b);
      ok = ok && gap <= kCrossSolverTol;
      d.add("%s %s: exact %.8g smoothed %.8g rel gap %.2e", year_label(y).data(),
            kind_label(kind).data(), a, b, gap);
    }
  }
  return ok;
}

bool check_front(const Scenario& s, YearType y, const FrontRun& run,
                 Detail& d, const char* label) {
  const ParetoFront& f = run.front;
  int bad_cert = 0, dominated = 0, outside = 0;
  const double nb_lo = run.anchors.f2.nb, nb_hi = run.anchors.f1.nb;
  const double efd_lo = run.anchors.f2.efd, efd_hi = run.anchors.f1.efd;
  std::vector<ParetoPoint> recomputed;
  for (const ParetoPoint& p : f.points) {
    ParetoPoint q = p;
    q.nb = eval_net_benefit(s, y, p.decision);
    q.efd = eval_efd(s, y, p.decision);
    if (!check_feasible(s, y, p.decision).feasible ||
        rel(q.nb, p.nb) > kObjectiveTol || std::abs(q.efd - p.efd) > 1e-6) {
      ++bad_cert;
    }
    if (q.nb < nb_lo - 1e-9 * std::abs(nb_lo) || q.nb > nb_hi + 1e-9 * std::abs(nb_hi) ||
        q.efd < efd_lo - 1e-6 || q.efd > efd_hi + 1e-6) {
      ++outside;
    }
    recomputed.push_back(std::move(q));
  }
  for (size_t i = 0; i < recomputed.size(); ++i) {
    for (size_t j = 0; j < recomputed.size(); ++j) {
      if (i != j && dominates(recomputed[j], recomputed[i])) ++dominated;
    }
  }
  // Every point on the front came from a certified solve; count the rest.
  int uncertified = 0;
  for (const std::string& diag : run.diagnostics) {
    (void)diag;
    ++uncertified;
  }
  d.add("%s: %zu points, %d recompute mismatches, %d dominated pairs, %d outside "
        "anchors, %d dropped solves",
        label, f.points.size(), bad_cert, dominated, outside, uncertified);
  return f.points.size() >= 2 && bad_cert == 0 && dominated == 0 && outside == 0;
}

// 8. Front properties and reproducibility.
bool criterion8(const Scenario& bundle, Detail& d) {
  bool ok = true;
  {
    const Scenario s = testing::desk_scenario();
    ParetoOptions o;
    o.n_weights = 19;
    ok = check_front(s, YearType::kDry, trace_front(s, YearType::kDry, o), d,
                     "desk dry") && ok;
  }
  for (YearType y : kYears) {
    ParetoOptions o;
    o.n_weights = 20;
    const FrontRun run = trace_front(bundle, y, o);
    const std::string label = "bundled " + std::string(year_label(y));
    ok = check_front(bundle, y, run, d, label.c_str()) && ok;
  }
  ParetoOptions o;
  o.n_weights = 10;
  o.jitter = true;
  o.seed = 7;
  const auto names = [&] {
    std::vector<std::string> v;
    for (const CropSpec& c : bundle.crops) v.push_back(c.name);
    return v;
  }();
  const std::string a =
      front_to_json(trace_front(bundle, YearType::kDry, o).front, names).dump(2);
  const std::string b =
      front_to_json(trace_front(bundle, YearType::kDry, o).front, names).dump(2);
  d.add("seeded rerun: %zu bytes, identical %s", a.size(), a == b ? "yes" : "no");
  return ok && a == b;
}

// Optimum of `kind` as a parameter varies; -inf when infeasible so that a
// feasible value after an infeasible one still counts as an increase.
bool sweep(const Scenario& base, ProblemKind kind, const std::vector<double>& values,
           const std::function<void(Scenario&, double)>& set, const char* label,
           Detail& d) {
  bool ok = true;
  for (YearType y : kYears) {
    std::string row = std::string(label) + " " + std::string(year_label(y)) + ":";
    double prev = -std::numeric_limits<double>::infinity();
    for (double v : values) {
      Scenario s = base;
      set(s, v);
      const SolveReport r = solve_problem(build_problem(s, y, kind));
      double cur = -std::numeric_limits<double>::infinity();
      if (certified(r)) {
        cur = kind == ProblemKind::kModel1 ? r.certificate.nb : r.certificate.efd;
      } else if (r.status != SolveStatus::kInfeasible) {
        ok = false;
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, " %.6g", cur);
      row += buf;
      if (cur < prev - kMonotoneTol * std::max(1.0, std::abs(prev))) ok = false;
      prev = cur;
    }
    d.lines.push_back(row);
  }
  return ok;
}

// 9. Monotonicity sweeps.
bool criterion9(const Scenario& s, Detail& d) {
  bool ok = sweep(s, ProblemKind::kModel1, {100, 200, 300, 400, 500, 600},
                  [](Scenario& x, double v) { x.limits.t_pump = v; },
                  "model1 nb vs t_pump", d);
  ok = sweep(s, ProblemKind::kModel1, {2000, 4000, 6000},
             [](Scenario& x, double v) { x.limits.canal_cap = v; },
             "model1 nb vs canal_cap", d) && ok;
  ok = sweep(s, ProblemKind::kModel2, {0.4, 0.5, 0.6},
             [](Scenario& x, double v) {
               for (auto& [label, year] : x.years) {
                 year.tef_fraction = tessmann_fractions(v);
               }
             },
             "model2 efd vs tef_fraction_high", d) && ok;
  return ok;
}

// 10. Legacy evaluation credits water diverted in months without demand.
bool criterion10(const Scenario& s, Detail& d) {
  const YearType y = YearType::kDry;
  // Minimum areas and no environmental flow: every month diverts its inflow.
  const DecisionVector dec = min_area_decision(s);
  const DerivedFlows f = derive_flows(s, y, dec);
  std::string months;
  for (int m = 0; m < kMonths; ++m) {
    if (f.pumping_requirement[m] <= 0.0 && f.allocation[m] > 0.0) {
      months += " " + std::string(kMonthNames[m]);
    }
  }
  const double legacy = eval_net_benefit(s, y, dec, BenefitMode::kLegacy);
  const double extended = eval_net_benefit(s, y, dec, BenefitMode::kExtended);
  d.add("requirement-zero months with allocation:%s",
        months.empty() ? " none" : months.c_str());
  d.add("legacy %.6e, extended %.6e, difference %.6e", legacy, extended,
        legacy - extended);
  return check_feasible(s, y, dec).feasible && !months.empty() && legacy > extended;
}

struct Criterion {
  int id;
  const char* name;
  bool gating;
  std::function<bool(Detail&)> run;
};

}  // namespace
}  // namespace wateralloc

int main() {
  using namespace wateralloc;
  const Scenario bundle = builtin_rajshahi();
  const std::vector<Criterion> criteria = {
      {1, "model1 crop areas", true, [&](Detail& d) { return criterion1(bundle, d); }},
      {2, "model2 crop areas", true, [&](Detail& d) { return criterion2(bundle, d); }},
      {3, "wet-year deficiency (conditional)", false,
       [&](Detail& d) { return criterion3(bundle, d); }},
      {4, "anchor values (conditional)", false,
       [&](Detail& d) { return criterion4(bundle, d); }},
      {5, "desk grid oracle", true, [](Detail& d) { return criterion5(d); }},
      {6, "epigraph tightness", true, [](Detail& d) { return criterion6(d); }},
      {7, "smoothed cross-check", true, [&](Detail& d) { return criterion7(bundle, d); }},
      {8, "front properties", true, [&](Detail& d) { return criterion8(bundle, d); }},
      {9, "monotonicity sweeps", true, [&](Detail& d) { return criterion9(bundle, d); }},
      {10, "legacy overestimate", true,
       [&](Detail& d) { return criterion10(bundle, d); }},
  };
  int gating_failures = 0;
  for (const Criterion& c : criteria) {
    Detail d;
    bool pass = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      pass = c.run(d);
    } catch (const std::exception& e) {
      d.add("exception: %s", e.what());
    }
    std::printf("%s %2d %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                seconds_since(t0));
    for (const std::string& line : d.lines) std::printf("     %s\n", line.c_str());
    std::fflush(stdout);
    if (!pass && c.gating) ++gating_failures;
  }
  std::printf("%d gating failure(s)\n", gating_failures);
  return gating_failures == 0 ? 0 : 1;
}
