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

#include "wateralloc/solve.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wateralloc/errors.h"
#include "wateralloc/simplex.h"

namespace wateralloc {

std::string_view solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kIterationLimit:
      return "iteration-limit";
    case SolveStatus::kLocalOnly:
      return "local-only";
  }
  return "?";
}

std::string_view solver_name(SolverId id) {
  switch (id) {
    case SolverId::kSimplex:
      return "simplex";
    case SolverId::kBranchBound:
      return "branch-bound";
    case SolverId::kSmoothedMultistart:
      return "smoothed-multistart";
  }
  return "?";
}

namespace {

double rel(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

struct StageResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = 0.0;
  double bound = 0.0;
  std::vector<double> x;
  std::vector<double> duals;
  std::vector<double> ray;
  std::vector<int> infeasible_rows;
  std::vector<ProofLogEntry> log;
  int iterations = 0;
  int nodes = 0;
};

using StageSolver = std::function<StageResult(const LinearProgram&)>;

// Tolerance of the row that pins an earlier stage's optimum.
double pin_tol(double opt) { return std::max(1e-10 * std::abs(opt), 1e-9); }

void audit_lowering(const LoweredProgram& lowered,
                    const std::vector<double>& raw, SolveReport* report) {
  Certificate& c = report->certificate;
  double raw_residual = 0.0;
  double ratio = 0.0;
  for (const MaxTerm& t : lowered.terms) {
    if (t.column < 0) continue;
    if (t.pressured) {
      const double e = t.expr.evaluate(raw);
      const double want = std::max(0.0, e);
      raw_residual = std::max(
          raw_residual, std::abs(raw[t.column] - want) / std::max(1.0, std::abs(e)));
    }
    if (t.exact) {
      ratio = std::max(ratio, std::abs(t.expr.evaluate(report->x)) / t.big_m);
    }
  }
  c.raw_tightness_residual = raw_residual;
  c.big_m_ratio = ratio;
  c.lp_violation = lowered.lp.max_violation(report->x);
  if (raw_residual > kTightnessTol) {
    c.failures.push_back("auxiliary not tight in the raw solution");
  }
  if (ratio >= 1.0) c.failures.push_back("big-M bound too small");
  if (c.lp_violation > kFeasibilityTol) {
    c.failures.push_back("tightened point violates the lowered rows");
  }
  c.passed = c.failures.empty();
}

SolveReport run_stages(const LoweredProgram& lowered, SolverId id,
                       const StageSolver& solve_one) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.solver = id;
  report.kind = lowered.problem.kind;
  report.year = lowered.problem.year;
  report.weight = lowered.problem.weight;
  report.normalization = lowered.problem.normalization;

  LinearProgram lp = lowered.lp;
  std::vector<double> raw;
  for (size_t k = 0; k < lowered.stages.size(); ++k) {
    const ObjectiveStage& st = lowered.stages[k];
    lp.objective = st.coefficients;
    lp.objective_offset = st.offset;
    lp.sense = st.sense;
    StageResult r = solve_one(lp);
    report.iterations += r.iterations;
    report.nodes += r.nodes;
    report.proof_log.insert(report.proof_log.end(), r.log.begin(), r.log.end());
    if (r.status != SolveStatus::kOptimal) {
      if (k == 0 || raw.empty()) {
        report.status = r.status;
        report.ray = r.ray;
        for (int i : r.infeasible_rows) {
          report.infeasible_rows.push_back(lowered.lp.row_names.at(i));
        }
        report.message = "stage " + st.name + " ended " +
                         std::string(solve_status_name(r.status));
        report.wall_seconds = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
        return report;
      }
      // A later stage failing keeps the earlier stage's optimum.
      report.message = "tie-break stage " + st.name + " ended " +
                       std::string(solve_status_name(r.status));
      break;
    }
    if (k == 0) report.bound = r.bound;
    raw = r.x;
    report.duals = r.duals;
    if (k + 1 < lowered.stages.size()) {
      const int row = lp.add_row(
          "pin_" + st.name,
          st.sense == ObjectiveSense::kMinimize ? RowSense::kLessEqual
                                                : RowSense::kGreaterEqual,
          r.objective - st.offset +
              (st.sense == ObjectiveSense::kMinimize ? 1.0 : -1.0) *
                  pin_tol(r.objective));
      for (int j = 0; j < lp.num_cols(); ++j) {
        lp.add_entry(row, j, st.coefficients[j]);
      }
    }
  }

  report.status = SolveStatus::kOptimal;
  report.x = lowered.tightened(raw);
  for (const ObjectiveStage& st : lowered.stages) {
    double v = st.offset;
    for (size_t j = 0; j < st.coefficients.size(); ++j) {
      v += st.coefficients[j] * report.x[j];
    }
    report.stage_values.push_back(v);
  }
  report.objective = report.stage_values.front();
  report.nb = lowered.f1.evaluate(report.x);
  report.efd = lowered.f2.evaluate(report.x);
  report.decision = lowered.decision(report.x);
  for (const MaxTerm& t : lowered.terms) {
    if (t.column < 0) continue;
    report.auxiliaries.push_back({lowered.lp.col_names[t.column], t.role,
                                  t.month, report.x[t.column]});
  }

  const ProblemSpec& p = lowered.problem;
  report.certificate =
      certify(report, p.scenario, p.year, p.kind, p.weight, p.normalization);
  audit_lowering(lowered, raw, &report);
  if (!report.certificate.passed) {
    report.status = SolveStatus::kIterationLimit;
    report.message = "certification failed: " + report.certificate.failures[0];
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

SolveStatus from_lp(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return SolveStatus::kOptimal;
    case LpStatus::kInfeasible:
      return SolveStatus::kInfeasible;
    case LpStatus::kUnbounded:
      return SolveStatus::kUnbounded;
    case LpStatus::kIterationLimit:
      return SolveStatus::kIterationLimit;
  }
  return SolveStatus::kIterationLimit;
}

SolveStatus from_milp(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal:
      return SolveStatus::kOptimal;
    case MilpStatus::kInfeasible:
      return SolveStatus::kInfeasible;
    case MilpStatus::kUnbounded:
      return SolveStatus::kUnbounded;
    case MilpStatus::kNodeLimit:
      return SolveStatus::kIterationLimit;
  }
  return SolveStatus::kIterationLimit;
}

}  // namespace

SolveReport solve_lp(const LoweredProgram& lowered, double tol,
                     const TraceFn& trace) {
  if (lowered.lp.is_mip()) {
    throw InvalidArgument("solve_lp called on a program with integer columns");
  }
  SimplexOptions opt;
  opt.optimality_tol = tol;
  opt.trace = trace;
  return run_stages(lowered, SolverId::kSimplex,
                    [&](const LinearProgram& lp) {
                      const LpResult r = solve_simplex(lp, opt);
                      StageResult s;
                      s.status = from_lp(r.status);
                      s.objective = r.objective;
                      s.bound = r.objective;
                      s.x = r.x;
                      s.duals = r.duals;
                      s.ray = r.ray;
                      s.infeasible_rows = r.infeasible_rows;
                      s.iterations = r.iterations;
                      return s;
                    });
}

SolveReport solve_milp(const LoweredProgram& lowered, double gap,
                       int node_limit, const TraceFn& trace) {
  if (!lowered.lp.is_mip()) {
    throw InvalidArgument("solve_milp called on a program without binaries");
  }
  MilpOptions opt;
  opt.relative_gap = gap;
  opt.node_limit = node_limit;
  opt.trace = trace;
  opt.lp.optimality_tol = 1e-8;
  // Tightening the continuous part is a cheap and always valid repair.
  opt.heuristic = [&lowered](const std::vector<double>& relaxed)
      -> std::optional<std::vector<double>> {
    return lowered.tightened(relaxed);
  };
  return run_stages(lowered, SolverId::kBranchBound,
                    [&](const LinearProgram& lp) {
                      const MilpResult r = solve_branch_and_bound(lp, opt);
                      StageResult s;
                      s.status = from_milp(r.status);
                      s.objective = r.objective;
                      s.bound = r.bound;
                      s.x = r.x;
                      s.log = r.log;
                      s.iterations = r.lp_iterations;
                      s.nodes = r.nodes;
                      return s;
                    });
}

SolveReport solve_problem(const ProblemSpec& p, const SolveOptions& options) {
  const LoweredProgram lowered = lower(p, options.lowering);
  if (lowered.num_binaries() > 0) {
    return solve_milp(lowered, options.mip_gap, options.node_limit,
                      options.trace);
  }
  return solve_lp(lowered, options.optimality_tol, options.trace);
}

Certificate certify(const SolveReport& report, const Scenario& s,
                    YearType year, ProblemKind kind,
                    std::optional<WeightPair> weight,
                    const Normalization& normalization) {
  Certificate c;
  c.checked = true;
  if (report.decision.areas.size() != static_cast<size_t>(s.num_crops())) {
    c.failures.push_back("report carries no decision for this scenario");
    return c;
  }
  const DecisionVector& d = report.decision;
  const FeasibilityVerdict verdict = check_feasible(s, year, d, kFeasibilityTol);
  c.feasible = verdict.feasible;
  c.worst_feasibility = verdict.worst_relative_violation();
  if (!verdict.feasible) {
    std::string families;
    for (const std::string& f : verdict.violated_families()) {
      families += (families.empty() ? "" : ", ") + f;
    }
    c.failures.push_back("decision infeasible: " + families);
  }

  c.nb = eval_net_benefit(s, year, d, BenefitMode::kExtended);
  c.efd = eval_efd(s, year, d);
  if (rel(c.nb, report.nb) > kObjectiveTol) {
    c.failures.push_back("net benefit does not match recomputation");
  }
  if (rel(c.efd, report.efd) > kObjectiveTol) {
    c.failures.push_back("deficiency does not match recomputation");
  }
  const bool primary_is_nb =
      kind == ProblemKind::kModel1 || kind == ProblemKind::kSub1;
  const double primary = primary_is_nb ? c.nb : c.efd;
  c.objective_residual = rel(primary, report.objective);
  if (c.objective_residual > kObjectiveTol) {
    c.failures.push_back("objective does not match recomputation");
  }

  const DerivedFlows flows = derive_flows(s, year, d);
  const HydroYear& h = s.year(year);
  for (const AuxValue& a : report.auxiliaries) {
    const int m = a.month;
    double want = 0.0;
    switch (a.role) {
      case ColumnRole::kRequirement:
        want = std::max(0.0, flows.requirement[m]);
        break;
      case ColumnRole::kPumping:
        want = std::max(0.0, flows.pumping_requirement[m] -
                                 (h.inflow[m] - d.env_flow[m]));
        break;
      case ColumnRole::kDeficiency:
        want = std::max(0.0, flows.tef[m] - d.env_flow[m]);
        break;
      default:
        continue;
    }
    const double r = std::abs(a.value - want) / std::max(1.0, std::abs(want));
    c.tightness_residual = std::max(c.tightness_residual, r);
    if (r > kTightnessTol) {
      c.failures.push_back("auxiliary not tight: " + a.column);
    }
  }

  if (kind == ProblemKind::kSub1 || kind == ProblemKind::kSub2) {
    if (!weight) {
      c.failures.push_back("subproblem report without a weight");
    } else {
      const double a = weight->w1 * normalization.F1(c.nb);
      const double b = weight->w2 * normalization.F2(c.efd);
      // sub1 keeps w2 F2 <= w1 F1, sub2 keeps w1 F1 <= w2 F2.
      const double slack = kind == ProblemKind::kSub1 ? a - b : b - a;
      c.scalarization_slack = slack;
      const double tol = 1e-6 * std::max(1.0, std::abs(a) + std::abs(b));
      if (slack < -tol) {
        c.failures.push_back("scalarization constraint violated");
      }
    }
  }
  c.passed = c.failures.empty();
  return c;
}

}  // namespace wateralloc
