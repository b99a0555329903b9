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

#include "wateralloc/smoothed.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "wateralloc/errors.h"
#include "wateralloc/hydrology.h"

namespace wateralloc {

double softplus(double x, double mu) {
  if (mu <= 0.0) return std::max(0.0, x);
  const double z = x / mu;
  if (z > 0.0) return x + mu * std::log1p(std::exp(-z));
  return mu * std::log1p(std::exp(z));
}

namespace {

// d softplus / dx
double logistic(double x, double mu) {
  if (mu <= 0.0) return x > 0.0 ? 1.0 : 0.0;
  const double z = x / mu;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Static data of one (scenario, year) pair.
struct Instance {
  Instance(const Scenario& scenario, YearType year)
      : s(scenario), h(scenario.year(year)), n(scenario.num_crops()) {
    clamp = s.options.requirement_clamp;
    const double min_total = s.total_min_area();
    span = std::max(0.0, s.limits.t_area - min_total);
    a.resize(n);
    for (int c = 0; c < n; ++c) {
      gm.push_back(s.crops[c].gross_margin());
      lo_x.push_back(s.crops[c].min_area);
      for (int m = 0; m < kMonths; ++m) {
        double v = net_demand(s.crops[c], h, m);
        if (clamp == RequirementClamp::kPerCrop) v = std::max(v, 0.0);
        a[c][m] = v;
      }
    }
    for (int m = 0; m < kMonths; ++m) {
      hi_e[m] = h.inflow[m];
      lo_e[m] = std::max(0.0, h.inflow[m] - s.limits.canal_cap);
      tef[m] = h.tef_fraction[m] * h.inflow[m];
      double wl = 0.0, wh = 0.0;
      for (int c = 0; c < n; ++c) {
        const double l = lo_x[c], u = lo_x[c] + span;
        wl += a[c][m] > 0 ? a[c][m] * l : a[c][m] * u;
        wh += a[c][m] > 0 ? a[c][m] * u : a[c][m] * l;
      }
      scale_req[m] = std::max(1.0, std::max(std::abs(wl), std::abs(wh)));
      const double rl = clamp == RequirementClamp::kMonthly ? std::max(wl, 0.0) : wl;
      const double rh = clamp == RequirementClamp::kMonthly ? std::max(wh, 0.0) : wh;
      const double pl = rl - h.inflow[m] + lo_e[m];
      const double ph = rh - h.inflow[m] + hi_e[m];
      scale_p[m] = std::max(1.0, std::max(std::abs(pl), std::abs(ph)));
      scale_s[m] = std::max(1.0, std::max(std::abs(tef[m] - hi_e[m]),
                                          std::abs(tef[m] - lo_e[m])));
    }
  }

  int dim() const { return n + kMonths; }

  const Scenario& s;
  const HydroYear& h;
  int n;
  RequirementClamp clamp;
  double span = 0.0;
  std::vector<std::array<double, kMonths>> a;
  std::vector<double> gm, lo_x;
  MonthSeries lo_e{}, hi_e{}, tef{};
  MonthSeries scale_req{}, scale_p{}, scale_s{};
};

// Smoothed values and gradients over (X, E).
struct Eval {
  double f1 = 0.0, f2 = 0.0, pump = 0.0;
  std::vector<double> g1, g2, gp;
};

Eval evaluate(const Instance& in, const std::vector<double>& x,
              const MonthSeries& e, double mu_factor, bool with_grad) {
  const int n = in.n;
  Eval r;
  if (with_grad) {
    r.g1.assign(in.dim(), 0.0);
    r.g2.assign(in.dim(), 0.0);
    r.gp.assign(in.dim(), 0.0);
  }
  const double cw = in.s.economics.cw;
  const double cp = in.s.economics.cp;
  for (int c = 0; c < n; ++c) {
    r.f1 += in.gm[c] * x[c];
    if (with_grad) r.g1[c] += in.gm[c];
  }
  std::vector<double> dreq(n);
  for (int m = 0; m < kMonths; ++m) {
    double w = 0.0;
    for (int c = 0; c < n; ++c) w += in.a[c][m] * x[c];
    double req = w;
    double dreq_dw = 1.0;
    if (in.clamp == RequirementClamp::kMonthly) {
      const double mu = mu_factor * in.scale_req[m];
      req = softplus(w, mu);
      dreq_dw = logistic(w, mu);
    }
    const double pe = req - in.h.inflow[m] + e[m];
    const double mu_p = mu_factor * in.scale_p[m];
    const double p = softplus(pe, mu_p);
    const double dp = logistic(pe, mu_p);
    const double se = in.tef[m] - e[m];
    const double mu_s = mu_factor * in.scale_s[m];
    r.f1 -= cw * req + (cp - cw) * p;
    r.f2 += softplus(se, mu_s);
    r.pump += p;
    if (!with_grad) continue;
    for (int c = 0; c < n; ++c) {
      const double d = dreq_dw * in.a[c][m];
      r.g1[c] -= (cw + (cp - cw) * dp) * d;
      r.gp[c] += dp * d;
    }
    r.g1[n + m] -= (cp - cw) * dp;
    r.gp[n + m] += dp;
    r.g2[n + m] -= logistic(se, mu_s);
  }
  return r;
}

// Euclidean projection onto {y >= 0, sum y <= 1}.
void project_capped_simplex(double* v, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = std::max(0.0, v[i]);
    sum += v[i];
  }
  if (sum <= 1.0) return;
  std::vector<double> u(v, v + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / (i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (int i = 0; i < n; ++i) v[i] = std::max(0.0, v[i] - theta);
}

class Descent {
 public:
  Descent(const ProblemSpec& p, const Instance& in, const SmoothedOptions& opt)
      : p_(p), in_(in), opt_(opt) {
    primary_nb_ =
        p.kind == ProblemKind::kModel1 || p.kind == ProblemKind::kSub1;
    for (int c = 0; c < in.n; ++c) {
      s1_ += std::abs(in.gm[c]) * (in.lo_x[c] + in.span / std::max(1, in.n));
    }
    s1_ = std::max(1.0, s1_);
    for (int m = 0; m < kMonths; ++m) s2_ += in.tef[m];
    s2_ = std::max(1.0, s2_);
    if (p.weight) {
      const Normalization& nm = p.normalization;
      scal_ = p.kind == ProblemKind::kSub1 ? 1.0 : -1.0;
      d_ = p.weight->w1 * nm.f1_scale * s1_ + p.weight->w2 * nm.f2_scale * s2_;
      d_ = std::max(d_, 1e-300);
      constraints_ = 2;
    }
  }

  // Runs the continuation from one start and returns the final decision.
  DecisionVector run(const DecisionVector& start, int start_index,
                     int* iterations) {
    std::vector<double> z(in_.dim());
    for (int c = 0; c < in_.n; ++c) {
      z[c] = in_.span > 0.0 ? (start.areas[c] - in_.lo_x[c]) / in_.span : 0.0;
    }
    for (int m = 0; m < kMonths; ++m) {
      const double w = in_.hi_e[m] - in_.lo_e[m];
      z[in_.n + m] = w > 0.0 ? (start.env_flow[m] - in_.lo_e[m]) / w : 0.0;
    }
    project(&z);
    lambda_.assign(constraints_, 0.0);
    rho_ = 10.0;
    double mu = opt_.schedule.initial_factor;
    for (int stage = 0; stage < opt_.schedule.stages; ++stage) {
      double prev_violation = kInfinity;
      for (int outer = 0; outer < opt_.outer_iterations; ++outer) {
        *iterations += inner(&z, mu);
        const std::vector<double> g = constraint_values(z, mu);
        double violation = 0.0;
        double change = 0.0;
        for (int i = 0; i < constraints_; ++i) {
          violation = std::max(violation, g[i]);
          const double next = std::max(0.0, lambda_[i] + rho_ * g[i]);
          change = std::max(change, std::abs(next - lambda_[i]) /
                                        (1.0 + std::abs(lambda_[i])));
          lambda_[i] = next;
        }
        if (opt_.trace) {
          std::ostringstream line;
          line.precision(12);
          line << "solver=smoothed-multistart start=" << start_index
               << " stage=" << stage << " outer=" << outer
               << " mu_factor=" << mu << " objective=" << objective(z, mu)
               << " violation=" << violation << " rho=" << rho_;
          opt_.trace(line.str());
        }
        if (violation <= 1e-10 && change <= 1e-9) break;
        if (violation > 0.25 * prev_violation) rho_ *= 2.0;
        prev_violation = violation;
      }
      mu /= opt_.schedule.decay;
    }
    return to_decision(z);
  }

 private:
  void project(std::vector<double>* z) const {
    project_capped_simplex(z->data(), in_.n);
    for (int m = 0; m < kMonths; ++m) {
      double& v = (*z)[in_.n + m];
      v = std::clamp(v, 0.0, 1.0);
    }
  }

  void unpack(const std::vector<double>& z, std::vector<double>* x,
              MonthSeries* e) const {
    x->resize(in_.n);
    for (int c = 0; c < in_.n; ++c) (*x)[c] = in_.lo_x[c] + in_.span * z[c];
    for (int m = 0; m < kMonths; ++m) {
      (*e)[m] = in_.lo_e[m] + (in_.hi_e[m] - in_.lo_e[m]) * z[in_.n + m];
    }
  }

  DecisionVector to_decision(const std::vector<double>& z) const {
    DecisionVector d;
    unpack(z, &d.areas, &d.env_flow);
    return d;
  }

  // Chain rule from (X, E) to z.
  void to_z(std::vector<double>* g) const {
    for (int c = 0; c < in_.n; ++c) (*g)[c] *= in_.span;
    for (int m = 0; m < kMonths; ++m) {
      (*g)[in_.n + m] *= in_.hi_e[m] - in_.lo_e[m];
    }
  }

  double objective_of(const Eval& ev) const {
    return primary_nb_ ? -ev.f1 / s1_ : ev.f2 / s2_;
  }

  double objective(const std::vector<double>& z, double mu) const {
    std::vector<double> x;
    MonthSeries e{};
    unpack(z, &x, &e);
    return objective_of(evaluate(in_, x, e, mu, false));
  }

  std::vector<double> constraints_of(const Eval& ev) const {
    std::vector<double> g;
    g.push_back((ev.pump - in_.s.limits.t_pump) / in_.s.limits.t_pump);
    if (constraints_ == 2) {
      const Normalization& nm = p_.normalization;
      const double a = p_.weight->w1 * nm.F1(ev.f1);
      const double b = p_.weight->w2 * nm.F2(ev.f2);
      g.push_back(scal_ * (b - a) / d_);
    }
    return g;
  }

  std::vector<double> constraint_values(const std::vector<double>& z,
                                        double mu) const {
    std::vector<double> x;
    MonthSeries e{};
    unpack(z, &x, &e);
    return constraints_of(evaluate(in_, x, e, mu, false));
  }

  // Augmented Lagrangian value and gradient in z.
  double lagrangian(const std::vector<double>& z, double mu,
                    std::vector<double>* grad) const {
    std::vector<double> x;
    MonthSeries e{};
    unpack(z, &x, &e);
    const Eval ev = evaluate(in_, x, e, mu, grad != nullptr);
    double value = objective_of(ev);
    const std::vector<double> g = constraints_of(ev);
    std::vector<double> mult(constraints_);
    for (int i = 0; i < constraints_; ++i) {
      const double t = std::max(0.0, lambda_[i] + rho_ * g[i]);
      value += (t * t - lambda_[i] * lambda_[i]) / (2.0 * rho_);
      mult[i] = t;
    }
    if (grad) {
      const int dim = in_.dim();
      grad->assign(dim, 0.0);
      for (int k = 0; k < dim; ++k) {
        (*grad)[k] = primary_nb_ ? -ev.g1[k] / s1_ : ev.g2[k] / s2_;
        (*grad)[k] += mult[0] * ev.gp[k] / in_.s.limits.t_pump;
      }
      if (constraints_ == 2) {
        const Normalization& nm = p_.normalization;
        const double ca = p_.weight->w1 * nm.f1_scale;
        const double cb = p_.weight->w2 * nm.f2_scale;
        for (int k = 0; k < dim; ++k) {
          (*grad)[k] +=
              mult[1] * scal_ * (cb * ev.g2[k] - ca * ev.g1[k]) / d_;
        }
      }
      to_z(grad);
    }
    return value;
  }

  // Projected gradient with Barzilai-Borwein steps and Armijo backtracking.
  int inner(std::vector<double>* z, double mu) const {
    const int dim = in_.dim();
    std::vector<double> grad, trial(dim), grad_new, step(dim);
    double value = lagrangian(*z, mu, &grad);
    double gmax = 0.0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    double alpha = gmax > 0.0 ? 1.0 / gmax : 1.0;
    int it = 0;
    for (; it < opt_.inner_iterations; ++it) {
      // Stationarity: || P(z - grad) - z ||.
      trial = *z;
      for (int k = 0; k < dim; ++k) trial[k] -= grad[k];
      project(&trial);
      double stat = 0.0;
      for (int k = 0; k < dim; ++k) {
        stat = std::max(stat, std::abs(trial[k] - (*z)[k]));
      }
      if (stat < 1e-11) break;

      double next_value = 0.0;
      bool accepted = false;
      for (int back = 0; back < 60; ++back) {
        for (int k = 0; k < dim; ++k) trial[k] = (*z)[k] - alpha * grad[k];
        project(&trial);
        double slope = 0.0;
        for (int k = 0; k < dim; ++k) {
          step[k] = trial[k] - (*z)[k];
          slope += grad[k] * step[k];
        }
        next_value = lagrangian(trial, mu, nullptr);
        if (next_value <= value + 1e-4 * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
      lagrangian(trial, mu, &grad_new);
      double ss = 0.0, sy = 0.0;
      for (int k = 0; k < dim; ++k) {
        ss += step[k] * step[k];
        sy += step[k] * (grad_new[k] - grad[k]);
      }
      *z = trial;
      grad.swap(grad_new);
      const bool progress = value - next_value > 1e-15 * (1.0 + std::abs(value));
      value = next_value;
      alpha = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : alpha * 4.0;
      if (!progress && ss < 1e-28) break;
    }
    return it;
  }

  const ProblemSpec& p_;
  const Instance& in_;
  const SmoothedOptions& opt_;
  bool primary_nb_ = true;
  double s1_ = 0.0, s2_ = 0.0;
  double scal_ = 1.0, d_ = 1.0;
  int constraints_ = 1;
  std::vector<double> lambda_;
  double rho_ = 10.0;
};

double exact_pumping(const Scenario& s, YearType year, const DecisionVector& d) {
  const DerivedFlows f = derive_flows(s, year, d);
  return std::accumulate(f.pumping.begin(), f.pumping.end(), 0.0);
}

// Moves env flows, then areas, toward their lower bounds until the exact
// pumping total fits under the cap.
void repair_pumping(const Scenario& s, YearType year, const Instance& in,
                    DecisionVector* d) {
  const double cap = s.limits.t_pump;
  if (exact_pumping(s, year, *d) <= cap) return;
  auto bisect = [&](auto&& at) {
    if (exact_pumping(s, year, at(1.0)) > cap) {
      *d = at(1.0);
      return false;
    }
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 80; ++k) {
      const double mid = 0.5 * (lo + hi);
      (exact_pumping(s, year, at(mid)) > cap ? lo : hi) = mid;
    }
    *d = at(hi);
    return true;
  };
  const DecisionVector base = *d;
  auto env_toward = [&](double t) {
    DecisionVector out = base;
    for (int m = 0; m < kMonths; ++m) {
      out.env_flow[m] = base.env_flow[m] + t * (in.lo_e[m] - base.env_flow[m]);
    }
    return out;
  };
  if (bisect(env_toward)) return;
  const DecisionVector base2 = *d;
  auto area_toward = [&](double t) {
    DecisionVector out = base2;
    for (int c = 0; c < in.n; ++c) {
      out.areas[c] = base2.areas[c] + t * (in.lo_x[c] - base2.areas[c]);
    }
    return out;
  };
  bisect(area_toward);
}

}  // namespace

SmoothedValues smoothed_objectives(const Scenario& s, YearType year,
                                   const DecisionVector& d, double mu_factor) {
  if (d.areas.size() != static_cast<size_t>(s.num_crops())) {
    throw DimensionError("decision does not match the scenario's crops");
  }
  const Instance in(s, year);
  const Eval ev = evaluate(in, d.areas, d.env_flow, mu_factor, false);
  return {ev.f1, ev.f2, ev.pump};
}

std::vector<DecisionVector> random_starts(const Scenario& s, YearType year,
                                          int count, std::uint64_t seed) {
  const Instance in(s, year);
  std::mt19937_64 rng(seed);
  std::vector<DecisionVector> out;
  const double share = in.span / std::max(1, in.n);
  for (int k = 0; k < count; ++k) {
    DecisionVector d;
    for (int c = 0; c < in.n; ++c) {
      d.areas.push_back(in.lo_x[c] + share * unit_uniform(rng));
    }
    for (int m = 0; m < kMonths; ++m) {
      const double v = in.h.inflow[m] * unit_uniform(rng);
      d.env_flow[m] = std::clamp(v, in.lo_e[m], in.hi_e[m]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

SolveReport solve_smoothed_multistart(const ProblemSpec& p,
                                      const SmoothedOptions& options) {
  if (options.n_starts < 1) {
    throw InvalidArgument("n_starts must be at least 1");
  }
  if (options.schedule.stages < 1 || !(options.schedule.initial_factor > 0.0) ||
      !(options.schedule.decay > 1.0)) {
    throw InvalidArgument("invalid smoothing schedule");
  }
  const auto start_time = std::chrono::steady_clock::now();
  const Scenario& s = p.scenario;
  const Instance in(s, p.year);
  std::vector<DecisionVector> starts = options.initial_points;
  if (static_cast<int>(starts.size()) > options.n_starts) {
    starts.resize(options.n_starts);
  }
  const int random_count = options.n_starts - static_cast<int>(starts.size());
  for (DecisionVector& d : random_starts(s, p.year, random_count, options.seed)) {
    starts.push_back(std::move(d));
  }

  SolveReport best;
  best.status = SolveStatus::kInfeasible;
  best.solver = SolverId::kSmoothedMultistart;
  best.kind = p.kind;
  best.year = p.year;
  best.weight = p.weight;
  best.normalization = p.normalization;
  const bool primary_nb =
      p.kind == ProblemKind::kModel1 || p.kind == ProblemKind::kSub1;
  double best_score = kInfinity;
  double best_violation = kInfinity;
  int feasible_count = 0;
  int iterations = 0;

  Descent descent(p, in, options);
  for (size_t k = 0; k < starts.size(); ++k) {
    if (starts[k].areas.size() != static_cast<size_t>(in.n)) {
      throw DimensionError("initial point does not match the scenario");
    }
    DecisionVector d = descent.run(starts[k], static_cast<int>(k), &iterations);
    repair_pumping(s, p.year, in, &d);

    SolveReport cand;
    cand.solver = SolverId::kSmoothedMultistart;
    cand.kind = p.kind;
    cand.year = p.year;
    cand.weight = p.weight;
    cand.normalization = p.normalization;
    cand.decision = d;
    cand.nb = eval_net_benefit(s, p.year, d);
    cand.efd = eval_efd(s, p.year, d);
    cand.objective = primary_nb ? cand.nb : cand.efd;
    cand.certificate =
        certify(cand, s, p.year, p.kind, p.weight, p.normalization);
    const double score = primary_nb ? -cand.nb : cand.efd;
    if (cand.certificate.passed) {
      ++feasible_count;
      if (best.status != SolveStatus::kLocalOnly || score < best_score) {
        cand.status = SolveStatus::kLocalOnly;
        best = std::move(cand);
        best_score = score;
      }
    } else if (best.status != SolveStatus::kLocalOnly) {
      double violation = cand.certificate.worst_feasibility;
      if (cand.certificate.scalarization_slack) {
        violation = std::max(violation, -*cand.certificate.scalarization_slack);
      }
      if (violation < best_violation) {
        best_violation = violation;
        cand.status = SolveStatus::kInfeasible;
        best = std::move(cand);
      }
    }
  }
  best.iterations = iterations;
  if (best.status == SolveStatus::kLocalOnly) {
    best.message = "best of " + std::to_string(starts.size()) + " starts, " +
                   std::to_string(feasible_count) + " feasible";
  } else {
    std::ostringstream msg;
    msg << "no start reached feasibility; best violation " << best_violation;
    best.message = msg.str();
  }
  best.wall_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start_time)
                          .count();
  return best;
}

SolveReport solve_smoothed_multistart(const ProblemSpec& p, int n_starts,
                                      std::uint64_t seed,
                                      const SmoothingSchedule& schedule) {
  SmoothedOptions opt;
  opt.n_starts = n_starts;
  opt.seed = seed;
  opt.schedule = schedule;
  return solve_smoothed_multistart(p, opt);
}

}  // namespace wateralloc
