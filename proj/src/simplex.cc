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

#include "wateralloc/simplex.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace wateralloc {

std::string_view lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "?";
}

namespace {

enum class VarState : uint8_t { kBasic, kAtLower, kAtUpper, kFree, kFixed };

// Internal form: columns are the n structurals, then m logicals r_i = a_i.x
// (stored as -e_i), then artificials. Every row reads A v = 0; row bounds
// live on the logicals.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), opt_(options) {}

  LpResult run() {
    LpResult result;
    m_ = lp_.num_rows();
    n_ = lp_.num_cols();
    compute_scaling();
    build();

    // Phase 1 when any row starts out violated.
    if (num_artificials_ > 0) {
      Eigen::VectorXd cost = Eigen::VectorXd::Zero(num_vars_);
      for (int j = first_artificial_; j < num_vars_; ++j) cost[j] = 1.0;
      phase_ = 1;
      const LpStatus st = iterate(cost, &result);
      result.phase1_iterations = iterations_;
      if (st == LpStatus::kIterationLimit) {
        return finish(LpStatus::kIterationLimit, &result);
      }
      bool infeasible = false;
      for (int i = 0; i < m_; ++i) {
        const int v = basis_[i];
        if (v >= first_artificial_ && x_[v] > artificial_tol(v)) {
          infeasible = true;
          result.infeasible_rows.push_back(artificial_row_[v - first_artificial_]);
        }
      }
      if (infeasible) {
        std::sort(result.infeasible_rows.begin(), result.infeasible_rows.end());
        return finish(LpStatus::kInfeasible, &result);
      }
      for (int j = first_artificial_; j < num_vars_; ++j) {
        hi_[j] = 0.0;
        if (state_[j] != VarState::kBasic) {
          state_[j] = VarState::kFixed;
          x_[j] = 0.0;
        }
      }
      drive_out_artificials();
    }

    phase_ = 2;
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(num_vars_);
    for (int j = 0; j < n_; ++j) cost[j] = cost_[j];
    const LpStatus st = iterate(cost, &result);
    if (st == LpStatus::kOptimal) compute_duals(cost, &result);
    return finish(st, &result);
  }

 private:
  double artificial_tol(int v) const {
    const int row = artificial_row_[v - first_artificial_];
    return 1e-7 * std::max(1.0, row_rhs_scale_[row]);
  }

  void compute_scaling() {
    row_scale_.assign(m_, 1.0);
    col_scale_.assign(n_, 1.0);
    if (!opt_.scale) return;
    // Geometric-mean equilibration, a few alternating passes.
    for (int pass = 0; pass < 6; ++pass) {
      std::vector<double> rmin(m_, kInfinity), rmax(m_, 0.0);
      for (const Triplet& t : lp_.entries) {
        const double a = std::abs(t.value) * col_scale_[t.col];
        if (a == 0.0) continue;
        rmin[t.row] = std::min(rmin[t.row], a);
        rmax[t.row] = std::max(rmax[t.row], a);
      }
      for (int i = 0; i < m_; ++i) {
        if (rmax[i] > 0.0) row_scale_[i] = 1.0 / std::sqrt(rmin[i] * rmax[i]);
      }
      std::vector<double> cmin(n_, kInfinity), cmax(n_, 0.0);
      for (const Triplet& t : lp_.entries) {
        const double a = std::abs(t.value) * row_scale_[t.row];
        if (a == 0.0) continue;
        cmin[t.col] = std::min(cmin[t.col], a);
        cmax[t.col] = std::max(cmax[t.col], a);
      }
      for (int j = 0; j < n_; ++j) {
        if (cmax[j] > 0.0) col_scale_[j] = 1.0 / std::sqrt(cmin[j] * cmax[j]);
      }
    }
    // Powers of two keep the scaling exact.
    for (double& s : row_scale_) s = std::exp2(std::round(std::log2(s)));
    for (double& s : col_scale_) s = std::exp2(std::round(std::log2(s)));
  }

  void build() {
    const double sign = lp_.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    cost_.assign(n_, 0.0);
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) {
      cost_[j] = sign * lp_.objective[j] * col_scale_[j];
      cmax = std::max(cmax, std::abs(cost_[j]));
    }
    cost_scale_ = cmax > 0.0 ? std::exp2(std::round(std::log2(cmax))) : 1.0;
    for (double& c : cost_) c /= cost_scale_;

    // Structural start values.
    std::vector<double> xs(n_, 0.0);
    std::vector<VarState> ss(n_, VarState::kFree);
    std::vector<double> lo(n_), hi(n_);
    for (int j = 0; j < n_; ++j) {
      lo[j] = lp_.lower[j] / col_scale_[j];
      hi[j] = lp_.upper[j] / col_scale_[j];
      if (lo[j] == hi[j]) {
        ss[j] = VarState::kFixed;
        xs[j] = lo[j];
      } else if (std::isfinite(lo[j])) {
        ss[j] = VarState::kAtLower;
        xs[j] = lo[j];
      } else if (std::isfinite(hi[j])) {
        ss[j] = VarState::kAtUpper;
        xs[j] = hi[j];
      }
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m_, n_);
    for (const Triplet& t : lp_.entries) {
      a(t.row, t.col) += t.value * row_scale_[t.row] * col_scale_[t.col];
    }
    Eigen::VectorXd xv = Eigen::Map<Eigen::VectorXd>(xs.data(), n_);
    const Eigen::VectorXd activity = a * xv;

    std::vector<double> rlo(m_), rhi(m_);
    row_rhs_scale_.assign(m_, 1.0);
    std::vector<int> violated;
    std::vector<double> violated_bound;
    for (int i = 0; i < m_; ++i) {
      const double b = lp_.rhs[i] * row_scale_[i];
      row_rhs_scale_[i] = std::abs(b);
      rlo[i] = lp_.row_sense[i] == RowSense::kLessEqual ? -kInfinity : b;
      rhi[i] = lp_.row_sense[i] == RowSense::kGreaterEqual ? kInfinity : b;
      const double tol = opt_.feasibility_tol * std::max(1.0, std::abs(b));
      if (activity[i] < rlo[i] - tol) {
        violated.push_back(i);
        violated_bound.push_back(rlo[i]);
      } else if (activity[i] > rhi[i] + tol) {
        violated.push_back(i);
        violated_bound.push_back(rhi[i]);
      }
    }

    num_artificials_ = static_cast<int>(violated.size());
    first_artificial_ = n_ + m_;
    num_vars_ = n_ + m_ + num_artificials_;
    A_ = Eigen::MatrixXd::Zero(m_, num_vars_);
    A_.leftCols(n_) = a;
    for (int i = 0; i < m_; ++i) A_(i, n_ + i) = -1.0;
    lo_.resize(num_vars_);
    hi_.resize(num_vars_);
    x_.resize(num_vars_);
    state_.assign(num_vars_, VarState::kBasic);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lo[j];
      hi_[j] = hi[j];
      x_[j] = xs[j];
      state_[j] = ss[j];
    }
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      const int v = n_ + i;
      lo_[v] = rlo[i];
      hi_[v] = rhi[i];
      x_[v] = activity[i];
      state_[v] = VarState::kBasic;
      basis_[i] = v;
    }
    artificial_row_.clear();
    for (int k = 0; k < num_artificials_; ++k) {
      const int i = violated[k];
      const int v = first_artificial_ + k;
      const int logical = n_ + i;
      const double bound = violated_bound[k];
      // Logical leaves the basis at the violated bound; the artificial
      // absorbs the gap with a nonnegative value.
      x_[logical] = bound;
      state_[logical] = lo_[logical] == hi_[logical] ? VarState::kFixed
                        : bound == lo_[logical]      ? VarState::kAtLower
                                                     : VarState::kAtUpper;
      const double gap = bound - activity[i];
      const double sigma = gap >= 0.0 ? 1.0 : -1.0;
      A_(i, v) = sigma;
      lo_[v] = 0.0;
      hi_[v] = kInfinity;
      x_[v] = std::abs(gap);
      state_[v] = VarState::kBasic;
      basis_[i] = v;
      artificial_row_.push_back(i);
    }
    refactor();
  }

  void refactor() {
    if (m_ == 0) {
      binv_.resize(0, 0);
      return;
    }
    Eigen::MatrixXd b(m_, m_);
    for (int i = 0; i < m_; ++i) b.col(i) = A_.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    binv_ = lu.inverse();
    since_refactor_ = 0;
  }

  void recompute_basics() {
    if (m_ == 0) return;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
    for (int j = 0; j < num_vars_; ++j) {
      if (state_[j] != VarState::kBasic && x_[j] != 0.0) w -= A_.col(j) * x_[j];
    }
    const Eigen::VectorXd xb = binv_ * w;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
  }

  double bound_tol(double bound) const {
    return opt_.feasibility_tol *
           std::max(1.0, std::isfinite(bound) ? std::abs(bound) : 1.0);
  }

  // Returns the entering candidate or -1. Sets *direction to +1 / -1.
  int price(const Eigen::VectorXd& d, bool bland, int* direction) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < num_vars_; ++j) {
      const VarState s = state_[j];
      if (s == VarState::kBasic || s == VarState::kFixed) continue;
      int dir = 0;
      if ((s == VarState::kAtLower || s == VarState::kFree) &&
          d[j] < -opt_.optimality_tol) {
        dir = 1;
      } else if ((s == VarState::kAtUpper || s == VarState::kFree) &&
                 d[j] > opt_.optimality_tol) {
        dir = -1;
      }
      if (dir == 0) continue;
      if (bland) {
        *direction = dir;
        return j;
      }
      const double score = std::abs(d[j]);
      if (score > best_score) {
        best_score = score;
        best = j;
        *direction = dir;
      }
    }
    return best;
  }

  LpStatus iterate(const Eigen::VectorXd& cost, LpResult* result) {
    int degenerate = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= opt_.iteration_limit) return LpStatus::kIterationLimit;
      if (since_refactor_ >= opt_.refactor_interval) {
        refactor();
        recompute_basics();
      }
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      const Eigen::VectorXd y = m_ > 0 ? Eigen::VectorXd(binv_.transpose() * cb)
                                       : Eigen::VectorXd();
      const Eigen::VectorXd d =
          m_ > 0 ? Eigen::VectorXd(cost - A_.transpose() * y) : cost;

      int dir = 0;
      const int q = price(d, bland, &dir);
      if (q < 0) {
        // Confirm on a fresh factorization before declaring optimality.
        if (since_refactor_ > 0) {
          refactor();
          recompute_basics();
          continue;
        }
        return LpStatus::kOptimal;
      }

      const Eigen::VectorXd alpha =
          m_ > 0 ? Eigen::VectorXd(binv_ * A_.col(q)) : Eigen::VectorXd();
      const double flip = hi_[q] - lo_[q];

      int r = -1;
      double theta = kInfinity;
      if (!bland) {
        // Harris two-pass ratio test.
        double relaxed = kInfinity;
        for (int i = 0; i < m_; ++i) {
          const double g = dir * alpha[i];
          if (std::abs(g) <= opt_.pivot_tol) continue;
          const int v = basis_[i];
          if (g > 0 && std::isfinite(lo_[v])) {
            relaxed = std::min(relaxed, (x_[v] - lo_[v] + bound_tol(lo_[v])) / g);
          } else if (g < 0 && std::isfinite(hi_[v])) {
            relaxed = std::min(relaxed, (hi_[v] - x_[v] + bound_tol(hi_[v])) / -g);
          }
        }
        double best = 0.0;
        for (int i = 0; i < m_; ++i) {
          const double g = dir * alpha[i];
          if (std::abs(g) <= opt_.pivot_tol) continue;
          const int v = basis_[i];
          double t = kInfinity;
          if (g > 0 && std::isfinite(lo_[v])) {
            t = std::max(0.0, (x_[v] - lo_[v]) / g);
          } else if (g < 0 && std::isfinite(hi_[v])) {
            t = std::max(0.0, (hi_[v] - x_[v]) / -g);
          }
          if (std::isfinite(t) && t <= relaxed && std::abs(g) > best) {
            best = std::abs(g);
            r = i;
            theta = t;
          }
        }
      } else {
        int best_var = -1;
        for (int i = 0; i < m_; ++i) {
          const double g = dir * alpha[i];
          if (std::abs(g) <= opt_.pivot_tol) continue;
          const int v = basis_[i];
          double t = kInfinity;
          if (g > 0 && std::isfinite(lo_[v])) {
            t = std::max(0.0, (x_[v] - lo_[v]) / g);
          } else if (g < 0 && std::isfinite(hi_[v])) {
            t = std::max(0.0, (hi_[v] - x_[v]) / -g);
          }
          if (!std::isfinite(t)) continue;
          if (r < 0) {
            theta = t;
            r = i;
            best_var = v;
            continue;
          }
          const double slack = 1e-12 * std::max(1.0, std::abs(theta));
          if (t < theta - slack || (t <= theta + slack && v < best_var)) {
            theta = t;
            r = i;
            best_var = v;
          }
        }
      }

      const bool do_flip = std::isfinite(flip) && flip <= theta;
      if (!do_flip && r < 0) {
        if (phase_ == 2) {
          result->ray.assign(n_, 0.0);
          if (q < n_) result->ray[q] = dir * col_scale_[q];
          for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_) {
              result->ray[basis_[i]] = -dir * alpha[i] * col_scale_[basis_[i]];
            }
          }
        }
        return LpStatus::kUnbounded;
      }
      const double step = do_flip ? flip : theta;

      const int leaving_var = do_flip ? q : basis_[r];
      ++iterations_;
      if (bland) ++result->bland_pivots;
      if (step <= 1e-12) {
        if (++degenerate >= opt_.degenerate_streak) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }

      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= step * dir * alpha[i];
      x_[q] += step * dir;

      if (do_flip) {
        if (dir > 0) {
          x_[q] = hi_[q];
          state_[q] = VarState::kAtUpper;
        } else {
          x_[q] = lo_[q];
          state_[q] = VarState::kAtLower;
        }
      } else {
        const int leaving = basis_[r];
        const double g = dir * alpha[r];
        if (g > 0) {
          x_[leaving] = lo_[leaving];
          state_[leaving] = VarState::kAtLower;
        } else {
          x_[leaving] = hi_[leaving];
          state_[leaving] = VarState::kAtUpper;
        }
        if (lo_[leaving] == hi_[leaving]) state_[leaving] = VarState::kFixed;
        if (phase_ == 1 && leaving >= first_artificial_) {
          hi_[leaving] = 0.0;
          x_[leaving] = 0.0;
          state_[leaving] = VarState::kFixed;
        }
        basis_[r] = q;
        state_[q] = VarState::kBasic;
        pivot(r, alpha);
      }

      if (opt_.trace) {
        double obj = 0.0;
        for (int j = 0; j < num_vars_; ++j) obj += cost[j] * x_[j];
        std::ostringstream line;
        line.precision(12);
        line << "solver=simplex phase=" << phase_ << " iter=" << iterations_
             << " obj=" << obj * (phase_ == 2 ? cost_scale_ : 1.0)
             << " enter=" << q << " leave=" << leaving_var
             << " step=" << step << " bland=" << (bland ? 1 : 0);
        opt_.trace(line.str());
      }
    }
  }

  void pivot(int r, const Eigen::VectorXd& alpha) {
    const double p = alpha[r];
    binv_.row(r) /= p;
    for (int i = 0; i < m_; ++i) {
      if (i != r && alpha[i] != 0.0) binv_.row(i) -= alpha[i] * binv_.row(r);
    }
    ++since_refactor_;
  }

  // Pivots basic artificials (all at zero) out where possible.
  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      const Eigen::RowVectorXd row = binv_.row(r);
      int best = -1;
      double best_mag = 1e-7;
      for (int j = 0; j < first_artificial_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        const double mag = std::abs(row.dot(A_.col(j)));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row; artificial stays at zero
      const Eigen::VectorXd alpha = binv_ * A_.col(best);
      const int leaving = basis_[r];
      x_[leaving] = 0.0;
      state_[leaving] = VarState::kFixed;
      basis_[r] = best;
      state_[best] = VarState::kBasic;
      pivot(r, alpha);
    }
    refactor();
    recompute_basics();
  }

  void compute_duals(const Eigen::VectorXd& cost, LpResult* result) const {
    const double sign = lp_.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    result->duals.assign(m_, 0.0);
    result->reduced_costs.assign(n_, 0.0);
    if (m_ > 0) {
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      const Eigen::VectorXd y = binv_.transpose() * cb;
      for (int i = 0; i < m_; ++i) {
        result->duals[i] = sign * y[i] * row_scale_[i] * cost_scale_;
      }
      for (int j = 0; j < n_; ++j) {
        result->reduced_costs[j] =
            sign * (cost[j] - A_.col(j).dot(y)) * cost_scale_ / col_scale_[j];
      }
    } else {
      for (int j = 0; j < n_; ++j) {
        result->reduced_costs[j] = sign * cost[j] * cost_scale_ / col_scale_[j];
      }
    }
  }

  LpResult finish(LpStatus status, LpResult* result) {
    result->status = status;
    result->iterations = iterations_;
    result->x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      double v = x_[j] * col_scale_[j];
      // Snap to bounds that were hit up to rounding.
      if (state_[j] == VarState::kAtLower || state_[j] == VarState::kFixed) {
        v = lp_.lower[j];
      } else if (state_[j] == VarState::kAtUpper) {
        v = lp_.upper[j];
      }
      result->x[j] = v;
    }
    result->objective = lp_.evaluate(result->x);
    return *result;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  int m_ = 0;
  int n_ = 0;
  int num_vars_ = 0;
  int num_artificials_ = 0;
  int first_artificial_ = 0;
  int phase_ = 1;
  int iterations_ = 0;
  int since_refactor_ = 0;
  std::vector<double> row_scale_, col_scale_, row_rhs_scale_, cost_;
  double cost_scale_ = 1.0;
  std::vector<int> artificial_row_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd lo_, hi_, x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
};

}  // namespace

LpResult solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  Simplex solver(lp, options);
  return solver.run();
}

}  // namespace wateralloc
