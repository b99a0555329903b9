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

#include "wateralloc/branch_and_bound.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace wateralloc {

std::string_view milp_status_name(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal:
      return "optimal";
    case MilpStatus::kInfeasible:
      return "infeasible";
    case MilpStatus::kUnbounded:
      return "unbounded";
    case MilpStatus::kNodeLimit:
      return "node-limit";
  }
  return "?";
}

double MilpResult::gap() const {
  if (!has_solution()) return kInfinity;
  return std::abs(objective - bound) / std::max(1.0, std::abs(objective));
}

namespace {

constexpr double kCandidateTol = 1e-7;

struct Node {
  int id = 0;
  int depth = 0;
  double bound = 0.0;  // minimize sense
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const LinearProgram& lp, const MilpOptions& options)
      : lp_(lp), opt_(options), work_(lp) {
    sign_ = lp.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
    for (int j = 0; j < lp.num_cols(); ++j) {
      if (j < static_cast<int>(lp.integer.size()) && lp.integer[j]) {
        int_cols_.push_back(j);
      }
    }
  }

  MilpResult run() {
    MilpResult result;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    Node root;
    root.bound = -kInfinity;
    for (int j : int_cols_) {
      root.lower.push_back(std::ceil(lp_.lower[j] - opt_.integrality_tol));
      root.upper.push_back(std::floor(lp_.upper[j] + opt_.integrality_tol));
    }
    open.push(root);
    int next_id = 1;
    bool node_limit_hit = false;

    while (!open.empty()) {
      Node node = open.top();
      if (has_incumbent_ && node.bound >= incumbent_ - gap_tol()) break;
      if (result.nodes >= opt_.node_limit) {
        node_limit_hit = true;
        break;
      }
      open.pop();
      ++result.nodes;

      for (size_t k = 0; k < int_cols_.size(); ++k) {
        work_.lower[int_cols_[k]] = node.lower[k];
        work_.upper[int_cols_[k]] = node.upper[k];
      }
      LpResult relax = solve_simplex(work_, opt_.lp);
      result.lp_iterations += relax.iterations;
      if (relax.status == LpStatus::kUnbounded) {
        if (node.id == 0) {
          result.status = MilpStatus::kUnbounded;
          return result;
        }
        continue;
      }
      if (relax.status != LpStatus::kOptimal) {
        if (opt_.trace) {
          opt_.trace("solver=branch-bound node=" + std::to_string(node.id) +
                     " depth=" + std::to_string(node.depth) + " status=" +
                     std::string(lp_status_name(relax.status)));
        }
        continue;
      }
      const double value = sign_ * relax.objective;

      double global = open.empty() ? value : std::min(value, open.top().bound);
      if (has_incumbent_) global = std::min(global, incumbent_);
      log_node(node, value, global, &result);

      if (has_incumbent_ && value >= incumbent_ - gap_tol()) continue;

      int branch_col = -1;
      double best_frac = -1.0;
      for (size_t k = 0; k < int_cols_.size(); ++k) {
        const double v = relax.x[int_cols_[k]];
        const double frac = v - std::floor(v);
        const double dist = std::min(frac, 1.0 - frac);
        if (dist > opt_.integrality_tol && dist > best_frac) {
          best_frac = dist;
          branch_col = static_cast<int>(k);
        }
      }
      if (branch_col < 0) {
        std::vector<double> x = relax.x;
        for (int j : int_cols_) x[j] = std::round(x[j]);
        // Snapping can push a big-M row just past the candidate tolerance;
        // re-solve with the integers fixed before giving up on the node.
        if (!offer(x) && !rounding_heuristic(relax.x, node, &result) &&
            opt_.heuristic) {
          if (auto candidate = opt_.heuristic(relax.x)) offer(*candidate);
        }
        continue;
      }

      if (node.id == 0 || result.nodes % 8 == 0) {
        rounding_heuristic(relax.x, node, &result);
      }
      if (opt_.heuristic) {
        if (auto candidate = opt_.heuristic(relax.x)) offer(*candidate);
      }

      const int j = int_cols_[branch_col];
      const double v = relax.x[j];
      Node down = node;
      down.id = next_id++;
      down.depth = node.depth + 1;
      down.bound = value;
      down.upper[branch_col] = std::floor(v);
      Node up = node;
      up.id = next_id++;
      up.depth = node.depth + 1;
      up.bound = value;
      up.lower[branch_col] = std::ceil(v);
      if (down.lower[branch_col] <= down.upper[branch_col]) open.push(down);
      if (up.lower[branch_col] <= up.upper[branch_col]) open.push(up);
    }

    if (!has_incumbent_) {
      result.status =
          node_limit_hit ? MilpStatus::kNodeLimit : MilpStatus::kInfeasible;
      result.bound = open.empty() ? sign_ * kInfinity : sign_ * open.top().bound;
      return result;
    }
    const double best_open = open.empty() ? incumbent_ : open.top().bound;
    const double bound = std::min(best_open, incumbent_);
    result.x = incumbent_x_;
    result.objective = lp_.evaluate(incumbent_x_);
    result.bound = sign_ * bound;
    const bool closed = incumbent_ - bound <= gap_tol();
    result.status = closed ? MilpStatus::kOptimal : MilpStatus::kNodeLimit;
    if (opt_.trace) {
      std::ostringstream line;
      line.precision(15);
      line << "solver=branch-bound event=done nodes=" << result.nodes
           << " incumbent=" << result.objective << " bound=" << result.bound
           << " status=" << milp_status_name(result.status);
      opt_.trace(line.str());
    }
    return result;
  }

 private:
  double gap_tol() const {
    return std::max(opt_.relative_gap * std::max(1.0, std::abs(incumbent_)),
                    opt_.absolute_gap);
  }

  void log_node(const Node& node, double value, double global,
                MilpResult* result) {
    ProofLogEntry e;
    e.node = node.id;
    e.depth = node.depth;
    e.node_bound = sign_ * value;
    e.global_bound = sign_ * global;
    e.has_incumbent = has_incumbent_;
    e.incumbent = has_incumbent_ ? sign_ * incumbent_ : sign_ * kInfinity;
    result->log.push_back(e);
    if (opt_.trace) {
      std::ostringstream line;
      line.precision(15);
      line << "solver=branch-bound node=" << e.node << " depth=" << e.depth
           << " node_bound=" << e.node_bound
           << " global_bound=" << e.global_bound
           << " incumbent=" << (e.has_incumbent ? e.incumbent : NAN);
      opt_.trace(line.str());
    }
  }

  bool offer(const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != lp_.num_cols()) return false;
    for (int j : int_cols_) {
      if (std::abs(x[j] - std::round(x[j])) > opt_.integrality_tol) return false;
    }
    if (lp_.max_violation(x) > kCandidateTol) return false;
    const double value = sign_ * lp_.evaluate(x);
    if (!has_incumbent_ || value < incumbent_) {
      has_incumbent_ = true;
      incumbent_ = value;
      incumbent_x_ = x;
      return true;
    }
    return false;
  }

  // Fixes every integer column to its rounded relaxation value and solves
  // for the continuous part.
  bool rounding_heuristic(const std::vector<double>& relaxed, const Node& node,
                          MilpResult* result) {
    LinearProgram fixed = work_;
    for (size_t k = 0; k < int_cols_.size(); ++k) {
      const int j = int_cols_[k];
      const double v =
          std::clamp(std::round(relaxed[j]), node.lower[k], node.upper[k]);
      fixed.lower[j] = v;
      fixed.upper[j] = v;
    }
    LpResult r = solve_simplex(fixed, opt_.lp);
    result->lp_iterations += r.iterations;
    return r.status == LpStatus::kOptimal && offer(r.x);
  }

  const LinearProgram& lp_;
  MilpOptions opt_;
  LinearProgram work_;
  double sign_ = 1.0;
  std::vector<int> int_cols_;
  bool has_incumbent_ = false;
  double incumbent_ = kInfinity;
  std::vector<double> incumbent_x_;
};

}  // namespace

MilpResult solve_branch_and_bound(const LinearProgram& lp,
                                  const MilpOptions& options) {
  BranchAndBound bb(lp, options);
  return bb.run();
}

}  // namespace wateralloc
