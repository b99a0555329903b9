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

#include "wateralloc/pareto.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "wateralloc/errors.h"

namespace wateralloc {

std::string_view source_label(PointSource source) {
  switch (source) {
    case PointSource::kSub1:
      return "sub1";
    case PointSource::kSub2:
      return "sub2";
    case PointSource::kAnchorF1:
      return "anchor-f1";
    case PointSource::kAnchorF2:
      return "anchor-f2";
  }
  return "?";
}

PointSource parse_source(std::string_view label) {
  if (label == "sub1") return PointSource::kSub1;
  if (label == "sub2") return PointSource::kSub2;
  if (label == "anchor-f1") return PointSource::kAnchorF1;
  if (label == "anchor-f2") return PointSource::kAnchorF2;
  throw InvalidArgument("unknown point provenance '" + std::string(label) + "'");
}

namespace {

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

ParetoPoint point_from(const SolveReport& r, PointSource source,
                       const WeightPair& w, int index) {
  ParetoPoint p;
  p.nb = r.certificate.nb;
  p.efd = r.certificate.efd;
  p.decision = r.decision;
  p.weight = w;
  p.provenance = source;
  p.weight_index = index;
  return p;
}

bool certified(const SolveReport& r) {
  return r.status == SolveStatus::kOptimal && r.certificate.passed;
}

}  // namespace

AnchorPair anchors(const Scenario& s, YearType year,
                   const SolveOptions& options) {
  AnchorPair out;
  SolveOptions o1 = options;
  out.f1_report = solve_problem(build_problem(s, year, ProblemKind::kModel1), o1);
  SolveOptions o2 = options;
  o2.lowering.model2_tie_break = Model2TieBreak::kMaxBenefit;
  out.f2_report = solve_problem(build_problem(s, year, ProblemKind::kModel2), o2);
  for (const SolveReport* r : {&out.f1_report, &out.f2_report}) {
    if (!certified(*r)) {
      throw SolverError(std::string(kind_label(r->kind)) + " anchor solve " +
                        std::string(solve_status_name(r->status)) +
                        (r->message.empty() ? "" : ": " + r->message));
    }
  }
  out.f1 = point_from(out.f1_report, PointSource::kAnchorF1, {1.0, 0.0}, -2);
  out.f2 = point_from(out.f2_report, PointSource::kAnchorF2, {0.0, 1.0}, -1);
  return out;
}

std::vector<WeightPair> generate_weights(int n, std::uint64_t seed,
                                         bool jitter) {
  if (n < 2) throw InvalidArgument("need at least 2 weights");
  std::mt19937_64 rng(seed);
  const double step = 1.0 / (n + 1);
  std::vector<WeightPair> out;
  for (int k = 1; k <= n; ++k) {
    double w1 = k * step;
    if (jitter) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      w1 += (2.0 * u - 1.0) * step / 4.0;
      w1 = std::clamp(w1, step / 4.0, 1.0 - step / 4.0);
    }
    out.push_back({w1, 1.0 - w1});
  }
  return out;
}

bool decisions_coincide(const DecisionVector& a, const DecisionVector& b,
                        double tol) {
  if (a.areas.size() != b.areas.size()) return false;
  for (size_t c = 0; c < a.areas.size(); ++c) {
    if (rel_diff(a.areas[c], b.areas[c]) > tol) return false;
  }
  for (int m = 0; m < kMonths; ++m) {
    if (rel_diff(a.env_flow[m], b.env_flow[m]) > tol) return false;
  }
  return true;
}

bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.nb >= b.nb && a.efd <= b.efd && (a.nb > b.nb || a.efd < b.efd);
}

WeightPairOutcome solve_weight_pair(const Scenario& s, YearType year,
                                    const WeightPair& w,
                                    const Normalization& normalization,
                                    int weight_index,
                                    const SolveOptions& options) {
  WeightPairOutcome out;
  out.sub1 = solve_problem(
      build_problem(s, year, ProblemKind::kSub1, w, normalization), options);
  out.sub2 = solve_problem(
      build_problem(s, year, ProblemKind::kSub2, w, normalization), options);
  const bool ok1 = certified(out.sub1);
  const bool ok2 = certified(out.sub2);
  for (const SolveReport* r : {&out.sub1, &out.sub2}) {
    if (!certified(*r)) {
      out.diagnostics.push_back(
          std::string(kind_label(r->kind)) + " at w1=" + std::to_string(w.w1) +
          ": " + std::string(solve_status_name(r->status)) +
          (r->message.empty() ? "" : " (" + r->message + ")"));
    }
  }
  if (ok1 && ok2) {
    ParetoPoint p1 = point_from(out.sub1, PointSource::kSub1, w, weight_index);
    ParetoPoint p2 = point_from(out.sub2, PointSource::kSub2, w, weight_index);
    if (decisions_coincide(p1.decision, p2.decision)) {
      out.points.push_back(std::move(p1));
    } else if (dominates(p1, p2)) {
      out.points.push_back(std::move(p1));
    } else if (dominates(p2, p1)) {
      out.points.push_back(std::move(p2));
    } else {
      out.points.push_back(std::move(p1));
      out.points.push_back(std::move(p2));
    }
  } else if (ok1) {
    out.points.push_back(point_from(out.sub1, PointSource::kSub1, w, weight_index));
  } else if (ok2) {
    out.points.push_back(point_from(out.sub2, PointSource::kSub2, w, weight_index));
  }
  return out;
}

ParetoFront assemble_front(std::vector<ParetoPoint> candidates,
                           const std::string& scenario, YearType year,
                           std::uint64_t seed) {
  ParetoFront front;
  front.scenario = scenario;
  front.year = year;
  front.seed = seed;
  // Canonical order first, so the merge keeps the lowest weight index.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) {
                     return a.weight_index < b.weight_index;
                   });
  std::vector<ParetoPoint> unique;
  for (ParetoPoint& p : candidates) {
    const bool seen = std::any_of(
        unique.begin(), unique.end(), [&](const ParetoPoint& q) {
          return rel_diff(p.nb, q.nb) <= kMergeTol &&
                 rel_diff(p.efd, q.efd) <= kMergeTol;
        });
    if (!seen) unique.push_back(std::move(p));
  }
  for (size_t i = 0; i < unique.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < unique.size() && !dominated; ++j) {
      dominated = j != i && dominates(unique[j], unique[i]);
    }
    if (!dominated) front.points.push_back(unique[i]);
  }
  std::stable_sort(front.points.begin(), front.points.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) {
                     if (a.nb != b.nb) return a.nb < b.nb;
                     return a.weight_index < b.weight_index;
                   });
  return front;
}

FrontRun trace_front(const Scenario& s, YearType year,
                     const ParetoOptions& options) {
  FrontRun run;
  run.anchors = anchors(s, year, options.solve);
  const AnchorPair& a = run.anchors;
  run.normalization = options.anchor_normalization
                          ? Normalization::from_anchors(a.f1.nb, a.f1.efd,
                                                        a.f2.nb, a.f2.efd)
                          : Normalization::fixed();
  run.weights = generate_weights(options.n_weights, options.seed, options.jitter);
  std::vector<ParetoPoint> candidates = {a.f1, a.f2};
  for (size_t k = 0; k < run.weights.size(); ++k) {
    WeightPairOutcome o = solve_weight_pair(s, year, run.weights[k],
                                            run.normalization,
                                            static_cast<int>(k), options.solve);
    for (ParetoPoint& p : o.points) candidates.push_back(std::move(p));
    for (std::string& d : o.diagnostics) run.diagnostics.push_back(std::move(d));
  }
  run.front = assemble_front(std::move(candidates), s.name, year, options.seed);
  return run;
}

}  // namespace wateralloc
