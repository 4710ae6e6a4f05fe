// Copyright 2026 The wdro Authors
//
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

#pragma once

#include <string>

#include "wdro/lp/simplex.hpp"
#include "wdro/model/instance.hpp"

namespace wdro {

/// Data-driven uncertainty set Omega = support ∩ inflated-sample-hull with
/// its escape-probability guarantee 1/Delta.
struct RefinedSet {
  BoxSet omega;
  BoxSet xi_a;        // sample hull inflated by epsilon * Delta per side
  BoxSet sample_box;  // entrywise sample min/max hull
  double delta = 0.0;
  double guarantee = 0.0;  // 1 / Delta
};

/// Worst-case probability of landing outside Omega: 1 / max{N, beta}.
inline double guarantee_level(int n_samples, double beta) {
  if (n_samples < 1)
    throw Error(ErrorCode::invalid_input, "need at least one sample");
  if (!(beta > 0.0))
    throw Error(ErrorCode::invalid_input, "beta must be positive");
  return 1.0 / std::max(static_cast<double>(n_samples), beta);
}

inline RefinedSet build_omega(const BoxSet& support, const SampleSet& samples,
                              double epsilon, double beta) {
  if (!(beta > 0.0))
    throw Error(ErrorCode::invalid_input, "beta must be positive");
  if (epsilon < 0.0)
    throw Error(ErrorCode::invalid_input, "epsilon must be nonnegative");
  if (samples.dim() != support.dim())
    throw Error(ErrorCode::dimension_mismatch,
                "samples and support disagree on dimension");
  const double delta = std::max(static_cast<double>(samples.size()), beta);
  BoxSet hull = samples.box_hull();
  const double pad = epsilon * delta;
  BoxSet xi_a(Vec(hull.lower().array() - pad), Vec(hull.upper().array() + pad));
  BoxSet omega = intersect_boxes(support, xi_a);
  return RefinedSet{std::move(omega), std::move(xi_a), std::move(hull), delta,
                    1.0 / delta};
}

/// Finite distribution as points with probability weights.
struct DiscreteDistribution {
  Mat points;   // one row per atom
  Vec weights;  // nonnegative, sums to one

  int size() const { return static_cast<int>(points.rows()); }
};

inline DiscreteDistribution empirical_distribution(const SampleSet& samples) {
  return DiscreteDistribution{
      samples.points(),
      Vec::Constant(samples.size(), 1.0 / samples.size())};
}

/// Exact 1-Wasserstein distance between two finite distributions via the
/// transportation LP with 1-norm ground costs.
inline double discrete_wasserstein(const DiscreteDistribution& p,
                                   const DiscreteDistribution& q,
                                   const SolverOptions& opts = {}) {
  if (p.points.cols() != q.points.cols())
    throw Error(ErrorCode::dimension_mismatch,
                "distributions live in different dimensions");
  if (std::abs(p.weights.sum() - 1.0) > 1e-9 ||
      std::abs(q.weights.sum() - 1.0) > 1e-9)
    throw Error(ErrorCode::invalid_input, "weights must sum to one");
  const int np = p.size(), nq = q.size();
  lp::LinearProgramSpec spec;
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nq; ++j) {
      const double d =
          (p.points.row(i) - q.points.row(j)).cwiseAbs().sum();
      spec.add_variable(0.0, kInf, d);
    }
  }
  for (int i = 0; i < np; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < nq; ++j) terms.emplace_back(i * nq + j, 1.0);
    spec.add_row(std::move(terms), lp::RowSense::eq, p.weights(i));
  }
  for (int j = 0; j < nq; ++j) {
    std::vector<std::pair<int, double>> terms;
    for (int i = 0; i < np; ++i) terms.emplace_back(i * nq + j, 1.0);
    spec.add_row(std::move(terms), lp::RowSense::eq, q.weights(j));
  }
  const auto res = lp::solve_lp(spec, opts);
  if (res.status != lp::Status::optimal)
    throw Error(ErrorCode::numerical, "transportation LP failed to solve");
  return res.objective;
}

/// Transport witness for the escape guarantee: mass 1/Delta of the extreme
/// sample moved along one coordinate onto the inflated-hull boundary.
struct EscapeWitness {
  bool tight = false;  // precondition held and the witness was built
  DiscreteDistribution distribution;
  double escape_mass = 0.0;    // transported mass reaching the boundary
  double transport_cost = 0.0; // 1-Wasserstein distance to the empirical
  int coordinate = -1;
  int direction = 0;  // +1 toward upper, -1 toward lower
  int sample_index = -1;
  std::string note;
};

/// Builds the escape witness when the support extends strictly beyond the
/// inflated hull in some coordinate direction; otherwise reports that the
/// bound is not tight on this data. Ties break to the smallest coordinate
/// (up before down), then the smallest sample index.
inline EscapeWitness escape_witness(const BoxSet& support,
                                    const SampleSet& samples, double epsilon,
                                    double beta) {
  const RefinedSet ref = build_omega(support, samples, epsilon, beta);
  const double delta = ref.delta;
  const int m = support.dim();
  const int n = samples.size();

  int coord = -1, dir = 0;
  for (int j = 0; j < m && coord < 0; ++j) {
    if (support.upper()(j) > ref.xi_a.upper()(j)) {
      coord = j;
      dir = +1;
    } else if (support.lower()(j) < ref.xi_a.lower()(j)) {
      coord = j;
      dir = -1;
    }
  }

  EscapeWitness w;
  if (coord < 0) {
    w.tight = false;
    w.distribution = empirical_distribution(samples);
    w.note = "support does not extend beyond the inflated hull; "
             "the escape bound is not tight here";
    return w;
  }
  w.tight = true;
  w.coordinate = coord;
  w.direction = dir;

  // Sample already closest to the boundary in the chosen direction.
  int best = 0;
  for (int i = 1; i < n; ++i) {
    const double v = samples.points()(i, coord);
    const double b = samples.points()(best, coord);
    if (dir > 0 ? v > b : v < b) best = i;
  }
  w.sample_index = best;

  const double move = epsilon * delta;
  if (move == 0.0) {
    w.distribution = empirical_distribution(samples);
    w.escape_mass = 0.0;
    w.transport_cost = 0.0;
    w.note = "zero radius: the witness is the empirical distribution";
    return w;
  }

  Vec target = samples.point(best);
  target(coord) = dir > 0 ? ref.xi_a.upper()(coord) : ref.xi_a.lower()(coord);

  const double moved = 1.0 / delta;
  const double keep = 1.0 / n - moved;
  const int rows = n + (keep > 0.0 ? 1 : 0);
  Mat pts(rows, m);
  Vec wts(rows);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    if (i == best && keep <= 0.0) continue;
    pts.row(r) = samples.points().row(i);
    wts(r) = i == best ? keep : 1.0 / n;
    ++r;
  }
  pts.row(r) = target.transpose();
  wts(r) = moved;
  w.distribution = DiscreteDistribution{std::move(pts), std::move(wts)};
  w.escape_mass = moved;
  w.transport_cost = moved * move;
  return w;
}

}  // namespace wdro
