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

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "wdro/lp/simplex.hpp"
#include "wdro/model/instance.hpp"

namespace wdro {

/// Worst-case expected affine cost over the 1-Wasserstein ball: the optimal
/// aggregated perturbation (q+, q-) around the sample mean.
struct WorstCaseSolution {
  double value = 0.0;
  Vec q_plus;
  Vec q_minus;
};

/// Feasible dual multipliers (mu0, mu+, mu-) certifying the worst-case
/// value from above.
struct DualCertificate {
  double mu0 = 0.0;
  Vec mu_plus;
  Vec mu_minus;

  Vec as_vector() const {
    Vec v(1 + mu_plus.size() + mu_minus.size());
    v << mu0, mu_plus, mu_minus;
    return v;
  }
};

namespace detail {

inline void check_mean_in_box(const BoxSet& box, const Vec& mean) {
  if (mean.size() != box.dim())
    throw Error(ErrorCode::dimension_mismatch,
                "mean dimension does not match the box");
  if (!box.contains(mean, 1e-9))
    throw Error(ErrorCode::invalid_input,
                "center lies outside the uncertainty box; the ball contains "
                "no distribution on this support");
}

// Nonnegative slacks up/down from a point to the box faces, with rounding
// dust clipped away.
inline std::pair<Vec, Vec> point_slacks(const BoxSet& box, const Vec& point) {
  Vec up = box.upper() - point;
  Vec down = point - box.lower();
  for (int j = 0; j < box.dim(); ++j) {
    up(j) = std::max(up(j), 0.0);
    down(j) = std::max(down(j), 0.0);
  }
  return {up, down};
}

}  // namespace detail

/// Dual cost vector (epsilon, upper - mean, mean - lower); all entries are
/// nonnegative whenever the mean lies in the box.
inline Vec c3_vector(double epsilon, const BoxSet& ball_box,
                     const Vec& xi_mean) {
  detail::check_mean_in_box(ball_box, xi_mean);
  const auto [up, down] = detail::point_slacks(ball_box, xi_mean);
  Vec c3(1 + 2 * ball_box.dim());
  c3 << epsilon, up, down;
  return c3;
}

/// Independent oracle for the worst-case increment: a fractional knapsack.
/// Each coordinate gains |direction_j| per unit of budget, capped by the
/// slack on the side the sign selects; the budget epsilon is spent on
/// coordinates in descending |direction_j| (ties to the lowest index).
inline double worst_case_greedy(const Vec& direction, const Vec& slack_up,
                                const Vec& slack_down, double epsilon) {
  const int m = static_cast<int>(direction.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(direction(a)) > std::abs(direction(b));
  });
  double remaining = epsilon;
  double gain = 0.0;
  for (int j : order) {
    if (remaining <= 0.0) break;
    const double d = direction(j);
    if (d == 0.0) continue;  // zero-direction coordinates get no budget
    const double cap = d > 0.0 ? slack_up(j) : slack_down(j);
    const double take = std::min(cap, remaining);
    if (take <= 0.0) continue;
    gain += take * std::abs(d);
    remaining -= take;
  }
  return gain;
}

/// Worst-case expectation as the aggregated LP: maximize
/// c2'{A(mean + q+ - q-) + a} over q+, q- >= 0 subject to the shared
/// budget 1'(q+ + q-) <= epsilon and the per-coordinate caps
/// q+ <= upper - mean, q- <= mean - lower. Scale is independent of the
/// sample count.
inline WorstCaseSolution worst_case_lp(const Vec& c2, const AffinePolicy& policy,
                                       const BoxSet& ball_box,
                                       const Vec& xi_mean, double epsilon,
                                       const SolverOptions& opts = {}) {
  if (epsilon < 0.0)
    throw Error(ErrorCode::invalid_input, "epsilon must be nonnegative");
  detail::check_mean_in_box(ball_box, xi_mean);
  const int m = ball_box.dim();
  const Vec t = policy.A.transpose() * c2;
  const auto [up, down] = detail::point_slacks(ball_box, xi_mean);

  lp::LinearProgramSpec spec;
  spec.sense = lp::Sense::maximize;
  std::vector<std::pair<int, double>> budget;
  budget.reserve(2 * m);
  for (int j = 0; j < m; ++j)
    budget.emplace_back(spec.add_variable(0.0, up(j), t(j)), 1.0);
  for (int j = 0; j < m; ++j)
    budget.emplace_back(spec.add_variable(0.0, down(j), -t(j)), 1.0);
  spec.add_row(std::move(budget), lp::RowSense::le, epsilon);

  const auto res = lp::solve_lp(spec, opts);
  if (res.status != lp::Status::optimal)
    throw Error(ErrorCode::numerical, "worst-case LP did not solve to optimality");
  WorstCaseSolution out;
  out.q_plus = res.primal.head(m);
  out.q_minus = res.primal.tail(m);
  out.value = c2.dot(policy.A * xi_mean + policy.a) + res.objective;
  return out;
}

/// The sample-indexed formulation: one perturbation pair per sample with
/// its own caps and the averaged budget. Grows with N; used as the
/// equivalence oracle for worst_case_lp, never on the solve path.
inline double samplewise_worst_case(const Vec& c2, const AffinePolicy& policy,
                                    const BoxSet& ball_box,
                                    const SampleSet& samples, double epsilon,
                                    const SolverOptions& opts = {}) {
  if (epsilon < 0.0)
    throw Error(ErrorCode::invalid_input, "epsilon must be nonnegative");
  const int m = ball_box.dim();
  const int n = samples.size();
  const Vec t = policy.A.transpose() * c2;
  const double w = 1.0 / n;

  lp::LinearProgramSpec spec;
  spec.sense = lp::Sense::maximize;
  std::vector<std::pair<int, double>> budget;
  double base = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec xi = samples.point(i);
    if (!ball_box.contains(xi, 1e-9))
      throw Error(ErrorCode::invalid_input,
                  "sample " + std::to_string(i) + " lies outside the box");
    base += w * c2.dot(policy.A * xi + policy.a);
    const auto [up, down] = detail::point_slacks(ball_box, xi);
    for (int j = 0; j < m; ++j)
      budget.emplace_back(spec.add_variable(0.0, up(j), w * t(j)), w);
    for (int j = 0; j < m; ++j)
      budget.emplace_back(spec.add_variable(0.0, down(j), -w * t(j)), w);
  }
  spec.add_row(std::move(budget), lp::RowSense::le, epsilon);

  const auto res = lp::solve_lp(spec, opts);
  if (res.status != lp::Status::optimal)
    throw Error(ErrorCode::numerical,
                "sample-indexed worst-case LP did not solve to optimality");
  return base + res.objective;
}

/// Dual route: minimize c3'mu over the dual feasible set
///   mu0 + mu+_j >= (A'c2)_j,  mu0 + mu-_j >= -(A'c2)_j,  mu >= 0,
/// then add back the nominal cost. Equals worst_case_lp by LP duality.
inline std::pair<double, DualCertificate> dual_value(
    const Vec& c2, const AffinePolicy& policy, const BoxSet& ball_box,
    const Vec& xi_mean, double epsilon, const SolverOptions& opts = {}) {
  const int m = ball_box.dim();
  const Vec t = policy.A.transpose() * c2;
  const Vec c3 = c3_vector(epsilon, ball_box, xi_mean);

  lp::LinearProgramSpec spec;
  const int mu0 = spec.add_variable(0.0, kInf, c3(0));
  std::vector<int> mu_plus(m), mu_minus(m);
  for (int j = 0; j < m; ++j)
    mu_plus[j] = spec.add_variable(0.0, kInf, c3(1 + j));
  for (int j = 0; j < m; ++j)
    mu_minus[j] = spec.add_variable(0.0, kInf, c3(1 + m + j));
  for (int j = 0; j < m; ++j)
    spec.add_row({{mu0, 1.0}, {mu_plus[j], 1.0}}, lp::RowSense::ge, t(j));
  for (int j = 0; j < m; ++j)
    spec.add_row({{mu0, 1.0}, {mu_minus[j], 1.0}}, lp::RowSense::ge, -t(j));

  const auto res = lp::solve_lp(spec, opts);
  if (res.status != lp::Status::optimal)
    throw Error(ErrorCode::numerical, "dual LP did not solve to optimality");
  DualCertificate cert;
  cert.mu0 = res.primal(0);
  cert.mu_plus = res.primal.segment(1, m);
  cert.mu_minus = res.primal.segment(1 + m, m);
  const double value = c2.dot(policy.A * xi_mean + policy.a) + res.objective;
  return {value, cert};
}

}  // namespace wdro
