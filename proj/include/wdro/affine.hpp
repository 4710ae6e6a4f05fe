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

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wdro/lp/branch_bound.hpp"
#include "wdro/refine.hpp"
#include "wdro/worstcase.hpp"

namespace wdro {

using VertexPattern = std::vector<std::uint8_t>;  // 1 = upper bound

inline VertexPattern all_lower_pattern(int m) { return VertexPattern(m, 0); }

inline Vec pattern_point(const BoxSet& box, const VertexPattern& pattern) {
  Vec v = box.lower();
  for (int j = 0; j < box.dim(); ++j)
    if (pattern[j]) v(j) = box.upper()(j);
  return v;
}

/// Accumulated cutting-plane state: per-row vertex sets over the ball box,
/// feasibility vertices of the support (refined mode), and the iterate
/// history.
struct IterationRecord {
  int iteration = 0;
  double master_objective = 0.0;
  // max normalized row violation; unset on iterations that only added a
  // feasibility cut (the row subproblems are skipped there by design).
  std::optional<double> max_row_violation;
  std::optional<double> feasibility_violation;
  int master_vars = 0;
  int master_rows = 0;
  int added_row_cuts = 0;
  bool added_feasibility_cut = false;
};

struct MasterState {
  std::vector<std::vector<VertexPattern>> row_vertices;  // per recourse row
  std::vector<std::set<VertexPattern>> row_seen;
  std::vector<VertexPattern> feasibility_vertices;  // ordered, refined mode
  std::set<VertexPattern> feasibility_seen;
  int iteration = 0;
  std::vector<IterationRecord> history;

  static MasterState initial(int rows, int m, bool refined) {
    MasterState st;
    st.row_vertices.assign(rows, {all_lower_pattern(m)});
    st.row_seen.assign(rows, {});
    for (int l = 0; l < rows; ++l)
      st.row_seen[l].insert(all_lower_pattern(m));
    if (refined) {
      st.feasibility_vertices.push_back(all_lower_pattern(m));
      st.feasibility_seen.insert(all_lower_pattern(m));
    }
    return st;
  }
};

/// Per-row normalization factors: the max-abs coefficient over
/// (A1, A2, A3), or 1 for an all-zero row. The feasibility tolerance rho is
/// stated in units of b after this scaling.
inline Vec recourse_row_scales(const RecourseData& rec) {
  Vec s(rec.rows());
  for (int l = 0; l < rec.rows(); ++l) {
    double mx = 0.0;
    mx = std::max(mx, rec.A1.row(l).cwiseAbs().maxCoeff());
    mx = std::max(mx, rec.A2.row(l).cwiseAbs().maxCoeff());
    mx = std::max(mx, rec.A3.row(l).cwiseAbs().maxCoeff());
    s(l) = mx > 0.0 ? mx : 1.0;
  }
  return s;
}

/// Copy of the instance with every recourse row scaled to max-abs
/// coefficient 1. The feasible sets are unchanged.
inline Instance normalize_recourse(Instance inst) {
  const Vec s = recourse_row_scales(inst.recourse);
  for (int l = 0; l < inst.L(); ++l) {
    inst.recourse.A1.row(l) /= s(l);
    inst.recourse.A2.row(l) /= s(l);
    inst.recourse.A3.row(l) /= s(l);
    inst.recourse.b(l) /= s(l);
  }
  return inst;
}

struct MasterLayout {
  int x1_offset = 0;
  int theta_offset = 0;
  int mu_offset = 0;
  std::vector<int> xf_offsets;
  int vars = 0;
  int rows = 0;
};

/// Master problem: minimize c1'x1 + c2'(A(theta) mean + a(theta)) + c3'mu
/// over the first-stage set, the dual feasible set (linear in theta), the
/// accumulated per-row vertex cuts, and - in refined mode - one recourse
/// block per accumulated feasibility vertex of the support.
inline lp::LinearProgramSpec build_master(const Instance& inst,
                                          const PolicyStructure& structure,
                                          const MasterState& state,
                                          const BoxSet& ball_box, bool refined,
                                          MasterLayout* layout_out = nullptr,
                                          double trust_cap = 1e8) {
  inst.validate();
  const int n1 = inst.n1(), n2 = inst.n2(), m = inst.m(), L = inst.L();
  if (structure.n2() != n2 || structure.m() != m)
    throw Error(ErrorCode::dimension_mismatch,
                "policy structure does not match the instance dimensions");
  if (static_cast<int>(state.row_vertices.size()) != L)
    throw Error(ErrorCode::dimension_mismatch,
                "master state rows do not match the recourse rows");
  const int p = structure.parameter_count();
  const Vec mean = sample_mean(inst.samples);
  const Vec c3 = c3_vector(inst.epsilon, ball_box, mean);

  lp::LinearProgramSpec spec;
  MasterLayout layout;
  layout.x1_offset = 0;
  for (int j = 0; j < n1; ++j) {
    const bool binary = j < inst.first_stage.n_binary;
    spec.add_variable(binary ? 0.0 : -kInf, binary ? 1.0 : kInf, inst.c1(j),
                      binary);
  }
  layout.theta_offset = spec.num_vars();

  // Objective coefficients of theta: c2'(A(theta) mean + a(theta)).
  Vec theta_obj = Vec::Zero(p);
  for (int k = 0; k < n2; ++k) {
    for (int j = 0; j <= m; ++j) {
      const auto& terms = structure.entry_terms(PolicyStructure::entry_of(k, j, m));
      if (terms.empty()) continue;
      const double factor = inst.c2(k) * (j < m ? mean(j) : 1.0);
      for (const auto& [param, coeff] : terms)
        theta_obj(param) += factor * coeff;
    }
  }
  // Early relaxations can be unbounded in theta (too few vertex cuts);
  // a wide trust box keeps every master solvable and is re-checked at
  // termination, growing if it ever binds.
  for (int t = 0; t < p; ++t)
    spec.add_variable(-trust_cap, trust_cap, theta_obj(t));

  layout.mu_offset = spec.num_vars();
  const double mu_cap = 10.0 * trust_cap * (1.0 + inst.c2.cwiseAbs().sum());
  for (int i = 0; i < 2 * m + 1; ++i) spec.add_variable(0.0, mu_cap, c3(i));

  // First-stage inequalities.
  for (int r = 0; r < inst.first_stage.G.rows(); ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n1; ++j)
      if (inst.first_stage.G(r, j) != 0.0)
        terms.emplace_back(j, inst.first_stage.G(r, j));
    spec.add_row(std::move(terms), lp::RowSense::le, inst.first_stage.g(r));
  }

  // Dual feasibility rows, linear in theta through the structure map.
  for (int j = 0; j < m; ++j) {
    Vec w = Vec::Zero(p);
    for (int k = 0; k < n2; ++k) {
      for (const auto& [param, coeff] :
           structure.entry_terms(PolicyStructure::entry_of(k, j, m)))
        w(param) += inst.c2(k) * coeff;
    }
    for (int side = 0; side < 2; ++side) {
      std::vector<std::pair<int, double>> terms;
      terms.emplace_back(layout.mu_offset, 1.0);
      terms.emplace_back(layout.mu_offset + 1 + side * m + j, 1.0);
      const double sign = side == 0 ? -1.0 : 1.0;
      for (int t = 0; t < p; ++t)
        if (w(t) != 0.0) terms.emplace_back(layout.theta_offset + t, sign * w(t));
      spec.add_row(std::move(terms), lp::RowSense::ge, 0.0);
    }
  }

  // Per-row policy feasibility cuts at the accumulated ball-box vertices.
  for (int l = 0; l < L; ++l) {
    for (const VertexPattern& pattern : state.row_vertices[l]) {
      const Vec xi = pattern_point(ball_box, pattern);
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < n1; ++j)
        if (inst.recourse.A1(l, j) != 0.0)
          terms.emplace_back(j, inst.recourse.A1(l, j));
      Vec v = Vec::Zero(p);
      for (int k = 0; k < n2; ++k) {
        const double a2 = inst.recourse.A2(l, k);
        if (a2 == 0.0) continue;
        for (int j = 0; j <= m; ++j) {
          const auto& terms_kj =
              structure.entry_terms(PolicyStructure::entry_of(k, j, m));
          if (terms_kj.empty()) continue;
          const double factor = a2 * (j < m ? xi(j) : 1.0);
          for (const auto& [param, coeff] : terms_kj)
            v(param) += factor * coeff;
        }
      }
      for (int t = 0; t < p; ++t)
        if (v(t) != 0.0) terms.emplace_back(layout.theta_offset + t, v(t));
      const double rhs = inst.recourse.b(l) - inst.recourse.A3.row(l).dot(xi);
      spec.add_row(std::move(terms), lp::RowSense::le, rhs);
    }
  }

  // Refined mode: a wait-and-see block per accumulated support vertex.
  if (refined) {
    for (const VertexPattern& pattern : state.feasibility_vertices) {
      const Vec xi = pattern_point(inst.support, pattern);
      const int xf = spec.num_vars();
      layout.xf_offsets.push_back(xf);
      for (int k = 0; k < n2; ++k) spec.add_variable(-kInf, kInf, 0.0);
      for (int l = 0; l < L; ++l) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < n1; ++j)
          if (inst.recourse.A1(l, j) != 0.0)
            terms.emplace_back(j, inst.recourse.A1(l, j));
        for (int k = 0; k < n2; ++k)
          if (inst.recourse.A2(l, k) != 0.0)
            terms.emplace_back(xf + k, inst.recourse.A2(l, k));
        spec.add_row(std::move(terms), lp::RowSense::le,
                     inst.recourse.b(l) - inst.recourse.A3.row(l).dot(xi));
      }
    }
  }

  layout.vars = spec.num_vars();
  layout.rows = spec.num_rows();
  if (layout_out) *layout_out = layout;
  return spec;
}

struct RowViolation {
  Vec vertex;
  double violation = 0.0;
  VertexPattern pattern;
};

/// Subproblem in closed form: the row's dependence on xi has coefficient
/// vector g = row_l(A2 A + A3); the maximizer picks the upper bound where
/// g is positive and the lower bound elsewhere, which is a box vertex.
inline RowViolation row_violation(int row, const Vec& x1,
                                  const AffinePolicy& policy,
                                  const BoxSet& ball_box,
                                  const Instance& inst) {
  const int m = inst.m();
  const Vec g = (inst.recourse.A2.row(row) * policy.A).transpose() +
                inst.recourse.A3.row(row).transpose();
  RowViolation rv;
  rv.pattern.assign(m, 0);
  Vec xi = ball_box.lower();
  for (int j = 0; j < m; ++j) {
    if (g(j) > 0.0) {
      xi(j) = ball_box.upper()(j);
      rv.pattern[j] = 1;
    }
  }
  rv.vertex = xi;
  rv.violation = inst.recourse.A1.row(row).dot(x1) +
                 inst.recourse.A2.row(row).dot(policy.evaluate(xi)) +
                 inst.recourse.A3.row(row).dot(xi) - inst.recourse.b(row);
  return rv;
}

/// Actual wait-and-see decision: the recourse LP at a fixed (x1, xi).
inline std::pair<Vec, double> second_stage(const Vec& x1, const Vec& xi,
                                           const Instance& inst,
                                           const SolverOptions& opts = {}) {
  if (!inst.support.contains(xi, 1e-7))
    throw Error(ErrorCode::invalid_input,
                "second stage queried outside the support");
  lp::LinearProgramSpec spec;
  for (int k = 0; k < inst.n2(); ++k)
    spec.add_variable(-kInf, kInf, inst.c2(k));
  const Vec rhs = inst.recourse.b - inst.recourse.A1 * x1 - inst.recourse.A3 * xi;
  for (int l = 0; l < inst.L(); ++l) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < inst.n2(); ++k)
      if (inst.recourse.A2(l, k) != 0.0)
        terms.emplace_back(k, inst.recourse.A2(l, k));
    spec.add_row(std::move(terms), lp::RowSense::le, rhs(l));
  }
  const auto res = lp::solve_lp(spec, opts);
  if (res.status == lp::Status::infeasible)
    throw RecourseInfeasible("recourse infeasible at the given realization", xi);
  if (res.status != lp::Status::optimal)
    throw Error(res.status == lp::Status::unbounded ? ErrorCode::unbounded
                                                    : ErrorCode::numerical,
                "recourse LP did not reach optimality");
  return {res.primal, res.objective};
}

/// Maximum violation of the recourse constraints at (x1, xi): the value of
/// min y s.t. A1 x1 + A2 x2 + A3 xi <= b + 1 y, y >= 0. Zero exactly when
/// some feasible recourse exists.
inline double feasibility_value(const Vec& x1, const Vec& xi,
                                const Instance& inst,
                                const SolverOptions& opts = {}) {
  lp::LinearProgramSpec spec;
  for (int k = 0; k < inst.n2(); ++k) spec.add_variable(-kInf, kInf, 0.0);
  const int y = spec.add_variable(0.0, kInf, 1.0);
  const Vec rhs = inst.recourse.b - inst.recourse.A1 * x1 - inst.recourse.A3 * xi;
  for (int l = 0; l < inst.L(); ++l) {
    std::vector<std::pair<int, double>> terms;
    for (int k = 0; k < inst.n2(); ++k)
      if (inst.recourse.A2(l, k) != 0.0)
        terms.emplace_back(k, inst.recourse.A2(l, k));
    terms.emplace_back(y, -1.0);
    spec.add_row(std::move(terms), lp::RowSense::le, rhs(l));
  }
  const auto res = lp::solve_lp(spec, opts);
  if (res.status != lp::Status::optimal)
    throw Error(ErrorCode::numerical, "violation LP did not reach optimality");
  return std::max(res.objective, 0.0);
}

enum class FeasibilityMethod { automatic, enumerate, milp };

struct FeasibilityResult {
  Vec vertex;
  double value = 0.0;
  VertexPattern pattern;
};

/// Maximizes feasibility_value over the support vertices, either by plain
/// enumeration or through the dualized MILP with exact McCormick products
/// (1'lambda <= 1 pins lambda into [0,1], so no big-M constant is needed).
inline FeasibilityResult feasibility_subproblem(
    const Vec& x1, const BoxSet& support, const Instance& inst,
    FeasibilityMethod method = FeasibilityMethod::automatic,
    const SolverOptions& opts = {}, double milp_gap = 1e-9,
    std::uint64_t enumerate_cap = 256,
    std::uint64_t vertex_cap = kDefaultVertexCap) {
  const int m = inst.m(), n2 = inst.n2(), L = inst.L();
  if (method == FeasibilityMethod::automatic)
    method = support.vertex_count() <= enumerate_cap
                 ? FeasibilityMethod::enumerate
                 : FeasibilityMethod::milp;

  if (method == FeasibilityMethod::enumerate) {
    FeasibilityResult best;
    best.value = -kInf;
    const auto idx = support.nondegenerate_coords();
    const auto range = box_vertices(support, vertex_cap);
    for (auto it = range.begin(); it != range.end(); ++it) {
      const Vec xi = *it;
      const double v = feasibility_value(x1, xi, inst, opts);
      if (v > best.value) {
        best.value = v;
        best.vertex = xi;
        best.pattern.assign(m, 0);
        for (std::size_t b = 0; b < idx.size(); ++b)
          if ((it.mask() >> b) & 1) best.pattern[idx[b]] = 1;
      }
    }
    return best;
  }

  // Dual of the violation LP: max lambda'(A1 x1 + A3 xi - b) over
  // lambda >= 0, A2'lambda = 0, 1'lambda <= 1, with xi ranging over the
  // vertices via binary selectors zeta.
  lp::LinearProgramSpec spec;
  spec.sense = lp::Sense::maximize;
  const Vec r = inst.recourse.A1 * x1 - inst.recourse.b +
                inst.recourse.A3 * support.lower();
  std::vector<int> lambda(L);
  for (int l = 0; l < L; ++l) lambda[l] = spec.add_variable(0.0, 1.0, r(l));
  const auto idx = support.nondegenerate_coords();
  std::vector<int> zeta(idx.size());
  for (std::size_t b = 0; b < idx.size(); ++b)
    zeta[b] = spec.add_variable(0.0, 1.0, 0.0, true);
  for (int k = 0; k < n2; ++k) {
    std::vector<std::pair<int, double>> terms;
    for (int l = 0; l < L; ++l)
      if (inst.recourse.A2(l, k) != 0.0)
        terms.emplace_back(lambda[l], inst.recourse.A2(l, k));
    spec.add_row(std::move(terms), lp::RowSense::eq, 0.0);
  }
  {
    std::vector<std::pair<int, double>> terms;
    for (int l = 0; l < L; ++l) terms.emplace_back(lambda[l], 1.0);
    spec.add_row(std::move(terms), lp::RowSense::le, 1.0);
  }
  for (std::size_t b = 0; b < idx.size(); ++b) {
    const int j = idx[b];
    const double span = support.upper()(j) - support.lower()(j);
    for (int l = 0; l < L; ++l) {
      const double coeff = inst.recourse.A3(l, j) * span;
      if (coeff == 0.0) continue;
      const int w = spec.add_variable(0.0, 1.0, coeff);
      spec.add_row({{w, 1.0}, {lambda[l], -1.0}}, lp::RowSense::le, 0.0);
      spec.add_row({{w, 1.0}, {zeta[b], -1.0}}, lp::RowSense::le, 0.0);
      spec.add_row({{w, 1.0}, {lambda[l], -1.0}, {zeta[b], -1.0}},
                   lp::RowSense::ge, -1.0);
    }
  }
  const auto res = lp::solve_milp(spec, milp_gap, opts);
  if (res.status == lp::Status::iteration_limit)
    throw Error(ErrorCode::numerical,
                "feasibility subproblem MILP hit its node limit");
  if (res.status != lp::Status::optimal)
    throw Error(ErrorCode::numerical,
                "feasibility subproblem MILP failed to solve");
  FeasibilityResult out;
  out.pattern.assign(m, 0);
  for (std::size_t b = 0; b < idx.size(); ++b)
    if (res.primal(zeta[b]) > 0.5) out.pattern[idx[b]] = 1;
  out.vertex = pattern_point(support, out.pattern);
  out.value = std::max(res.objective, 0.0);
  return out;
}

struct AffineSolveOptions {
  double rho = 1e-6;       // feasibility tolerance on normalized rows
  double milp_gap = 1e-6;  // master MILP relative gap
  double trust_cap = 1e8;  // initial policy-parameter trust bound
  SolverOptions solver;
  long max_iterations = 10000;
  FeasibilityMethod feasibility = FeasibilityMethod::automatic;
  std::uint64_t enumerate_cap = 256;
  std::uint64_t vertex_cap = kDefaultVertexCap;
  // Observer for each master problem, e.g. to dump LP-format audits.
  std::function<void(int iteration, const lp::LinearProgramSpec&)> on_master;
};

struct AffineSolution {
  FirstStageDecision x1;
  AffinePolicy policy;
  Vec theta;
  double objective = 0.0;
  DualCertificate certificate;
  std::vector<IterationRecord> trace;
  double epsilon = 0.0;
  BoxSet ball_box;
  std::optional<RefinedSet> refinement;
};

namespace detail {

inline AffineSolution run_cutting_loop(const Instance& raw,
                                       const PolicyStructure& structure,
                                       const BoxSet& ball_box, bool refined,
                                       std::optional<RefinedSet> refinement,
                                       const AffineSolveOptions& opts) {
  raw.validate();
  const Instance inst = normalize_recourse(raw);
  const int m = inst.m();
  MasterState state = MasterState::initial(inst.L(), m, refined);

  double trust_cap = opts.trust_cap;
  int enlargements = 0;
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    state.iteration = iter;
    MasterLayout layout;
    lp::SolveResult res;
    Vec theta;
    while (true) {
      const auto spec = build_master(inst, structure, state, ball_box, refined,
                                     &layout, trust_cap);
      if (opts.on_master) opts.on_master(iter, spec);
      res = lp::solve_milp(spec, opts.milp_gap, opts.solver);
      if (res.status == lp::Status::infeasible)
        throw Error(ErrorCode::infeasible,
                    "master problem infeasible: no feasible first stage admits "
                    "an affine recourse rule on this uncertainty set");
      if (res.status == lp::Status::unbounded)
        throw Error(ErrorCode::unbounded,
                    "master problem unbounded: the first-stage set fails to "
                    "bound the objective");
      if (res.status != lp::Status::optimal)
        throw Error(ErrorCode::numerical, "master MILP hit its node limit");
      theta = res.primal.segment(layout.theta_offset,
                                 structure.parameter_count());
      if (theta.lpNorm<Eigen::Infinity>() < 0.999999 * trust_cap) break;
      if (++enlargements > 3)
        throw Error(ErrorCode::unbounded,
                    "policy parameters keep escaping the trust region; the "
                    "master appears unbounded");
      trust_cap *= 100.0;
    }

    const Vec x1 = res.primal.segment(layout.x1_offset, inst.n1());
    const AffinePolicy policy = structure.assemble(theta);

    IterationRecord rec;
    rec.iteration = iter;
    rec.master_objective = res.objective;
    rec.master_vars = layout.vars;
    rec.master_rows = layout.rows;

    if (refined) {
      const auto feas = feasibility_subproblem(
          x1, inst.support, inst, opts.feasibility, opts.solver, 1e-9,
          opts.enumerate_cap, opts.vertex_cap);
      rec.feasibility_violation = feas.value;
      if (feas.value > opts.rho) {
        if (state.feasibility_seen.count(feas.pattern))
          throw Error(ErrorCode::numerical,
                      "feasibility vertex recurred with violation above rho; "
                      "tolerance too tight for this data");
        state.feasibility_vertices.push_back(feas.pattern);
        state.feasibility_seen.insert(feas.pattern);
        rec.added_feasibility_cut = true;
        // Row subproblems are skipped this round; the previous max row
        // violation is carried forward unchanged.
        state.history.push_back(rec);
        continue;
      }
    }

    double f_p = 0.0;
    int added = 0;
    for (int l = 0; l < inst.L(); ++l) {
      const auto rv = row_violation(l, x1, policy, ball_box, inst);
      f_p = std::max(f_p, rv.violation);
      if (rv.violation > opts.rho) {
        if (!state.row_seen[l].count(rv.pattern)) {
          state.row_vertices[l].push_back(rv.pattern);
          state.row_seen[l].insert(rv.pattern);
          ++added;
        }
      }
    }
    rec.max_row_violation = f_p;
    rec.added_row_cuts = added;
    state.history.push_back(rec);

    if (f_p <= opts.rho) {
      DualCertificate cert;
      cert.mu0 = res.primal(layout.mu_offset);
      cert.mu_plus = res.primal.segment(layout.mu_offset + 1, m);
      cert.mu_minus = res.primal.segment(layout.mu_offset + 1 + m, m);
      return AffineSolution{
          FirstStageDecision::from_flat(x1, inst.first_stage.n_binary),
          policy,
          theta,
          res.objective,
          std::move(cert),
          state.history,
          inst.epsilon,
          ball_box,
          std::move(refinement)};
    }
    if (added == 0)
      throw Error(ErrorCode::numerical,
                  "row violation " + std::to_string(f_p) +
                      " exceeds rho but every maximizing vertex is already "
                      "cut; tolerance too tight for this data");
  }
  throw Error(ErrorCode::numerical,
              "cutting-plane loop exceeded its iteration bound");
}

}  // namespace detail

/// Cutting-plane solve of the affine problem over the full support box.
inline AffineSolution solve_affine(const Instance& inst,
                                   const PolicyStructure& structure,
                                   const AffineSolveOptions& opts = {}) {
  return detail::run_cutting_loop(inst, structure, inst.support, false,
                                  std::nullopt, opts);
}

/// Column-and-constraint solve over the refined set Omega, with first-stage
/// robust feasibility enforced on the full support through per-vertex
/// recourse blocks.
inline AffineSolution solve_affine_refined(const Instance& inst,
                                           const PolicyStructure& structure,
                                           double beta,
                                           const AffineSolveOptions& opts = {}) {
  RefinedSet ref = build_omega(inst.support, inst.samples, inst.epsilon, beta);
  const BoxSet omega = ref.omega;
  return detail::run_cutting_loop(inst, structure, omega, true, std::move(ref),
                                  opts);
}

}  // namespace wdro
