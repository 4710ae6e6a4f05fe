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

#include <queue>
#include <tuple>
#include <vector>

#include "wdro/lp/simplex.hpp"

namespace wdro::lp {

namespace detail {

struct BnbNode {
  double bound;  // parent relaxation value, a valid lower bound (minimize)
  long seq;
  std::vector<std::tuple<int, double, double>> fixings;
  Basis basis;   // parent's final basis for warm starting
};

struct BnbNodeOrder {
  // Best bound first; among ties, newest first so the search dives and the
  // warm-start basis stays hot.
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq < b.seq;
  }
};

inline SolveResult solve_milp_min(const LinearProgramSpec& spec,
                                  double gap_tol, const SolverOptions& opts,
                                  bool probe);

// A relaxation unbounded at the root leaves two possibilities: the MILP is
// unbounded (if any integer-feasible point exists; binaries are bounded, so
// the ray lives in the continuous variables and preserves feasibility) or
// infeasible. A zero-objective probe distinguishes them.
inline Status classify_unbounded_root(const LinearProgramSpec& spec,
                                      const SolverOptions& opts) {
  LinearProgramSpec zero = spec;
  for (auto& c : zero.objective) c = 0.0;
  const SolveResult probe = solve_milp_min(zero, 1.0, opts, true);
  return probe.status == Status::optimal ? Status::unbounded
                                         : Status::infeasible;
}

inline SolveResult solve_milp_min(const LinearProgramSpec& spec,
                                  double gap_tol, const SolverOptions& opts,
                                  bool probe) {
  std::vector<int> binaries;
  for (int j = 0; j < spec.num_vars(); ++j)
    if (spec.is_binary[j]) binaries.push_back(j);

  LinearProgramSpec work = spec;
  SolveResult best;
  best.status = Status::infeasible;
  bool have_incumbent = false;
  double inc_obj = kInf;

  std::priority_queue<BnbNode, std::vector<BnbNode>, BnbNodeOrder> open;
  long seq = 0;
  long nodes = 0;
  std::vector<double> history;
  double global_bound = -kInf;

  open.push(BnbNode{-kInf, seq++, {}, {}});

  const auto abs_gap = [&](double incumbent) {
    return gap_tol * std::max(1.0, std::abs(incumbent));
  };

  while (!open.empty()) {
    BnbNode node = std::move(const_cast<BnbNode&>(open.top()));
    open.pop();
    if (have_incumbent && node.bound >= inc_obj - abs_gap(inc_obj)) {
      // Best-bound order: nothing left can improve the incumbent.
      break;
    }
    if (nodes >= opts.max_nodes) {
      best.status = Status::iteration_limit;
      best.nodes = nodes;
      best.incumbent_history = history;
      if (have_incumbent) best.objective = inc_obj;
      return best;
    }
    ++nodes;
    global_bound = std::max(global_bound, node.bound);

    work.lower = spec.lower;
    work.upper = spec.upper;
    for (const auto& [j, lo, hi] : node.fixings) {
      work.lower[j] = lo;
      work.upper[j] = hi;
    }

    Basis out;
    const Basis* warm = node.basis.basic.empty() ? nullptr : &node.basis;
    const SolveResult rel = solve_lp_relaxation(work, opts, warm, &out);
    if (rel.status == Status::infeasible) continue;
    if (rel.status == Status::unbounded) {
      if (!node.fixings.empty())
        throw Error(ErrorCode::numerical,
                    "relaxation unbounded below the root node");
      if (probe) {
        best.status = Status::unbounded;
        return best;
      }
      best.status = classify_unbounded_root(spec, opts);
      return best;
    }
    if (rel.status == Status::iteration_limit) {
      best.status = Status::iteration_limit;
      best.nodes = nodes;
      best.incumbent_history = history;
      return best;
    }

    if (have_incumbent && rel.objective >= inc_obj - abs_gap(inc_obj)) continue;

    // Branching variable: most fractional binary.
    int branch = -1;
    double best_frac = opts.int_tol;
    for (int j : binaries) {
      const double v = rel.primal(j);
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac + 1e-15) {
        best_frac = frac;
        branch = j;
      }
    }

    if (branch < 0) {
      // Integral: candidate incumbent, node fathomed.
      if (!have_incumbent || rel.objective < inc_obj) {
        have_incumbent = true;
        inc_obj = rel.objective;
        best = rel;
        best.duals.reset();  // duals are an LP-only concept
        history.push_back(inc_obj);
      }
      continue;
    }

    for (int side = 0; side < 2; ++side) {
      BnbNode child;
      child.bound = rel.objective;
      child.seq = seq++;
      child.fixings = node.fixings;
      child.fixings.emplace_back(branch, static_cast<double>(side),
                                 static_cast<double>(side));
      if (open.size() < 20000) child.basis = out;  // cap warm-start memory
      open.push(std::move(child));
    }
  }

  best.nodes = nodes;
  best.incumbent_history = history;
  if (!have_incumbent) {
    best.status = Status::infeasible;
    return best;
  }
  best.status = Status::optimal;
  best.objective = inc_obj;
  // Snap binaries that are integral within tolerance.
  for (int j : binaries) best.primal(j) = std::round(best.primal(j));
  return best;
}

}  // namespace detail

/// Best-bound branch-and-bound over the binary variables, branching on the
/// most fractional one. Returns an objective within `gap_tol` (relative) of
/// the true optimum; node-limit exhaustion surfaces as iteration_limit.
inline SolveResult solve_milp(const LinearProgramSpec& spec, double gap_tol,
                              const SolverOptions& opts = {}) {
  spec.validate();
  if (gap_tol < 0.0)
    throw Error(ErrorCode::invalid_input, "gap_tol must be nonnegative");
  if (spec.sense == Sense::minimize)
    return detail::solve_milp_min(spec, gap_tol, opts, false);
  LinearProgramSpec flipped = spec;
  flipped.sense = Sense::minimize;
  for (auto& c : flipped.objective) c = -c;
  SolveResult res = detail::solve_milp_min(flipped, gap_tol, opts, false);
  res.objective = -res.objective;
  for (double& v : res.incumbent_history) v = -v;
  if (res.status == Status::unbounded || res.status == Status::infeasible)
    res.objective = 0.0;
  return res;
}

}  // namespace wdro::lp
