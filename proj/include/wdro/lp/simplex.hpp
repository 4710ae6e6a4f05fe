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
#include <cstdint>
#include <vector>

#include "wdro/lp/spec.hpp"

namespace wdro::lp {

/// Snapshot of a simplex basis, used to warm-start related solves
/// (branch-and-bound children, grown master problems).
struct Basis {
  std::vector<int> basic;                    // column per row position
  std::vector<std::uint8_t> nonbasic_state;  // VarState per column
};

namespace detail {

enum VarState : std::uint8_t { kLower = 0, kUpper = 1, kFree0 = 2, kBasic = 3 };

/// Bounded-variable revised simplex with a dense explicit basis inverse.
/// Phase 1 minimizes the sum of bound infeasibilities of the basic
/// variables (no artificial columns), so any starting basis is usable.
/// Dantzig pricing with a Bland fallback while the objective stalls.
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgramSpec& spec, const SolverOptions& opts)
      : opts_(opts),
        n_(spec.num_vars()),
        m_(spec.num_rows()),
        total_(n_ + m_) {
    cols_.resize(n_);
    cost_ = Vec::Zero(total_);
    lo_ = Vec::Zero(total_);
    hi_ = Vec::Zero(total_);
    rhs_ = Vec::Zero(m_);
    max_sense_ = spec.sense == Sense::maximize;
    const double obj_sign = max_sense_ ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) {
      cost_(j) = obj_sign * spec.objective[j];
      lo_(j) = spec.lower[j];
      hi_(j) = spec.upper[j];
    }
    for (int r = 0; r < m_; ++r) {
      const auto& row = spec.rows[r];
      for (const auto& [j, a] : row.terms) {
        if (a != 0.0) cols_[j].push_back({r, a});
      }
      rhs_(r) = row.rhs;
      const int s = n_ + r;
      switch (row.sense) {
        case RowSense::le: lo_(s) = 0.0; hi_(s) = kInf; break;
        case RowSense::ge: lo_(s) = -kInf; hi_(s) = 0.0; break;
        case RowSense::eq: lo_(s) = 0.0; hi_(s) = 0.0; break;
      }
    }
    // Merge duplicate indices within a column (same row listed twice).
    for (auto& col : cols_) {
      std::sort(col.begin(), col.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::size_t w = 0;
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (w > 0 && col[w - 1].first == col[i].first)
          col[w - 1].second += col[i].second;
        else
          col[w++] = col[i];
      }
      col.resize(w);
    }
  }

  SolveResult solve(const Basis* warm, Basis* out) {
    SolveResult res;
    res.primal = Vec::Zero(n_);
    for (int j = 0; j < total_; ++j) {
      if (lo_(j) > hi_(j) + 1e-12) {
        res.status = Status::infeasible;
        return res;
      }
    }
    init_basis(warm);
    res.status = iterate();
    res.iterations = iter_;
    res.primal = x_.head(n_);
    if (res.status == Status::optimal) {
      double obj = 0.0;
      for (int j = 0; j < n_; ++j) obj += cost_(j) * x_(j);
      res.objective = max_sense_ ? -obj : obj;
      res.is_vertex = true;
      Vec y = dual_rows();
      if (max_sense_) y = -y;
      res.duals = std::move(y);
    }
    if (out) {
      out->basic = basic_;
      out->nonbasic_state.assign(state_.begin(), state_.end());
    }
    return res;
  }

 private:
  // -- setup ---------------------------------------------------------------

  void init_basis(const Basis* warm) {
    state_.assign(total_, kLower);
    basic_.assign(m_, -1);
    x_ = Vec::Zero(total_);
    bool warm_ok = false;
    if (warm && static_cast<int>(warm->basic.size()) == m_ &&
        static_cast<int>(warm->nonbasic_state.size()) == total_) {
      std::vector<char> used(total_, 0);
      warm_ok = true;
      for (int c : warm->basic) {
        if (c < 0 || c >= total_ || used[c]) {
          warm_ok = false;
          break;
        }
        used[c] = 1;
      }
      if (warm_ok) {
        basic_ = warm->basic;
        for (int j = 0; j < total_; ++j) {
          state_[j] = used[j] ? kBasic
                              : static_cast<VarState>(warm->nonbasic_state[j]);
          if (!used[j] && state_[j] == kBasic) state_[j] = kLower;
        }
        warm_ok = refactor();  // singular warm basis: fall back to slacks
      }
    }
    if (!warm_ok) reset_to_slack_basis();
    // Normalize nonbasic states against bounds and set nonbasic values.
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic) continue;
      state_[j] = default_state(j, state_[j]);
      x_(j) = nonbasic_value(j);
    }
    recompute_basics();
  }

  void reset_to_slack_basis() {
    for (int j = 0; j < total_; ++j) state_[j] = kLower;
    for (int r = 0; r < m_; ++r) {
      basic_[r] = n_ + r;
      state_[n_ + r] = kBasic;
    }
    binv_ = Mat::Identity(m_, m_);
  }

  VarState default_state(int j, VarState hint) const {
    const bool lof = std::isfinite(lo_(j));
    const bool hif = std::isfinite(hi_(j));
    if (!lof && !hif) return kFree0;
    if (hint == kLower && lof) return kLower;
    if (hint == kUpper && hif) return kUpper;
    if (lof && hif) return std::abs(lo_(j)) <= std::abs(hi_(j)) ? kLower : kUpper;
    return lof ? kLower : kUpper;
  }

  double nonbasic_value(int j) const {
    switch (state_[j]) {
      case kLower: return lo_(j);
      case kUpper: return hi_(j);
      default: return 0.0;
    }
  }

  void recompute_basics() {
    if (m_ == 0) return;
    Vec r = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic || x_(j) == 0.0) continue;
      if (j >= n_) {
        r(j - n_) -= x_(j);
      } else {
        for (const auto& [i, a] : cols_[j]) r(i) -= a * x_(j);
      }
    }
    Vec xb = binv_ * r;
    for (int i = 0; i < m_; ++i) x_(basic_[i]) = xb(i);
  }

  bool refactor() {
    if (m_ == 0) return true;
    Mat b = Mat::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      const int c = basic_[r];
      if (c >= n_) {
        b(c - n_, r) = 1.0;
      } else {
        for (const auto& [i, a] : cols_[c]) b(i, r) = a;
      }
    }
    Eigen::PartialPivLU<Mat> lu(b);
    binv_ = lu.inverse();
    // Probe for singularity: B * (Binv * 1) should reproduce 1.
    Vec back = b * (binv_ * Vec::Ones(m_));
    for (int i = 0; i < m_; ++i) {
      if (!std::isfinite(back(i)) || std::abs(back(i) - 1.0) > 1e-5)
        return false;
    }
    return true;
  }

  // Mid-solve recovery when the updated inverse has degraded: refactor, and
  // if the basis itself is singular, restart from the all-slack basis.
  void recover_basis() {
    if (refactor()) {
      recompute_basics();
      return;
    }
    if (++resets_ > 3)
      throw Error(ErrorCode::numerical,
                  "simplex basis repeatedly singular after refactorization");
    reset_to_slack_basis();
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == kBasic) continue;
      state_[j] = default_state(j, state_[j]);
      x_(j) = nonbasic_value(j);
    }
    recompute_basics();
  }

  // -- iteration ------------------------------------------------------------

  double vtol(int j) const {
    double scale = 0.0;
    if (std::isfinite(lo_(j))) scale = std::max(scale, std::abs(lo_(j)));
    if (std::isfinite(hi_(j))) scale = std::max(scale, std::abs(hi_(j)));
    return opts_.feas_tol * (1.0 + scale);
  }

  // Total infeasibility of basics and the phase-1 gradient on basic rows.
  double infeasibility(Vec* d_basic) const {
    double h = 0.0;
    if (d_basic) *d_basic = Vec::Zero(m_);
    for (int i = 0; i < m_; ++i) {
      const int c = basic_[i];
      const double t = vtol(c);
      if (x_(c) < lo_(c) - t) {
        h += lo_(c) - x_(c);
        if (d_basic) (*d_basic)(i) = -1.0;
      } else if (x_(c) > hi_(c) + t) {
        h += x_(c) - hi_(c);
        if (d_basic) (*d_basic)(i) = 1.0;
      }
    }
    return h;
  }

  Vec dual_rows() const {
    if (m_ == 0) return Vec();
    Vec cb(m_);
    for (int i = 0; i < m_; ++i) cb(i) = cost_(basic_[i]);
    return binv_.transpose() * cb;
  }

  double column_dot(int j, const Vec& y) const {
    if (m_ == 0) return 0.0;
    if (j >= n_) return y(j - n_);
    double s = 0.0;
    for (const auto& [i, a] : cols_[j]) s += a * y(i);
    return s;
  }

  Vec ftran(int j) const {
    Vec dir = Vec::Zero(m_);
    if (m_ == 0) return dir;
    if (j >= n_) {
      dir = binv_.col(j - n_);
    } else {
      for (const auto& [i, a] : cols_[j]) dir.noalias() += a * binv_.col(i);
    }
    return dir;
  }

  Status iterate() {
    iter_ = 0;
    bland_ = false;
    long stall = 0;
    double best_metric = kInf;
    bool best_phase1 = true;
    int since_refactor = 0;

    while (true) {
      if (iter_ >= opts_.max_lp_iterations) return Status::iteration_limit;
      if (since_refactor >= opts_.refactor_every) {
        recover_basis();
        since_refactor = 0;
      }

      Vec d_basic;
      const double h = infeasibility(&d_basic);
      const bool phase1 = h > 0.0;
      const double enter_tol = phase1 ? 1e-10 : opts_.opt_tol;

      Vec y;
      if (m_ > 0) y = phase1 ? Vec(binv_.transpose() * d_basic) : dual_rows();

      // Stall tracking drives the Bland fallback.
      if (phase1 != best_phase1) {
        best_metric = kInf;
        best_phase1 = phase1;
        stall = 0;
        bland_ = false;
      }
      const double metric = phase1 ? h : current_objective();
      if (metric < best_metric - 1e-12 * (1.0 + std::abs(best_metric))) {
        best_metric = metric;
        stall = 0;
        bland_ = false;
      } else if (++stall > stall_limit()) {
        bland_ = true;
      }

      // Pricing.
      int enter = -1;
      double enter_sigma = 0.0;
      double best_score = enter_tol;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == kBasic || lo_(j) == hi_(j)) continue;
        const double rc = (phase1 ? 0.0 : cost_(j)) - column_dot(j, y);
        double sigma = 0.0;
        if (state_[j] == kLower) {
          if (rc < -enter_tol) sigma = 1.0;
        } else if (state_[j] == kUpper) {
          if (rc > enter_tol) sigma = -1.0;
        } else {  // free at zero
          if (rc < -enter_tol) sigma = 1.0;
          else if (rc > enter_tol) sigma = -1.0;
        }
        if (sigma == 0.0) continue;
        if (bland_) {
          enter = j;
          enter_sigma = sigma;
          break;
        }
        if (std::abs(rc) > best_score) {
          best_score = std::abs(rc);
          enter = j;
          enter_sigma = sigma;
        }
      }

      if (enter < 0) {
        if (phase1) {
          // Re-check on a clean factorization before declaring infeasible.
          if (since_refactor > 0) {
            recover_basis();
            since_refactor = 0;
            if (infeasibility(nullptr) > 0.0) return Status::infeasible;
            continue;
          }
          return Status::infeasible;
        }
        snap_to_bounds();
        return Status::optimal;
      }

      const double sigma = enter_sigma;
      const Vec dir = ftran(enter);

      // Ratio test. Basic variables block at the bound they are moving
      // toward; in phase 1 a variable outside its bounds blocks where it
      // turns feasible (the objective gradient changes there).
      double t_block = kInf;
      int block_row = -1;
      bool block_at_upper = false;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(dir(i)) <= opts_.pivot_tol) continue;
        const double rate = -sigma * dir(i);
        const int c = basic_[i];
        const double t = vtol(c);
        double cand = kInf;
        bool at_upper = false;
        if (x_(c) < lo_(c) - t) {
          if (rate > 0.0) { cand = (lo_(c) - x_(c)) / rate; at_upper = false; }
        } else if (x_(c) > hi_(c) + t) {
          if (rate < 0.0) { cand = (x_(c) - hi_(c)) / (-rate); at_upper = true; }
        } else if (rate > 0.0 && std::isfinite(hi_(c))) {
          cand = (hi_(c) - x_(c)) / rate;
          at_upper = true;
        } else if (rate < 0.0 && std::isfinite(lo_(c))) {
          cand = (x_(c) - lo_(c)) / (-rate);
          at_upper = false;
        }
        if (cand == kInf) continue;
        cand = std::max(cand, 0.0);
        if (block_row < 0) {
          t_block = cand;
          block_row = i;
          block_at_upper = at_upper;
          continue;
        }
        if (bland_) {
          if (cand < t_block - 1e-12 ||
              (cand < t_block + 1e-12 && basic_[i] < basic_[block_row])) {
            t_block = std::min(cand, t_block);
            block_row = i;
            block_at_upper = at_upper;
          }
        } else if (cand < t_block - 1e-9 * (1.0 + t_block)) {
          t_block = cand;
          block_row = i;
          block_at_upper = at_upper;
        } else if (cand <= t_block + 1e-9 * (1.0 + t_block) &&
                   std::abs(dir(i)) > std::abs(dir(block_row))) {
          t_block = std::min(cand, t_block);
          block_row = i;
          block_at_upper = at_upper;
        }
      }

      double t_flip = kInf;
      if (state_[enter] != kFree0 && std::isfinite(lo_(enter)) &&
          std::isfinite(hi_(enter)))
        t_flip = hi_(enter) - lo_(enter);

      if (block_row < 0 && t_flip == kInf) {
        if (phase1)
          throw Error(ErrorCode::numerical,
                      "phase-1 ratio test found no blocking event");
        return Status::unbounded;
      }

      ++iter_;
      ++since_refactor;

      if (t_flip <= t_block) {
        // Bound flip: no basis change.
        x_(enter) = state_[enter] == kLower ? hi_(enter) : lo_(enter);
        state_[enter] = state_[enter] == kLower ? kUpper : kLower;
        if (t_flip != 0.0)
          for (int i = 0; i < m_; ++i) x_(basic_[i]) -= sigma * t_flip * dir(i);
        continue;
      }

      const double step = t_block;
      const int leave = basic_[block_row];
      if (step != 0.0)
        for (int i = 0; i < m_; ++i) x_(basic_[i]) -= sigma * step * dir(i);
      x_(enter) += sigma * step;
      x_(leave) = block_at_upper ? hi_(leave) : lo_(leave);
      state_[leave] = block_at_upper ? kUpper : kLower;

      // Basis inverse update, Gauss-Jordan on the pivot row.
      const double piv = dir(block_row);
      const Eigen::RowVectorXd br = binv_.row(block_row);
      Vec w = dir;
      w(block_row) = piv - 1.0;
      binv_.noalias() -= (w / piv) * br;

      basic_[block_row] = enter;
      state_[enter] = kBasic;
    }
  }

  long stall_limit() const { return std::max<long>(1000, 2L * (m_ + n_)); }

  double current_objective() const {
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) obj += cost_(j) * x_(j);
    return obj;
  }

  void snap_to_bounds() {
    for (int j = 0; j < total_; ++j) {
      const double t = vtol(j);
      if (std::isfinite(lo_(j)) && x_(j) < lo_(j) && x_(j) > lo_(j) - t)
        x_(j) = lo_(j);
      if (std::isfinite(hi_(j)) && x_(j) > hi_(j) && x_(j) < hi_(j) + t)
        x_(j) = hi_(j);
    }
  }

  SolverOptions opts_;
  int n_, m_, total_;
  bool max_sense_ = false;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  Vec cost_, lo_, hi_, rhs_;
  std::vector<VarState> state_;
  std::vector<int> basic_;
  Vec x_;
  Mat binv_;
  long iter_ = 0;
  bool bland_ = false;
  int resets_ = 0;
};

}  // namespace detail

/// Solves a pure LP (no binaries). Optimal solutions are basic (vertex)
/// solutions and carry one dual per constraint row.
inline SolveResult solve_lp(const LinearProgramSpec& spec,
                            const SolverOptions& opts = {},
                            const Basis* warm = nullptr, Basis* out = nullptr) {
  spec.validate();
  if (spec.any_binary())
    throw Error(ErrorCode::invalid_input,
                "solve_lp called on a spec with binary variables");
  detail::BoundedSimplex simplex(spec, opts);
  return simplex.solve(warm, out);
}

/// Internal entry that skips the binary check: branch-and-bound relaxations
/// keep the integrality flags but solve the continuous relaxation.
inline SolveResult solve_lp_relaxation(const LinearProgramSpec& spec,
                                       const SolverOptions& opts,
                                       const Basis* warm = nullptr,
                                       Basis* out = nullptr) {
  detail::BoundedSimplex simplex(spec, opts);
  return simplex.solve(warm, out);
}

}  // namespace wdro::lp
