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
#include <utility>
#include <vector>

#include "wdro/model/box.hpp"

namespace wdro {

enum class SampleIngest { reject, clamp };

/// Historical samples, validated against the support box on construction.
/// Points within rounding distance of a bound are snapped onto it; points
/// genuinely outside are rejected unless clamp mode is requested.
class SampleSet {
 public:
  SampleSet(Mat points, const BoxSet& support,
            SampleIngest mode = SampleIngest::reject)
      : points_(std::move(points)) {
    if (points_.rows() < 1)
      throw Error(ErrorCode::invalid_input, "sample set needs at least one point");
    if (points_.cols() != support.dim())
      throw Error(ErrorCode::dimension_mismatch,
                  "samples have " + std::to_string(points_.cols()) +
                      " columns, support has dimension " +
                      std::to_string(support.dim()));
    for (int i = 0; i < points_.rows(); ++i) {
      for (int j = 0; j < points_.cols(); ++j) {
        const double lo = support.lower()(j), hi = support.upper()(j);
        const double snap =
            1e-9 * (1.0 + std::max(std::abs(lo), std::abs(hi)));
        double v = points_(i, j);
        if (v < lo || v > hi) {
          if (mode == SampleIngest::clamp || (v >= lo - snap && v <= hi + snap)) {
            v = std::min(std::max(v, lo), hi);
          } else {
            throw Error(ErrorCode::invalid_input,
                        "sample " + std::to_string(i) + " coordinate " +
                            std::to_string(j) + " lies outside the support");
          }
        }
        points_(i, j) = v;
      }
    }
  }

  int size() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Mat& points() const { return points_; }
  Vec point(int i) const { return points_.row(i).transpose(); }

  /// Entrywise min/max box hull of the samples.
  BoxSet box_hull() const {
    return BoxSet(points_.colwise().minCoeff().transpose(),
                  points_.colwise().maxCoeff().transpose());
  }

 private:
  Mat points_;
};

inline Vec sample_mean(const SampleSet& samples) {
  return samples.points().colwise().mean().transpose();
}

/// First-stage feasible set: n_binary binaries then n_continuous reals,
/// constrained by G x1 <= g.
struct FirstStageSpace {
  int n_binary = 0;
  int n_continuous = 0;
  Mat G;  // rows x (n_binary + n_continuous)
  Vec g;

  int n() const { return n_binary + n_continuous; }

  void validate() const {
    if (n_binary < 1)
      throw Error(ErrorCode::invalid_input,
                  "first stage needs at least one binary variable");
    if (n_continuous < 0)
      throw Error(ErrorCode::invalid_input, "negative continuous count");
    if (G.rows() != g.size())
      throw Error(ErrorCode::dimension_mismatch,
                  "first-stage G and g row counts differ");
    if (G.rows() > 0 && G.cols() != n())
      throw Error(ErrorCode::dimension_mismatch,
                  "first-stage inequality width " + std::to_string(G.cols()) +
                      " != n1 = " + std::to_string(n()));
  }
};

/// Recourse constraint data A1 x1 + A2 x2 + A3 xi <= b.
struct RecourseData {
  Mat A1, A2, A3;
  Vec b;

  int rows() const { return static_cast<int>(b.size()); }
  int n2() const { return static_cast<int>(A2.cols()); }

  void validate(int n1, int m) const {
    if (A1.rows() != b.size() || A2.rows() != b.size() || A3.rows() != b.size())
      throw Error(ErrorCode::dimension_mismatch,
                  "recourse matrices disagree on the number of rows");
    if (A1.cols() != n1)
      throw Error(ErrorCode::dimension_mismatch,
                  "recourse A1 width " + std::to_string(A1.cols()) +
                      " != n1 = " + std::to_string(n1));
    if (A3.cols() != m)
      throw Error(ErrorCode::dimension_mismatch,
                  "recourse A3 width " + std::to_string(A3.cols()) +
                      " != m = " + std::to_string(m));
  }
};

/// Affine decision rule x2(xi) = A xi + a.
struct AffinePolicy {
  Mat A;
  Vec a;

  Vec evaluate(const Vec& xi) const { return A * xi + a; }
  int n2() const { return static_cast<int>(a.size()); }
  int m() const { return static_cast<int>(A.cols()); }
};

/// Linear map from a parameter vector theta (length p) to the entries of
/// (A, a). Entries not mentioned by any term are fixed at zero. Entry
/// indices run row-major with the intercept as column m:
/// entry = k*(m+1) + j is A(k, j) for j < m and a(k) for j = m.
class PolicyStructure {
 public:
  struct Term {
    int entry;
    int param;
    double coeff;
  };

  PolicyStructure(int n2, int m, int parameter_count, std::vector<Term> terms)
      : n2_(n2), m_(m), p_(parameter_count), terms_(std::move(terms)) {
    if (n2_ < 1 || m_ < 1 || p_ < 0)
      throw Error(ErrorCode::invalid_input, "bad policy structure dimensions");
    entry_terms_.resize(static_cast<std::size_t>(n2_) * (m_ + 1));
    for (const auto& t : terms_) {
      if (t.entry < 0 || t.entry >= static_cast<int>(entry_terms_.size()))
        throw Error(ErrorCode::invalid_input,
                    "policy structure entry index out of range");
      if (t.param < 0 || t.param >= p_)
        throw Error(ErrorCode::invalid_input,
                    "policy structure parameter index out of range");
      entry_terms_[t.entry].emplace_back(t.param, t.coeff);
    }
  }

  /// One free parameter per (A, a) entry.
  static PolicyStructure identity(int n2, int m) {
    std::vector<Term> terms;
    const int p = n2 * (m + 1);
    terms.reserve(p);
    for (int e = 0; e < p; ++e) terms.push_back({e, e, 1.0});
    return PolicyStructure(n2, m, p, terms);
  }

  int n2() const { return n2_; }
  int m() const { return m_; }
  int parameter_count() const { return p_; }
  const std::vector<Term>& terms() const { return terms_; }

  static int entry_of(int k, int j, int m) { return k * (m + 1) + j; }

  /// Linear terms of a single (A, a) entry as (param, coeff) pairs.
  const std::vector<std::pair<int, double>>& entry_terms(int entry) const {
    return entry_terms_[entry];
  }

  AffinePolicy assemble(const Vec& theta) const {
    if (theta.size() != p_)
      throw Error(ErrorCode::dimension_mismatch,
                  "theta length " + std::to_string(theta.size()) +
                      " != parameter count " + std::to_string(p_));
    AffinePolicy pol;
    pol.A = Mat::Zero(n2_, m_);
    pol.a = Vec::Zero(n2_);
    for (const auto& t : terms_) {
      const int k = t.entry / (m_ + 1);
      const int j = t.entry % (m_ + 1);
      if (j < m_)
        pol.A(k, j) += t.coeff * theta(t.param);
      else
        pol.a(k) += t.coeff * theta(t.param);
    }
    return pol;
  }

 private:
  int n2_, m_, p_;
  std::vector<Term> terms_;
  std::vector<std::vector<std::pair<int, double>>> entry_terms_;
};

/// Full two-stage problem data: first stage, recourse, box support,
/// samples and the ball radius.
struct Instance {
  Vec c1;
  Vec c2;
  FirstStageSpace first_stage;
  RecourseData recourse;
  BoxSet support;
  SampleSet samples;
  double epsilon = 0.0;

  int n1() const { return first_stage.n(); }
  int n2() const { return recourse.n2(); }
  int m() const { return support.dim(); }
  int L() const { return recourse.rows(); }

  void validate() const {
    first_stage.validate();
    if (c1.size() != n1())
      throw Error(ErrorCode::dimension_mismatch,
                  "c1 length " + std::to_string(c1.size()) +
                      " != n1 = " + std::to_string(n1()));
    if (c2.size() != n2())
      throw Error(ErrorCode::dimension_mismatch,
                  "c2 length " + std::to_string(c2.size()) +
                      " != n2 = " + std::to_string(n2()));
    recourse.validate(n1(), m());
    if (samples.dim() != m())
      throw Error(ErrorCode::dimension_mismatch,
                  "sample dimension != support dimension");
    if (!(epsilon >= 0.0))
      throw Error(ErrorCode::invalid_input, "epsilon must be nonnegative");
  }
};

/// First-stage decision split into its binary and continuous parts.
struct FirstStageDecision {
  Vec binary;
  Vec continuous;

  Vec flat() const {
    Vec x(binary.size() + continuous.size());
    x << binary, continuous;
    return x;
  }

  static FirstStageDecision from_flat(const Vec& x, int n_binary) {
    FirstStageDecision d;
    d.binary = x.head(n_binary);
    d.continuous = x.tail(x.size() - n_binary);
    return d;
  }
};

}  // namespace wdro
