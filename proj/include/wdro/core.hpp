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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wdro {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Explicit sentinel for infinite bounds. Never encode infinity with a
/// large finite number.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ErrorCode {
  invalid_input,
  dimension_mismatch,
  infeasible,
  unbounded,
  numerical,
  cap_exceeded,
  io,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::unbounded: return "unbounded";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::cap_exceeded: return "cap_exceeded";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Recourse has no feasible point at the given uncertainty realization;
/// carries the offending point so callers can report it.
class RecourseInfeasible : public Error {
 public:
  RecourseInfeasible(const std::string& message, Vec xi)
      : Error(ErrorCode::infeasible, message), xi_(std::move(xi)) {}
  const Vec& xi() const { return xi_; }

 private:
  Vec xi_;
};

/// Shared numeric tolerances. All solver entry points take these; defaults
/// match the documented contract.
struct SolverOptions {
  double feas_tol = 1e-7;       // constraint / bound feasibility
  double opt_tol = 1e-7;        // reduced-cost optimality
  double int_tol = 1e-6;        // binary integrality
  double gap_tol = 1e-6;        // MILP relative gap
  double pivot_tol = 1e-9;      // smallest acceptable pivot magnitude
  long max_lp_iterations = 500000;
  long max_nodes = 200000;
  int refactor_every = 600;     // basis-inverse rebuild period
};

/// Deterministic RNG used across the toolkit. Hand-rolled draw kernels so
/// identical seeds give identical streams on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Requires n > 0.
  std::int64_t uniform_int(std::int64_t n) {
    return static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(n));
  }

  double normal(double mean, double sd) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return mean + sd * r * std::cos(2.0 * M_PI * u2);
  }

  /// In-place Fisher-Yates shuffle of indices 0..n-1.
  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i) {
      const auto j = uniform_int(i + 1);
      std::swap(p[i], p[j]);
    }
    return p;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline bool almost_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace wdro
