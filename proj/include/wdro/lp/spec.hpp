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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wdro/core.hpp"

namespace wdro::lp {

enum class Sense { minimize, maximize };
enum class RowSense { le, eq, ge };

enum class Status { optimal, infeasible, unbounded, iteration_limit };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

struct ConstraintRow {
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// Backend-neutral LP/MILP description. Variables are identified by index;
/// bounds use the kInf sentinel for infinity.
struct LinearProgramSpec {
  Sense sense = Sense::minimize;
  std::vector<double> objective;
  std::vector<ConstraintRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> is_binary;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_variable(double lo, double hi, double obj, bool binary = false) {
    objective.push_back(obj);
    lower.push_back(lo);
    upper.push_back(hi);
    is_binary.push_back(binary);
    return num_vars() - 1;
  }

  void add_row(std::vector<std::pair<int, double>> terms, RowSense sense,
               double rhs) {
    rows.push_back(ConstraintRow{std::move(terms), sense, rhs});
  }

  bool any_binary() const {
    for (bool b : is_binary)
      if (b) return true;
    return false;
  }

  /// Field-specific structural validation; throws on the first defect.
  void validate() const {
    const int n = num_vars();
    if (lower.size() != objective.size() || upper.size() != objective.size() ||
        is_binary.size() != objective.size())
      throw Error(ErrorCode::dimension_mismatch,
                  "variable arrays have inconsistent lengths");
    for (int j = 0; j < n; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]))
        throw Error(ErrorCode::invalid_input,
                    "NaN bound on variable " + std::to_string(j));
      if (is_binary[j] && (lower[j] < -1e-12 || upper[j] > 1.0 + 1e-12))
        throw Error(ErrorCode::invalid_input,
                    "binary variable " + std::to_string(j) +
                        " has bounds outside [0, 1]");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [j, coeff] : rows[r].terms) {
        if (j < 0 || j >= n)
          throw Error(ErrorCode::invalid_input,
                      "row " + std::to_string(r) +
                          " references variable index " + std::to_string(j));
        if (std::isnan(coeff))
          throw Error(ErrorCode::invalid_input,
                      "row " + std::to_string(r) + " has a NaN coefficient");
      }
      if (std::isnan(rows[r].rhs))
        throw Error(ErrorCode::invalid_input,
                    "row " + std::to_string(r) + " has a NaN rhs");
    }
  }
};

struct SolveResult {
  Status status = Status::iteration_limit;
  Vec primal;                 // structural variables
  double objective = 0.0;
  std::optional<Vec> duals;   // one per constraint row, LP solves only
  bool is_vertex = false;
  long iterations = 0;
  long nodes = 0;
  std::vector<double> incumbent_history;  // MILP incumbents, discovery order
};

}  // namespace wdro::lp
