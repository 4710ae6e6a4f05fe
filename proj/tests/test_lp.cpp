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

#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"
#include "wdro/lp/simplex.hpp"

using namespace wdro;
using namespace wdro::lp;

namespace {

// Random LP with a guaranteed feasible point and finite bounds everywhere.
LinearProgramSpec random_lp(Rng& rng, int n, int n_rows, bool with_eq = false) {
  LinearProgramSpec spec;
  for (int j = 0; j < n; ++j) {
    const double lo = rng.uniform(-3.0, 0.0);
    const double hi = lo + rng.uniform(0.5, 4.0);
    spec.add_variable(lo, hi, rng.uniform(-2.0, 2.0));
  }
  Vec x0(n);
  for (int j = 0; j < n; ++j)
    x0(j) = rng.uniform(spec.lower[j], spec.upper[j]);
  for (int r = 0; r < n_rows; ++r) {
    std::vector<std::pair<int, double>> terms;
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = rng.uniform(-2.0, 2.0);
      terms.emplace_back(j, a);
      lhs += a * x0(j);
    }
    RowSense sense = RowSense::le;
    double rhs = lhs + rng.uniform(0.0, 2.0);
    if (with_eq && r == 0) {
      sense = RowSense::eq;
      rhs = lhs;
    } else if (rng.uniform() < 0.3) {
      sense = RowSense::ge;
      rhs = lhs - rng.uniform(0.0, 2.0);
    }
    spec.add_row(std::move(terms), sense, rhs);
  }
  return spec;
}

}  // namespace

TEST_CASE("single variable bound LP") {
  LinearProgramSpec spec;
  spec.add_variable(0.0, 10.0, 1.0);
  spec.add_row({{0, 1.0}}, RowSense::ge, 1.0);
  const auto res = solve_lp(spec);
  REQUIRE(res.status == Status::optimal);
  CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK_THAT(res.primal(0), Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK(res.is_vertex);
}

TEST_CASE("simplex face maximum lands on a vertex") {
  LinearProgramSpec spec;
  spec.sense = Sense::maximize;
  spec.add_variable(0.0, kInf, 1.0);
  spec.add_variable(0.0, kInf, 1.0);
  spec.add_row({{0, 1.0}, {1, 1.0}}, RowSense::le, 1.0);
  const auto res = solve_lp(spec);
  REQUIRE(res.status == Status::optimal);
  CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK(res.is_vertex);
  CHECK(testing::is_vertex_point(spec, res.primal));
}

TEST_CASE("random dense LPs match the vertex-enumeration oracle") {
  Rng rng(20260809);
  int solved = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = random_lp(rng, 5, 8, trial % 3 == 0);
    const auto res = solve_lp(spec);
    const auto oracle = testing::enumerate_lp_optimum(spec);
    REQUIRE(res.status == Status::optimal);
    REQUIRE(oracle.has_value());
    INFO("trial " << trial);
    CHECK(std::abs(res.objective - *oracle) <= 1e-8 * (1.0 + std::abs(*oracle)));
    CHECK(testing::is_vertex_point(spec, res.primal));
    ++solved;
  }
  CHECK(solved == 30);
}

TEST_CASE("infeasible and unbounded statuses") {
  SECTION("infeasible") {
    LinearProgramSpec spec;
    spec.add_variable(0.0, kInf, 1.0);
    spec.add_row({{0, 1.0}}, RowSense::ge, 2.0);
    spec.add_row({{0, 1.0}}, RowSense::le, 1.0);
    CHECK(solve_lp(spec).status == Status::infeasible);
  }
  SECTION("unbounded") {
    LinearProgramSpec spec;
    spec.add_variable(0.0, kInf, -1.0);
    CHECK(solve_lp(spec).status == Status::unbounded);
  }
  SECTION("free variable unbounded through a row") {
    LinearProgramSpec spec;
    spec.add_variable(-kInf, kInf, 1.0);
    spec.add_variable(-kInf, kInf, 0.0);
    spec.add_row({{0, 1.0}, {1, -1.0}}, RowSense::ge, 0.0);
    CHECK(solve_lp(spec).status == Status::unbounded);
  }
}

TEST_CASE("equality rows and free variables") {
  LinearProgramSpec spec;
  spec.add_variable(-kInf, kInf, 1.0);
  spec.add_variable(0.0, 5.0, 2.0);
  spec.add_row({{0, 1.0}, {1, 1.0}}, RowSense::eq, 3.0);
  spec.add_row({{0, 1.0}}, RowSense::ge, 0.5);
  const auto res = solve_lp(spec);
  REQUIRE(res.status == Status::optimal);
  // x0 = 3 - x1; objective x0 + 2 x1 = 3 + x1, so x1 = 0, x0 = 3.
  CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(3.0, 1e-8));
}

TEST_CASE("strong duality and complementary slackness on random LPs") {
  Rng rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_lp(rng, 4, 6);
    const auto res = solve_lp(spec);
    REQUIRE(res.status == Status::optimal);
    REQUIRE(res.duals.has_value());
    const Vec& y = *res.duals;

    // Dual objective: y'b plus reduced-cost contributions at active bounds.
    double dual_obj = 0.0;
    for (int r = 0; r < spec.num_rows(); ++r) dual_obj += y(r) * spec.rows[r].rhs;
    for (int j = 0; j < spec.num_vars(); ++j) {
      double yta = 0.0;
      for (int r = 0; r < spec.num_rows(); ++r) {
        for (const auto& [k, a] : spec.rows[r].terms)
          if (k == j) yta += y(r) * a;
      }
      const double rc = spec.objective[j] - yta;
      if (rc > 0.0) dual_obj += rc * spec.lower[j];
      else if (rc < 0.0) dual_obj += rc * spec.upper[j];
    }
    CHECK(std::abs(res.objective - dual_obj) <=
          1e-6 * (1.0 + std::abs(res.objective)));

    // Complementary slackness: dual times row slack vanishes.
    for (int r = 0; r < spec.num_rows(); ++r) {
      double lhs = 0.0;
      for (const auto& [j, a] : spec.rows[r].terms) lhs += a * res.primal(j);
      const double slack = spec.rows[r].rhs - lhs;
      CHECK(std::abs(y(r) * slack) <= 1e-6 * (1.0 + std::abs(res.objective)));
    }

    // Row feasibility at the reported optimum.
    CHECK(testing::point_feasible(spec, res.primal, 1e-7 * 2));
  }
}

TEST_CASE("degenerate duplicated rows do not cycle") {
  LinearProgramSpec spec;
  for (int j = 0; j < 3; ++j) spec.add_variable(0.0, 1.0, -1.0);
  for (int r = 0; r < 6; ++r)
    spec.add_row({{0, 1.0}, {1, 1.0}, {2, 1.0}}, RowSense::le, 1.5);
  const auto res = solve_lp(spec);
  REQUIRE(res.status == Status::optimal);
  CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(-1.5, 1e-8));
}

TEST_CASE("solve is deterministic") {
  Rng rng(4242);
  const auto spec = random_lp(rng, 5, 7);
  const auto a = solve_lp(spec);
  const auto b = solve_lp(spec);
  REQUIRE(a.status == Status::optimal);
  CHECK(a.objective == b.objective);
  CHECK((a.primal - b.primal).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("solve_lp rejects binary specs") {
  LinearProgramSpec spec;
  spec.add_variable(0.0, 1.0, 1.0, true);
  CHECK_THROWS_AS(solve_lp(spec), Error);
}

TEST_CASE("fixed variables are respected") {
  LinearProgramSpec spec;
  spec.add_variable(2.0, 2.0, 1.0);
  spec.add_variable(0.0, 3.0, 1.0);
  spec.add_row({{0, 1.0}, {1, 1.0}}, RowSense::ge, 4.0);
  const auto res = solve_lp(spec);
  REQUIRE(res.status == Status::optimal);
  CHECK_THAT(res.primal(0), Catch::Matchers::WithinAbs(2.0, 1e-9));
  CHECK_THAT(res.objective, Catch::Matchers::WithinAbs(4.0, 1e-8));
}
