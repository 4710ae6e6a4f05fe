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

#include "support/random_instances.hpp"
#include "wdro/model/box.hpp"
#include "wdro/model/instance.hpp"

using namespace wdro;

namespace {
Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("unit square vertices") {
  BoxSet box(vec2(0, 0), vec2(1, 1));
  std::vector<Vec> verts;
  for (const Vec& v : box_vertices(box)) verts.push_back(v);
  REQUIRE(verts.size() == 4);
  // Mask order: bit 0 drives coordinate 0.
  CHECK(verts[0].isApprox(vec2(0, 0)));
  CHECK(verts[1].isApprox(vec2(1, 0)));
  CHECK(verts[2].isApprox(vec2(0, 1)));
  CHECK(verts[3].isApprox(vec2(1, 1)));
}

TEST_CASE("degenerate coordinate collapses enumeration") {
  BoxSet box(vec2(1, 0), vec2(1, 2));
  std::vector<Vec> verts;
  for (const Vec& v : box_vertices(box)) verts.push_back(v);
  REQUIRE(verts.size() == 2);
  CHECK(verts[0].isApprox(vec2(1, 0)));
  CHECK(verts[1].isApprox(vec2(1, 2)));
  CHECK(box.vertex_count() == 2);
}

TEST_CASE("random box vertices are extreme and counted") {
  Rng rng(11);
  const BoxSet box = testing::random_box(rng, 4);
  int count = 0;
  for (const Vec& v : box_vertices(box)) {
    ++count;
    for (int j = 0; j < 4; ++j) {
      const bool at_bound = v(j) == box.lower()(j) || v(j) == box.upper()(j);
      CHECK(at_bound);
    }
  }
  CHECK(count == 16);
}

TEST_CASE("vertex cap refuses oversized enumerations") {
  const int m = 20;
  BoxSet box(Vec::Zero(m), Vec::Ones(m));
  CHECK_THROWS_AS(box_vertices(box, 1 << 10), Error);
}

TEST_CASE("box intersection") {
  Vec a(1), b(1), c(1), d(1);
  a << 0;
  b << 2;
  c << 1;
  d << 3;
  const BoxSet left(a, b), right(c, d);
  const BoxSet inter = intersect_boxes(left, right);
  CHECK(inter.lower()(0) == 1.0);
  CHECK(inter.upper()(0) == 2.0);

  const BoxSet self = intersect_boxes(left, left);
  CHECK(self.lower()(0) == left.lower()(0));
  CHECK(self.upper()(0) == left.upper()(0));

  Vec e(1), f(1);
  e << 2.5;
  f << 3.0;
  CHECK_THROWS_AS(intersect_boxes(left, BoxSet(e, f)), Error);
}

TEST_CASE("intersection membership agrees with both boxes") {
  Rng rng(12);
  const BoxSet b1 = testing::random_box(rng, 3);
  Vec lo = b1.lower(), hi = b1.upper();
  // Overlapping second box.
  for (int j = 0; j < 3; ++j) {
    lo(j) += rng.uniform(-0.3, 0.2);
    hi(j) += rng.uniform(-0.2, 0.3);
    if (lo(j) > hi(j)) std::swap(lo(j), hi(j));
  }
  const BoxSet b2(lo, hi);
  const BoxSet inter = intersect_boxes(b1, b2);
  for (int trial = 0; trial < 1000; ++trial) {
    Vec x(3);
    for (int j = 0; j < 3; ++j) x(j) = rng.uniform(-3.0, 3.0);
    CHECK(inter.contains(x) == (b1.contains(x) && b2.contains(x)));
  }
}

TEST_CASE("sample mean") {
  BoxSet box(Vec::Zero(2), vec2(2, 4));
  SECTION("single sample") {
    Mat pts(1, 2);
    pts << 1.5, 2.5;
    const SampleSet s(pts, box);
    CHECK(sample_mean(s).isApprox(vec2(1.5, 2.5)));
  }
  SECTION("midpoint") {
    Mat pts(2, 2);
    pts << 0, 0, 2, 4;
    const SampleSet s(pts, box);
    CHECK(sample_mean(s).isApprox(vec2(1, 2)));
  }
  SECTION("random summation order") {
    Rng rng(5);
    Mat pts(50, 2);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 2; ++j)
        pts(i, j) = rng.uniform(0.0, j == 0 ? 2.0 : 4.0);
    const SampleSet s(pts, box);
    const Vec mean = sample_mean(s);
    Vec brute = Vec::Zero(2);
    for (int i = 49; i >= 0; --i) brute += pts.row(i).transpose();
    brute /= 50.0;
    CHECK((mean - brute).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(s.box_hull().contains(mean));
  }
}

TEST_CASE("sample ingestion") {
  BoxSet box(Vec::Zero(2), Vec::Ones(2));
  Mat out(1, 2);
  out << 0.5, 1.4;
  CHECK_THROWS_AS(SampleSet(out, box), Error);
  const SampleSet clamped(out, box, SampleIngest::clamp);
  CHECK(clamped.point(0)(1) == 1.0);
  Mat dust(1, 2);
  dust << 0.5, 1.0 + 1e-12;  // rounding dust snaps onto the bound
  CHECK(SampleSet(dust, box).point(0)(1) == 1.0);
  Mat wrong(1, 3);
  wrong << 0.1, 0.2, 0.3;
  CHECK_THROWS_AS(SampleSet(wrong, box), Error);
}

TEST_CASE("policy structure identity and linearity") {
  const auto ps = PolicyStructure::identity(2, 3);
  REQUIRE(ps.parameter_count() == 8);
  Rng rng(9);
  Vec t1(8), t2(8);
  for (int i = 0; i < 8; ++i) {
    t1(i) = rng.uniform(-2, 2);
    t2(i) = rng.uniform(-2, 2);
  }
  const auto p1 = ps.assemble(t1);
  const auto p2 = ps.assemble(t2);
  const auto sum = ps.assemble(t1 + t2);
  CHECK((sum.A - p1.A - p2.A).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((sum.a - p1.a - p2.a).lpNorm<Eigen::Infinity>() <= 1e-14);
  const auto zero = ps.assemble(Vec::Zero(8));
  CHECK(zero.A.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(zero.a.lpNorm<Eigen::Infinity>() == 0.0);
  // Identity reproduces an unrestricted policy entry for entry.
  CHECK(p1.A(0, 0) == t1(0));
  CHECK(p1.a(0) == t1(3));
  CHECK(p1.A(1, 2) == t1(6));
}

TEST_CASE("tied structure reuses parameters across entries") {
  // One slope parameter shared by two columns plus an intercept.
  std::vector<PolicyStructure::Term> terms = {
      {PolicyStructure::entry_of(0, 0, 2), 0, 1.0},
      {PolicyStructure::entry_of(0, 1, 2), 0, 1.0},
      {PolicyStructure::entry_of(0, 2, 2), 1, 1.0},
  };
  const PolicyStructure ps(1, 2, 2, terms);
  Vec theta(2);
  theta << 2.5, -1.0;
  const auto pol = ps.assemble(theta);
  CHECK(pol.A(0, 0) == 2.5);
  CHECK(pol.A(0, 1) == 2.5);
  CHECK(pol.a(0) == -1.0);
}

TEST_CASE("instance validation names the offending field") {
  Rng rng(21);
  testing::InstanceConfig cfg;
  auto inst = testing::random_instance(rng, cfg);
  inst.validate();

  SECTION("c1 length") {
    auto bad = inst;
    bad.c1 = Vec::Zero(inst.n1() + 1);
    REQUIRE_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("c1"));
  }
  SECTION("c2 length") {
    auto bad = inst;
    bad.c2 = Vec::Zero(inst.n2() + 2);
    REQUIRE_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("c2"));
  }
  SECTION("recourse width") {
    auto bad = inst;
    bad.recourse.A3 = Mat::Zero(inst.L(), inst.m() + 1);
    REQUIRE_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("A3"));
  }
  SECTION("first-stage width") {
    auto bad = inst;
    bad.first_stage.G = Mat::Zero(2, inst.n1() + 3);
    bad.first_stage.g = Vec::Zero(2);
    REQUIRE_THROWS_WITH(bad.validate(),
                        Catch::Matchers::ContainsSubstring("first-stage"));
  }
  SECTION("negative epsilon") {
    auto bad = inst;
    bad.epsilon = -0.5;
    REQUIRE_THROWS_WITH(bad.validate(),
                        Catch::Matchers::ContainsSubstring("epsilon"));
  }
}

TEST_CASE("first-stage decision split round trip") {
  Vec x(5);
  x << 1, 0, 1, 0.25, -0.5;
  const auto d = FirstStageDecision::from_flat(x, 3);
  CHECK(d.binary.size() == 3);
  CHECK(d.continuous.size() == 2);
  CHECK((d.flat() - x).lpNorm<Eigen::Infinity>() == 0.0);
}
