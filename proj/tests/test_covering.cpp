/*
 * Copyright 2026 The torlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <vector>

#include "doctest.h"
#include "torlab/covering.hpp"
#include "torlab/error.hpp"

using namespace torlab;

namespace {

BoxDomain annulus(int m, int rows) {
  BoxDomain d(m);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < m; ++j) d.insert(i, j);
  }
  return d;
}

}  // namespace

TEST_CASE("box domain basics") {
  BoxDomain d(8);
  CHECK(d.empty());
  d.insert(1, 2);
  d.insert(1, 2);
  d.insert(7, 7);
  CHECK(d.size() == 2);
  CHECK(d.contains(1, 2));
  CHECK(d.contains_id(d.id(7, 7)));
  CHECK_FALSE(d.contains(2, 1));
  CHECK(d.lifted_contains(1.0 / 8 + 0.01 + 3.0, 2.0 / 8 + 0.01 - 5.0));
  const BoxDomain t = d.translated(1, 1);
  CHECK(t.contains(2, 3));
  CHECK(t.contains(0, 0));
  const BoxDomain r = d.refined();
  CHECK(r.resolution() == 16);
  CHECK(r.size() == 8);
  CHECK(d.subset_of(d.united(t)));
  CHECK_FALSE(d.intersects(BoxDomain(8)));
  CHECK(d.components().size() == 2);
}

TEST_CASE("ball domain contains the cell of its center") {
  const BoxDomain b = BoxDomain::ball(64, {0.99, 0.01}, 0.05);
  CHECK(b.contains(63, 0));
  CHECK(b.contains(0, 63));
  CHECK(b.components().size() == 1);
}

TEST_CASE("domain text round trip and strict parsing") {
  BoxDomain d(10);
  for (int j = 2; j < 6; ++j) d.insert(3, j);
  d.insert(9, 0);
  const std::string text = serialize_domain(d);
  CHECK(text.rfind("boxdomain 10 5", 0) == 0);
  CHECK(parse_domain(text) == d);
  CHECK_THROWS_AS(parse_domain("boxdomain 10 6\n3 2 4\n9 0 1\n"), Error);
  CHECK_THROWS_AS(parse_domain("boxdomain 10 5\n9 0 1\n3 2 4\n"), Error);
  CHECK_THROWS_AS(parse_domain("domain 10 0\n"), Error);
}

TEST_CASE("subgroup basis is in Hermite form") {
  const std::vector<DeckVector> g{{2, 0}, {0, 3}, {1, 1}};
  const auto basis = subgroup_basis(g);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].p * basis[1].q == 1);
  const std::vector<DeckVector> single{{4, 6}, {2, 3}};
  const auto b1 = subgroup_basis(single);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0] == DeckVector{2, 3});
  CHECK(subgroup_basis(std::vector<DeckVector>{}).empty());
}

TEST_CASE("canonical domains classify correctly") {
  const int m = 32;
  const auto full = classify_essentiality(BoxDomain::full(m));
  CHECK(full.cls == Essentiality::kDoublyEssential);
  CHECK(full.basis == std::vector<DeckVector>{{1, 0}, {0, 1}});
  const auto ann = classify_essentiality(annulus(m, m / 2));
  CHECK(ann.cls == Essentiality::kSimplyEssential);
  CHECK(ann.basis == std::vector<DeckVector>{{0, 1}});
  BoxDomain disk(m);
  disk.insert(5, 5);
  disk.insert(5, 6);
  CHECK(classify_essentiality(disk).cls == Essentiality::kInessential);
  CHECK(classify_essentiality(disk).basis.empty());
}

TEST_CASE("diagonal annulus has a diagonal generator") {
  const int m = 16;
  BoxDomain d(m);
  for (int k = 0; k < m; ++k) {
    d.insert(k, k);
    d.insert(k, (k + 1) % m);
  }
  const auto r = classify_essentiality(d);
  CHECK(r.cls == Essentiality::kSimplyEssential);
  REQUIRE(r.basis.size() == 1);
  CHECK(std::abs(r.basis[0].p) == 1);
  CHECK(std::abs(r.basis[0].q) == 1);
}

TEST_CASE("classification does not depend on the spanning tree or the grid") {
  const BoxDomain d = random_doubly_essential(32, 5);
  const auto r = classify_essentiality(d);
  CHECK(r.cls == Essentiality::kDoublyEssential);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) CHECK(classify_essentiality(d, seed).basis == r.basis);
  CHECK(classify_essentiality(d.refined()).basis == r.basis);
  CHECK(classify_essentiality(d.translated(7, 3)).basis == r.basis);
}

TEST_CASE("doubly essential domains intersect; simply essential ones are refused") {
  for (std::uint64_t k = 0; k < 50; ++k) {
    CHECK(essential_intersection_check(random_doubly_essential(32, 2 * k), random_doubly_essential(32, 2 * k + 1)));
  }
  BoxDomain a(16), b(16);
  for (int j = 0; j < 16; ++j) {
    a.insert(0, j);
    b.insert(8, j);
  }
  CHECK_THROWS_AS(essential_intersection_check(a, b), Error);
}

TEST_CASE("capture diameter of the cross domain") {
  for (int m : {32, 64}) {
    const double k = compute_capture_diameter(cross_domain(m, 0.25));
    CHECK(std::fabs(k - std::sqrt(2.0) * 0.75) <= 1.5 / m);
  }
  CHECK(compute_capture_diameter(BoxDomain::full(16)) == 0.0);
  CHECK_THROWS_AS(compute_capture_diameter(annulus(16, 4)), Error);
}

TEST_CASE("capture diameter shrinks as the domain grows") {
  const BoxDomain cross = cross_domain(32, 0.25);
  const double k = compute_capture_diameter(cross);
  CHECK(compute_capture_diameter(cross.united(random_doubly_essential(32, 9))) <= k);
  CHECK(compute_capture_diameter(cross_domain(32, 0.5)) < k);
}

TEST_CASE("paths longer than the capture diameter meet the lifted domain") {
  const BoxDomain cross = cross_domain(32, 0.25);
  const double k = compute_capture_diameter(cross);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto path = random_polyline(k + 0.1, s);
    double diam = 0.0;
    for (const auto& p : path) {
      for (const auto& q : path) diam = std::max(diam, std::hypot(p.s - q.s, p.t - q.t));
    }
    CHECK(diam >= k + 0.1);
    CHECK(lifted_path_meets(cross, path));
  }
  // A short path inside a complement square misses.
  const std::vector<TorusPoint> inside{{0.5, 0.5}, {0.55, 0.55}};
  CHECK_FALSE(lifted_path_meets(cross, inside));
}

TEST_CASE("cells meeting a rectangle") {
  std::vector<std::uint32_t> out;
  cells_meeting(4, LiftRect{0.3, 0.4, 0.3, 0.4}, 0.0, out);
  CHECK(out == std::vector<std::uint32_t>{1 * 4 + 1});
  cells_meeting(4, LiftRect{0.25, 0.25, 0.6, 0.6}, 0.0, out);
  CHECK(out.size() == 2);  // closed cells on both sides of s = 1/4
  cells_meeting(4, LiftRect{-0.1, 0.05, 0.6, 0.65}, 0.0, out);
  CHECK(out.size() == 2);
  cells_meeting(4, LiftRect{0.0, 2.0, 0.6, 0.6}, 0.0, out);
  CHECK(out.size() == 4);
}

TEST_CASE("forward invariant hull of a rigid translation is everything") {
  const SkewProduct f = SkewProduct::rigid_translation((std::sqrt(5.0) - 1) / 2, std::sqrt(2.0) - 1);
  BoxDomain u(16);
  u.insert(0, 0);
  const BoxDomain hull = forward_invariant_hull(f, u, 1000);
  CHECK(hull.size() == 256);
}
