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
#include "torlab/circle.hpp"
#include "torlab/error.hpp"

using namespace torlab;

namespace {

DenjoyMap silver_map(int truncation = 2000) {
  return DenjoyMap(DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 4.0, truncation));
}

double frac(double x) { return x - std::floor(x); }

double circle_gap(double a, double b) {
  const double d = std::fabs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

}  // namespace

TEST_CASE("quadratic irrationals evaluate to their closed forms") {
  CHECK(static_cast<double>(QuadraticIrrational::golden().value()) == doctest::Approx((std::sqrt(5.0) - 1) / 2));
  CHECK(static_cast<double>(QuadraticIrrational::silver().value()) == doctest::Approx(std::sqrt(2.0) - 1));
}

TEST_CASE("rigid rotation estimate is within 1/n") {
  const double alpha = (std::sqrt(5.0) - 1) / 2;
  for (std::int64_t n : {100, 10'000, 1'000'000}) {
    const RotationEstimate r = rotation_number(CircleLift::rigid(alpha), n, 0.3);
    CHECK(std::fabs(r.estimate - alpha) <= 1.0 / n);
    CHECK(r.error_bound == doctest::Approx(1.0 / n));
  }
}

TEST_CASE("rotated lift adds a constant") {
  const CircleLift g = CircleLift::rigid(0.2).rotated(0.1);
  CHECK(g(0.5) == doctest::Approx(0.8));
  CHECK(g.inverse(0.8) == doctest::Approx(0.5));
}

TEST_CASE("Denjoy spec gap lengths sum to the requested total") {
  const DenjoySpec s = DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 4.0, 2000);
  CHECK(s.total_gap_length() == doctest::Approx(0.5));
  CHECK(s.gap_length(0) > s.gap_length(1));
  CHECK(s.gap_length(3) == doctest::Approx(s.gap_length(-3)));
  CHECK(s.tail_mass() > 0.0);
  CHECK(s.tail_mass() < 1e-9);
}

TEST_CASE("Denjoy spec rejects invalid parameters") {
  CHECK_THROWS_AS(DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 1.5, 4.0, 10), Error);
  CHECK_THROWS_AS(DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 0.5, 10), Error);
}

TEST_CASE("Denjoy map has the prescribed rotation number") {
  const DenjoyMap g = silver_map();
  const double alpha = std::sqrt(2.0) - 1;
  const RotationEstimate r = rotation_number(g.lift(), 100'000, 0.123);
  CHECK(std::fabs(r.estimate - alpha) <= 1.0 / 100'000 + 1e-6);
}

TEST_CASE("Denjoy map sends each gap onto the next") {
  const DenjoyMap g = silver_map();
  for (int n = -1998; n <= 1998; ++n) {
    const Gap& a = g.gap(n);
    const Gap& b = g.gap(n + 1);
    CHECK(circle_gap(g.lift()(a.left), b.left) < 1e-12);
    CHECK(circle_gap(g.lift()(a.midpoint()), b.midpoint()) < 1e-12);
    CHECK(circle_gap(g.lift()(a.right()), b.right()) < 1e-12);
  }
}

TEST_CASE("Denjoy lift is a monotone degree-one lift") {
  const DenjoyMap g = silver_map(500);
  double prev = g.lift()(0.0);
  for (int k = 1; k <= 4096; ++k) {
    const double x = k / 4096.0;
    const double y = g.lift()(x);
    CHECK(y >= prev);
    prev = y;
  }
  CHECK(g.lift()(1.25) == doctest::Approx(g.lift()(0.25) + 1.0));
  // Exact gap left endpoints are part of the closed gap.
  for (const Gap& gap : g.gaps_by_position()) {
    const double left = g.lift()(gap.left);
    CHECK(left <= g.lift()(gap.midpoint()));
  }
}

TEST_CASE("Denjoy inverse undoes the lift") {
  const DenjoyMap g = silver_map(500);
  for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) CHECK(g.lift().inverse(g.lift()(x)) == doctest::Approx(x).epsilon(1e-9));
}

TEST_CASE("gap location distinguishes gaps from the Cantor part") {
  const DenjoyMap g = silver_map(500);
  const Gap& gap = g.gap(0);
  const GapLocation in = g.locate(gap.midpoint());
  REQUIRE(in.in_gap());
  CHECK(*in.gap == 0);
  CHECK(in.distance_to_minimal_set == doctest::Approx(gap.length / 2));
  const GapLocation out = g.locate(g.cantor_point(0.3));
  CHECK_FALSE(out.in_gap());
}

TEST_CASE("gaps by position are sorted and disjoint") {
  const DenjoyMap g = silver_map(500);
  const auto gaps = g.gaps_by_position();
  REQUIRE(gaps.size() == 1001);
  for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k - 1].right() <= gaps[k].left + 1e-15);
  CHECK(g.enumerated_gap_length() + g.tail_mass() == doctest::Approx(0.5));
}

TEST_CASE("cantor points are fixed relative to rotation in the u coordinate") {
  const DenjoyMap g = silver_map();
  const double alpha = std::sqrt(2.0) - 1;
  for (double u : {0.1, 0.35, 0.8}) {
    CHECK(circle_gap(g.lift()(g.cantor_point(u)), g.cantor_point(frac(u + alpha))) < 1e-9);
  }
}

TEST_CASE("continued fraction of the golden mean is all ones") {
  const auto cf = continued_fraction((std::sqrt(5.0) - 1) / 2, 1000);
  REQUIRE(cf.size() >= 5);
  for (std::size_t k = 1; k < cf.size(); ++k) CHECK(cf[k] == 1);
}

TEST_CASE("independence heuristic flags rational relations") {
  const std::vector<double> dependent{0.25, 0.75};
  CHECK(rational_independence_heuristic(dependent, 10).suspicious);
  const std::vector<double> independent{(std::sqrt(5.0) - 1) / 2, std::sqrt(2.0) - 1};
  CHECK_FALSE(rational_independence_heuristic(independent, 50).suspicious);
}

TEST_CASE("error codes have names") {
  CHECK(std::string(error_code_name(ErrorCode::kConfig)) == "config");
}
