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
#include <random>
#include <vector>

#include "doctest.h"
#include "torlab/error.hpp"
#include "torlab/torus.hpp"

using namespace torlab;

namespace {

const double kGolden = (std::sqrt(5.0) - 1) / 2;
const double kSilver = std::sqrt(2.0) - 1;

struct Example {
  DenjoyMap g1{DenjoySpec::with_total_gap(QuadraticIrrational::golden(), 0.5, 4.0, 2000)};
  DenjoyMap g2{DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 4.0, 2000)};
  FiberFamily beta = build_example_fiber_family(g1, g2.lift(), 0.1, 0.5);
  SkewProduct f{beta, "skew-example"};
};

const Example& example() {
  static const Example e;
  return e;
}

}  // namespace

TEST_CASE("wrap and torus distance") {
  const TorusPoint z = wrap({1.25, -0.25});
  CHECK(z.s == doctest::Approx(0.25));
  CHECK(z.t == doctest::Approx(0.75));
  CHECK(torus_distance({0.05, 0.5}, {0.95, 0.5}) == doctest::Approx(0.1));
  CHECK(torus_distance({0.0, 0.0}, {0.5, 0.5}) == doctest::Approx(std::sqrt(0.5)));
  CHECK(circle_offset(0.75) == doctest::Approx(-0.25));
}

TEST_CASE("bump profiles") {
  CHECK(gap_bump(0.0) == doctest::Approx(0.0));
  CHECK(gap_bump(0.5) == doctest::Approx(1.0));
  CHECK(gap_bump(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(override_bump(0.0, 0.1) == doctest::Approx(1.0));
  CHECK(override_bump(0.1, 0.1) == 0.0);
}

TEST_CASE("rigid translation and its inverse") {
  const SkewProduct f = SkewProduct::rigid_translation(kGolden, kSilver);
  const TorusPoint z{0.2, 0.9};
  const TorusPoint w = f(z);
  CHECK(w.s == doctest::Approx(std::fmod(0.2 + kGolden, 1.0)));
  CHECK(w.t == doctest::Approx(std::fmod(0.9 + kSilver, 1.0)));
  CHECK(torus_distance(wrap(f.inverse(w)), z) < 1e-12);
}

TEST_CASE("fiber rotation vanishes on the minimal set and is bounded by the amplitude") {
  const Example& e = example();
  for (double u : {0.1, 0.4, 0.9}) CHECK(e.beta.rotation_at(e.g1.cantor_point(u)) == 0.0);
  const Gap& gap = e.g1.gap(0);
  CHECK(e.beta.rotation_at(gap.midpoint()) == doctest::Approx(0.1));
  CHECK(e.beta.rotation_at(e.g1.gap(2).midpoint()) == doctest::Approx(0.1 * 0.25));
  CHECK(e.beta.gap_amplitude(-3) == doctest::Approx(0.1 * 0.125));
}

TEST_CASE("rotation range brackets sampled rotations") {
  const Example& e = example();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double s0 = unit(rng);
    const double s1 = s0 + 0.02 * unit(rng);
    const auto [lo, hi] = e.beta.rotation_range(s0, s1);
    for (int q = 0; q <= 20; ++q) {
      const double th = e.beta.rotation_at(s0 + (s1 - s0) * q / 20.0);
      CHECK(th >= lo - 1e-15);
      CHECK(th <= hi + 1e-15);
    }
  }
}

TEST_CASE("enclosure contains sampled images") {
  const Example& e = example();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const LiftRect r{unit(rng), 0.0, unit(rng), 0.0};
    LiftRect box{r.s0, r.s0 + 1.0 / 64, r.t0, r.t0 + 1.0 / 64};
    const LiftRect out = e.f.enclosure(box);
    CHECK(out.s0 <= out.s1);
    CHECK(out.t0 <= out.t1);
    for (int a = 0; a <= 8; ++a) {
      for (int b = 0; b <= 8; ++b) {
        const TorusPoint z = e.f.lift({box.s0 + (box.s1 - box.s0) * a / 8, box.t0 + (box.t1 - box.t0) * b / 8});
        CHECK(z.s >= out.s0);
        CHECK(z.s <= out.s1);
        CHECK(z.t >= out.t0);
        CHECK(z.t <= out.t1);
      }
    }
  }
}

TEST_CASE("skew example inverse") {
  const Example& e = example();
  for (TorusPoint z : {TorusPoint{0.1, 0.2}, TorusPoint{0.55, 0.95}, TorusPoint{e.g1.gap(1).midpoint(), 0.3}}) {
    CHECK(torus_distance(wrap(e.f.inverse(e.f(z))), z) < 1e-9);
  }
}

TEST_CASE("rotation vector of the rigid translation") {
  const SkewProduct f = SkewProduct::rigid_translation(kGolden, kSilver);
  const RotationVectorEstimate r = rotation_vector(f, {0.3, 0.6}, 10'000);
  CHECK(std::fabs(r.rho_s - kGolden) <= 1.0 / 10'000);
  CHECK(std::fabs(r.rho_t - kSilver) <= 1.0 / 10'000);
  CHECK(r.error_bound == doctest::Approx(2.0 / 10'000));
}

TEST_CASE("rotation vector of the skew example is independent of the start") {
  const Example& e = example();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<RotationVectorEstimate> est;
  for (int k = 0; k < 4; ++k) est.push_back(rotation_vector(e.f, {unit(rng), unit(rng)}, 100'000));
  for (const auto& r : est) {
    CHECK(std::fabs(r.rho_s - kGolden) < 2e-3);
    CHECK(std::fabs(r.rho_t - kSilver) < 2e-3);
    CHECK(std::fabs(r.rho_s - est[0].rho_s) < 4e-5);
    CHECK(std::fabs(r.rho_t - est[0].rho_t) < 4e-5);
  }
}

TEST_CASE("fiber composition with zero rotation matches iteration") {
  const Example& e = example();
  const double s0 = e.g1.gap(0).midpoint();
  const CircleLift c = fiber_composition(e.beta, s0, 5, 0.0);
  TorusPoint z{s0, 0.37};
  for (int k = 0; k < 5; ++k) z = e.f.lift({z.s - std::floor(z.s), z.t});
  CHECK(c(0.37) == doctest::Approx(z.t).epsilon(1e-12));
}

TEST_CASE("return perturbation is local, small and returns") {
  const Example& e = example();
  const TorusPoint x{e.g1.cantor_point(0.3), 0.5};
  const ReturnPerturbation rp = build_return_perturbation(e.beta, x, 0.05, 0.1);
  CHECK(rp.k > rp.n0);
  CHECK(rp.theta == doctest::Approx(0.05));
  CHECK(rp.a < rp.b);
  CHECK(e.g1.locate(rp.a).in_gap());
  for (double u : {0.0, 0.2, 0.5, 0.7}) {
    const double s = e.g1.cantor_point(u);
    CHECK(rp.beta.eval(s, 0.3) == e.beta.eval(s, 0.3));
  }
  std::vector<double> samples;
  for (int k = 0; k < 2000; ++k) samples.push_back((k + 0.5) / 2000);
  for (const FiberOverride& o : rp.beta.overrides()) samples.push_back(o.center);
  CHECK(fiber_sup_distance(e.beta, rp.beta, samples) < 0.1);
  const SkewProduct fp(rp.beta);
  ReturnCheck rc = verify_return_along(fp, x, 0.05, rp.k, {rp.a, x.t}, {rp.b, x.t}, 1000);
  if (!rc.hit) rc = verify_return(fp, x, 0.05, rp.k, 1000);
  REQUIRE(rc.hit);
  CHECK(torus_distance(rc.landing, x) < 0.05);
  CHECK(torus_distance(rc.witness, x) < 0.05);
}

TEST_CASE("return perturbation preconditions") {
  const Example& e = example();
  const TorusPoint in_gap{e.g1.gap(0).midpoint(), 0.5};
  CHECK_THROWS_AS(build_return_perturbation(e.beta, in_gap, 0.05, 0.1), Error);
  const FiberFamily rigid(CircleLift::rigid(kGolden), CircleLift::rigid(kSilver));
  CHECK_THROWS_AS(build_return_perturbation(rigid, {0.1, 0.1}, 0.05, 0.1), Error);
}
