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
#include "torlab/chain.hpp"
#include "torlab/error.hpp"

using namespace torlab;

namespace {

const double kGolden = (std::sqrt(5.0) - 1) / 2;
const double kSilver = std::sqrt(2.0) - 1;

struct Example {
  DenjoyMap g1{DenjoySpec::with_total_gap(QuadraticIrrational::golden(), 0.5, 4.0, 2000)};
  DenjoyMap g2{DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 4.0, 2000)};
  SkewProduct f{build_example_fiber_family(g1, g2.lift(), 0.1, 0.5), "skew-example"};
  SkewProduct product = SkewProduct::product(g1.lift(), g2.lift());
};

const Example& example() {
  static const Example e;
  return e;
}

}  // namespace

TEST_CASE("box indexing") {
  CHECK(box_of(4, {0.3, 0.8}) == 1 * 4 + 3);
  CHECK(box_of(4, {1.0, -0.1}) == 0 * 4 + 3);
  const LiftRect r = box_rect(4, 6);
  CHECK(r.s0 == 0.25);
  CHECK(r.t0 == 0.5);
  CHECK(r.s1 == 0.5);
}

TEST_CASE("graph from edges, paths and components") {
  const TransitionGraph g = graph_from_edges(2, 1.0, {{0, 1}, {1, 2}, {2, 0}, {3, 3}, {2, 3}});
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 5);
  CHECK(g.has_edge(2, 3));
  CHECK_FALSE(g.has_edge(3, 2));
  const std::uint32_t from[] = {0};
  const std::uint32_t to[] = {3};
  const auto path = chain_path(g, from, to);
  REQUIRE(path.has_value());
  CHECK(path->size() == 4);
  CHECK_FALSE(chain_path(g, to, from).has_value());
  const std::uint32_t self[] = {0};
  const auto loop = chain_path(g, self, self);
  REQUIRE(loop.has_value());
  CHECK(loop->size() == 4);
  const SccDecomposition scc = strongly_connected_components(g);
  CHECK(scc.count == 2);
  CHECK(scc.component[0] == scc.component[1]);
  CHECK(scc.component[0] != scc.component[3]);
  CHECK(scc.recurrent[scc.component[3]]);
}

TEST_CASE("rigid translation graph has a bounded out-degree") {
  const SkewProduct f = SkewProduct::rigid_translation(kGolden, kSilver);
  const int m = 32;
  const TransitionGraph g = build_transition_graph(f, m, 2.0 / m);
  for (std::uint32_t b = 0; b < g.node_count(); ++b) {
    const auto succ = g.successors(b);
    CHECK(succ.size() >= 1);
    CHECK(succ.size() <= 36);
    const LiftRect r = box_rect(m, b);
    CHECK(g.has_edge(b, box_of(m, f({0.5 * (r.s0 + r.s1), 0.5 * (r.t0 + r.t1)}))));
  }
  CHECK_THROWS_AS(build_transition_graph(f, m, 0.5 / m), Error);
}

TEST_CASE("sampled graph is contained in the outer-bound graph") {
  const Example& e = example();
  const TransitionGraph outer = build_transition_graph(e.f, 32, 2.0 / 32);
  const TransitionGraph sampled = build_transition_graph(e.f, 32, 2.0 / 32, EnclosureMode::kSampled, 4);
  for (std::uint32_t b = 0; b < sampled.node_count(); ++b) {
    for (std::uint32_t c : sampled.successors(b)) CHECK(outer.has_edge(b, c));
  }
}

TEST_CASE("skew example is chain transitive on a coarse grid") {
  const Example& e = example();
  const ChainReport r = chain_transitivity_report(e.f, 64, 2.0 / 64, 10, 1);
  CHECK(r.connected == 10);
  CHECK(r.single_recurrent_component);
  CHECK(r.chain_recurrent_boxes == 64 * 64);
  CHECK(r.fraction_connected() == 1.0);
  CHECK(export_edge_list(build_transition_graph(e.f, 4, 0.5)).rfind("edges 4 ", 0) == 0);
}

TEST_CASE("nonwandering approximation contracts") {
  const Example& e = example();
  const NonwanderingApprox rigid =
      nonwandering_approx(SkewProduct::rigid_translation(kGolden, kSilver), 16, 1000);
  CHECK(rigid.nonreturning_count() == 0);
  const NonwanderingApprox prod = nonwandering_approx(e.product, 32, 2000);
  CHECK(prod.nonreturning_count() >= 1);
  // Longer horizons can only add returning boxes.
  const NonwanderingApprox shorter = nonwandering_approx(e.product, 32, 500);
  CHECK(prod.nonreturning_domain().subset_of(shorter.nonreturning_domain()));
  for (std::uint32_t b = 0; b < prod.returning.size(); b += 37) {
    CHECK(box_return_time(e.product, 32, b, 2000) == prod.return_time[b]);
  }
  const TorusPoint z{e.g1.cantor_point(0.2), e.g2.cantor_point(0.7)};
  CHECK(prod.distance_to_returning(z, 0.1) == 0.0);
}

TEST_CASE("pseudo-orbit validation and text round trip") {
  const SkewProduct f = SkewProduct::rigid_translation(0.25, 0.5);
  PseudoOrbit po;
  po.epsilon = 0.1;
  po.points = {{0.0, 0.0}, {0.25, 0.5}, {0.55, 0.0}, {0.8, 0.5}};
  po.jumps = {1};
  const PseudoOrbitCheck c = validate_pseudo_orbit(f, po);
  CHECK(c.valid);
  CHECK(c.jump_count == 1);
  CHECK(c.jumps == std::vector<std::size_t>{1});
  CHECK(c.max_step_error == doctest::Approx(0.05));
  const PseudoOrbit back = parse_pseudo_orbit(serialize_pseudo_orbit(po));
  CHECK(back.points.size() == 4);
  CHECK(back.points[2].s == po.points[2].s);
  CHECK(back.epsilon == po.epsilon);
  po.points[2] = {0.7, 0.0};
  CHECK_FALSE(validate_pseudo_orbit(f, po).valid);
  CHECK_THROWS_AS(parse_pseudo_orbit("pseudo-orbit\nepsilon 0.1\nn 3\njumps 0\n0 0\n"), Error);
}

TEST_CASE("two-jump pseudo-orbits for rigid and skew maps") {
  const Example& e = example();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const SkewProduct* f : {&e.f}) {
    for (int k = 0; k < 3; ++k) {
      const TorusPoint x{unit(rng), unit(rng)};
      const TorusPoint y{unit(rng), unit(rng)};
      const TwoJumpResult r = two_jump_pseudo_orbit(*f, x, y, 0.05);
      REQUIRE(r.status == SearchStatus::kSuccess);
      const PseudoOrbitCheck c = validate_pseudo_orbit(*f, r.orbit);
      CHECK(c.valid);
      CHECK(c.jump_count <= 2);
      CHECK(torus_distance(r.orbit.points.front(), x) == 0.0);
      CHECK(torus_distance(r.orbit.points.back(), y) < 1e-12);
    }
  }
  const SkewProduct rigid = SkewProduct::rigid_translation(kGolden, kSilver);
  const TwoJumpResult r = two_jump_pseudo_orbit(rigid, {0.1, 0.1}, {0.7, 0.4}, 0.05);
  REQUIRE(r.status == SearchStatus::kSuccess);
  CHECK(validate_pseudo_orbit(rigid, r.orbit).jump_count <= 2);
}

TEST_CASE("two-jump search reports exhaustion for a resonant translation") {
  const SkewProduct f = SkewProduct::rigid_translation(0.5, 0.0);
  TwoJumpBudgets b;
  b.omega_grid = 8;
  b.omega_horizon = 10;
  b.n0_cap = 100;
  b.orbit_precheck = 100;
  b.orbit_cap = 1000;
  b.max_level = 3;
  const TwoJumpResult r = two_jump_pseudo_orbit(f, {0.1, 0.1}, {0.3, 0.6}, 0.05, b);
  CHECK(r.status != SearchStatus::kSuccess);
  CHECK(r.near_miss > 0.0);
  CHECK(std::string(search_status_name(r.status)).size() > 0);
}

TEST_CASE("weak transitivity on the skew example") {
  const Example& e = example();
  const TorusPoint p{e.g1.cantor_point(0.1), e.g2.cantor_point(0.2)};
  const TorusPoint q{e.g1.cantor_point(0.6), e.g2.cantor_point(0.9)};
  const BoxDomain u = BoxDomain::ball(64, p, 0.05);
  const BoxDomain v = BoxDomain::ball(64, q, 0.05);
  WeakTransitivityBudgets b;
  b.omega_horizon = 2000;
  const WeakTransitivityResult r = weak_transitivity_check(e.f, u, v, b);
  REQUIRE(r.n.has_value());
  CHECK(*r.n >= 1);
  CHECK(*r.n >= r.enclosure_lower_bound);
  CHECK(u.lifted_contains(r.witness.s, r.witness.t));
  CHECK(v.lifted_contains(r.landing.s, r.landing.t));
  TorusPoint z = r.witness;
  for (std::int64_t k = 0; k < *r.n; ++k) z = e.f(z);
  CHECK(torus_distance(z, r.landing) < 1e-9);
}

TEST_CASE("two-jump results do not depend on the thread count") {
  const Example& e = example();
  TwoJumpBudgets one;
  TwoJumpBudgets three;
  three.threads = 3;
  const TwoJumpResult a = two_jump_pseudo_orbit(e.f, {0.09, 0.096}, {0.13, 0.69}, 0.05, one);
  const TwoJumpResult b = two_jump_pseudo_orbit(e.f, {0.09, 0.096}, {0.13, 0.69}, 0.05, three);
  CHECK(a.status == b.status);
  CHECK(a.connector_steps == b.connector_steps);
  CHECK(a.samples == b.samples);
  CHECK(a.evaluations == b.evaluations);
  CHECK(serialize_pseudo_orbit(a.orbit) == serialize_pseudo_orbit(b.orbit));
}
