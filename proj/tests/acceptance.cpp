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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "torlab/chain.hpp"
#include "torlab/circle.hpp"
#include "torlab/covering.hpp"
#include "torlab/error.hpp"
#include "torlab/torus.hpp"

using namespace torlab;

namespace {

const double kGolden = (std::sqrt(5.0) - 1) / 2;
const double kSilver = std::sqrt(2.0) - 1;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

struct Maps {
  DenjoyMap g1{DenjoySpec::with_total_gap(QuadraticIrrational::golden(), 0.5, 4.0, 2000)};
  DenjoyMap g2{DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 4.0, 2000)};
  FiberFamily beta = build_example_fiber_family(g1, g2.lift(), 0.1, 0.5);
  SkewProduct skew{beta, "skew-example"};
  SkewProduct product = SkewProduct::product(g1.lift(), g2.lift(), "denjoy-product");
  SkewProduct rigid = SkewProduct::rigid_translation(kGolden, kSilver);
};

const Maps& maps() {
  static const Maps m;
  return m;
}

double frac(double x) { return x - std::floor(x); }

double circle_gap(double a, double b) {
  const double d = std::fabs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

Verdict rotation_oracle() {
  std::string detail;
  bool ok = true;
  for (std::int64_t n : {100, 10'000, 1'000'000}) {
    const auto t0 = std::chrono::steady_clock::now();
    const RotationEstimate r = rotation_number(CircleLift::rigid(kGolden), n, 0.0);
    const double dt = seconds_since(t0);
    const double err = std::fabs(r.estimate - kGolden);
    ok = ok && err <= 1.0 / n && (n < 1'000'000 || dt < 2.0);
    detail += fmt("n=%lld err=%.2e (%.3fs) ", static_cast<long long>(n), err, dt);
  }
  return {ok, detail};
}

Verdict denjoy_construction() {
  const DenjoyMap g(DenjoySpec::with_total_gap(QuadraticIrrational::silver(), 0.5, 4.0, 2000));
  const RotationEstimate r = rotation_number(g.lift(), 100'000, 0.0);
  const double err = std::fabs(r.estimate - kSilver);
  double worst_shift = 0.0;
  for (int n = -1998; n <= 1998; ++n) {
    const Gap& a = g.gap(n);
    const Gap& b = g.gap(n + 1);
    worst_shift = std::max({worst_shift, circle_gap(g.lift()(a.left), b.left),
                            circle_gap(g.lift()(a.right()), b.right()),
                            circle_gap(g.lift()(a.midpoint()), b.midpoint())});
  }
  const bool ok = err <= 1.0 / 100'000 + 1e-6 && worst_shift < 1e-12;
  return {ok, fmt("rotation err=%.2e, worst gap shift mismatch=%.2e over |n|<1999", err, worst_shift)};
}

Verdict rotation_vector_skew() {
  const Maps& m = maps();
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<RotationVectorEstimate> est;
  for (int k = 0; k < 10; ++k) est.push_back(rotation_vector(m.skew, {unit(rng), unit(rng)}, 1'000'000));
  double err = 0.0, spread = 0.0;
  for (const auto& a : est) {
    err = std::max({err, std::fabs(a.rho_s - kGolden), std::fabs(a.rho_t - kSilver)});
    for (const auto& b : est) spread = std::max({spread, std::fabs(a.rho_s - b.rho_s), std::fabs(a.rho_t - b.rho_t)});
  }
  // Two estimates each within 2/n of the common limit differ by at most 4/n;
  // 1e-9 covers floating-point accumulation over 10^6 steps.
  const double allowed = 4e-6 + 1e-9;
  return {err < 2e-3 && spread <= allowed,
          fmt("max |estimate - (rho1, rho2)|=%.2e, mutual spread=%.2e (allowed %.2e)", err, spread, allowed)};
}

Verdict chain_transitivity() {
  const Maps& m = maps();
  const auto t0 = std::chrono::steady_clock::now();
  const ChainReport a = chain_transitivity_report(m.skew, 256, 2.0 / 256, 20, 1);
  const ChainReport b = chain_transitivity_report(m.product, 256, 2.0 / 256, 20, 2);
  const double dt = seconds_since(t0);
  return {a.connected == 20 && b.connected == 20 && dt < 60.0,
          fmt("skew %d/20, product %d/20, %.1fs", a.connected, b.connected, dt)};
}

Verdict two_jump() {
  const Maps& m = maps();
  std::string detail;
  bool ok = true;
  for (const SkewProduct* f : {&m.rigid, &m.skew}) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TwoJumpBudgets b;
    const NonwanderingApprox omega = nonwandering_approx(*f, b.omega_grid, b.omega_horizon);
    int good = 0;
    std::int64_t longest = 0;
    for (int k = 0; k < 10; ++k) {
      const TorusPoint x{unit(rng), unit(rng)};
      const TorusPoint y{unit(rng), unit(rng)};
      const TwoJumpResult r = two_jump_pseudo_orbit(*f, x, y, 0.05, b, &omega);
      if (r.status != SearchStatus::kSuccess) continue;
      const PseudoOrbitCheck c = validate_pseudo_orbit(*f, r.orbit);
      const PseudoOrbit back = parse_pseudo_orbit(serialize_pseudo_orbit(r.orbit));
      const bool fits = r.connector_steps <= 1'000'000;
      if (c.valid && c.jump_count <= 2 && fits && validate_pseudo_orbit(*f, back).valid) ++good;
      longest = std::max(longest, r.connector_steps);
    }
    ok = ok && good == 10;
    detail += fmt("%s %d/10 (longest connector %lld) ", f->label().c_str(), good, static_cast<long long>(longest));
  }
  return {ok, detail};
}

Verdict wandering_with_chains() {
  const Maps& m = maps();
  const NonwanderingApprox nw = nonwandering_approx(m.product, 64, 10'000);
  const ChainReport r = chain_transitivity_report(m.product, 256, 2.0 / 256, 20, 2);
  return {nw.nonreturning_count() >= 1 && r.connected == 20,
          fmt("%zu certified nonreturning boxes of 4096; chain pairs %d/20", nw.nonreturning_count(), r.connected)};
}

Verdict essentiality() {
  const int m = 64;
  BoxDomain annulus(m);
  for (int i = 0; i < m / 2; ++i) {
    for (int j = 0; j < m; ++j) annulus.insert(i, j);
  }
  BoxDomain disk = BoxDomain::ball(m, {0.4, 0.6}, 0.1);
  struct Case {
    const BoxDomain* d;
    Essentiality expected;
  };
  const BoxDomain full = BoxDomain::full(m);
  bool ok = true;
  int stable = 0, cases = 0;
  for (const Case& c : {Case{&full, Essentiality::kDoublyEssential}, Case{&annulus, Essentiality::kSimplyEssential},
                        Case{&disk, Essentiality::kInessential}}) {
    const EssentialityResult r = classify_essentiality(*c.d);
    ok = ok && r.cls == c.expected;
    bool s = classify_essentiality(c.d->refined()).basis == r.basis;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) s = s && classify_essentiality(*c.d, seed).basis == r.basis;
    stable += s ? 1 : 0;
    ++cases;
  }
  int intersect = 0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const BoxDomain u = random_doubly_essential(m, 1000 + 2 * k);
    const BoxDomain v = random_doubly_essential(m, 1001 + 2 * k);
    const bool both = classify_essentiality(u).cls == Essentiality::kDoublyEssential &&
                      classify_essentiality(v).cls == Essentiality::kDoublyEssential;
    if (both && essential_intersection_check(u, v)) ++intersect;
  }
  for (std::uint64_t k = 0; k < 20; ++k) {
    const BoxDomain u = random_doubly_essential(m, 5000 + k);
    const EssentialityResult r = classify_essentiality(u);
    bool s = classify_essentiality(u.refined()).basis == r.basis;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) s = s && classify_essentiality(u, seed).basis == r.basis;
    stable += s ? 1 : 0;
    ++cases;
  }
  return {ok && intersect == 1000 && stable == cases,
          fmt("canonical classes %s, random pairs intersecting %d/1000, stable %d/%d", ok ? "ok" : "wrong",
              intersect, stable, cases)};
}

Verdict capture_diameter() {
  const int m = 64;
  const BoxDomain cross = cross_domain(m, 0.25);
  const double k = compute_capture_diameter(cross);
  const double expected = std::sqrt(2.0) * 0.75;
  int met = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto path = random_polyline(k + 0.1, 900 + s);
    if (lifted_path_meets(cross, path)) ++met;
  }
  return {std::fabs(k - expected) <= 1.5 / m && met == 100,
          fmt("K=%.6f expected %.6f +- %.4f; paths meeting %d/100", k, expected, 1.5 / m, met)};
}

Verdict perturbation_claim() {
  const Maps& m = maps();
  const TorusPoint x{m.g1.cantor_point(0.3), 0.5};
  const ReturnPerturbation rp = build_return_perturbation(m.beta, x, 0.05, 0.1);
  const SkewProduct fp(rp.beta, "perturbed");
  ReturnCheck rc = verify_return_along(fp, x, 0.05, rp.k, {rp.a, x.t}, {rp.b, x.t}, 1000);
  if (!rc.hit) rc = verify_return(fp, x, 0.05, rp.k, 1000);
  bool witness_ok = false;
  if (rc.hit) {
    TorusPoint z = rc.witness;
    for (std::int64_t j = 0; j < rp.k; ++j) z = fp(z);
    witness_ok = torus_distance(rc.witness, x) < 0.05 && torus_distance(z, x) < 0.05;
  }
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double mismatch = 0.0;
  for (int q = 0; q < 100; ++q) {
    const double s = m.g1.cantor_point(unit(rng));
    const double t = unit(rng);
    mismatch = std::max(mismatch, std::fabs(m.beta.eval(s, t) - rp.beta.eval(s, t)));
  }
  std::vector<double> samples;
  for (int q = 0; q < 10'000; ++q) samples.push_back((q + 0.5) / 10'000);
  for (const FiberOverride& o : rp.beta.overrides()) samples.push_back(o.center);
  const double sup = fiber_sup_distance(m.beta, rp.beta, samples);
  return {witness_ok && mismatch == 0.0 && sup < 0.1,
          fmt("k=%lld witness %s, mismatch on M1=%.1e, sup distance=%.4f", static_cast<long long>(rp.k),
              witness_ok ? "confirmed" : "missing", mismatch, sup)};
}

Verdict weak_transitivity() {
  const Maps& m = maps();
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int confirmed = 0;
  std::int64_t worst = 0;
  for (int k = 0; k < 10; ++k) {
    const TorusPoint p{m.g1.cantor_point(unit(rng)), m.g2.cantor_point(unit(rng))};
    const TorusPoint q{m.g1.cantor_point(unit(rng)), m.g2.cantor_point(unit(rng))};
    const BoxDomain u = BoxDomain::ball(128, p, 0.05);
    const BoxDomain v = BoxDomain::ball(128, q, 0.05);
    const WeakTransitivityResult r = weak_transitivity_check(m.skew, u, v);
    if (!r.n || *r.n > 100'000) continue;
    TorusPoint z = r.witness;
    for (std::int64_t j = 0; j < *r.n; ++j) z = m.skew(z);
    if (u.lifted_contains(r.witness.s, r.witness.t) && v.lifted_contains(z.s, z.t)) ++confirmed;
    worst = std::max(worst, *r.n);
  }
  return {confirmed == 10, fmt("%d/10 pairs confirmed, largest n=%lld", confirmed, static_cast<long long>(worst))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"rotation number oracle on the golden rigid rotation", rotation_oracle},
      {"Denjoy construction: rotation number and gap shift", denjoy_construction},
      {"rotation vector of the skew example from 10 starts", rotation_vector_skew},
      {"chain transitivity of the skew example and the Denjoy product", chain_transitivity},
      {"pseudo-orbits with at most two jumps", two_jump},
      {"certified wandering boxes alongside chain transitivity", wandering_with_chains},
      {"essentiality classification and intersections", essentiality},
      {"capture diameter of the cross domain", capture_diameter},
      {"local return perturbation", perturbation_claim},
      {"weak transitivity of the skew example", weak_transitivity},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const Error& e) {
      v = {false, std::string(error_code_name(e.code())) + ": " + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s [%zu] %s: %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
