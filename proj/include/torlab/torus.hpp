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

// Skew products (s,t) -> (g1(s), beta(s)(t)) on the torus, their plane
// lifts, rotation vectors, and the localized fiber perturbation that forces
// a wandering gap box to return.

#ifndef TORLAB_TORUS_HPP
#define TORLAB_TORUS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torlab/circle.hpp"

namespace torlab {

struct TorusPoint {
  double s = 0.0;
  double t = 0.0;
};

TorusPoint wrap(TorusPoint z);
// Euclidean distance on the flat torus R^2 / Z^2.
double torus_distance(TorusPoint a, TorusPoint b);
// Signed representative of x in [-1/2, 1/2).
double circle_offset(double x);

// Axis-aligned rectangle in plane (lift) coordinates.
struct LiftRect {
  double s0 = 0.0, s1 = 0.0;
  double t0 = 0.0, t1 = 0.0;
};

// Extra rotation added to the fiber over s: beta'(s) = R_{angle * profile}
// composed after beta(s), supported on (center - radius, center + radius).
struct FiberOverride {
  double center = 0.0;
  double radius = 0.0;
  double angle = 0.0;
};

// sin^2(pi phi): smooth on [0,1], zero at both gap endpoints, 1 at the middle.
double gap_bump(double phi);
// cos^2(pi d / 2r) on |d| < r, zero outside.
double override_bump(double d, double radius);

// s -> beta(s) = R_{theta(s)} o core. Over a Denjoy base, theta(s) is
// theta_n * gap_bump on gap I_n with theta_n = amplitude * decay^|n|, plus
// any overrides; theta vanishes on the minimal set of the base.
class FiberFamily {
 public:
  // beta(s) = core for every s.
  FiberFamily(CircleLift base, CircleLift core);
  FiberFamily(const DenjoyMap& base, CircleLift core, double amplitude, double decay);

  const CircleLift& base() const;
  const CircleLift& core() const;
  const std::optional<DenjoyMap>& base_gaps() const;
  double amplitude() const;
  double decay() const;
  double gap_amplitude(int n) const;
  std::span<const FiberOverride> overrides() const;

  double rotation_at(double s) const;
  double eval(double s, double t) const { return core()(t) + rotation_at(s); }
  double inverse(double s, double y) const { return core().inverse(y - rotation_at(s)); }
  CircleLift at(double s) const;

  // Sound bounds on theta over the lift interval [s0, s1].
  std::pair<double, double> rotation_range(double s0, double s1) const;

  FiberFamily with_overrides(std::vector<FiberOverride> extra) const;

 private:
  struct Data;
  explicit FiberFamily(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

FiberFamily build_example_fiber_family(const DenjoyMap& g1, const CircleLift& g2,
                                       double amplitude, double decay);

// Sampled sup over s of sup over t of |beta(s)(t) - beta'(s)(t)|.
double fiber_sup_distance(const FiberFamily& lhs, const FiberFamily& rhs,
                          std::span<const double> s_samples, int t_samples = 16);

class SkewProduct {
 public:
  explicit SkewProduct(FiberFamily beta, std::string label = "skew");

  static SkewProduct rigid_translation(double a, double b);
  static SkewProduct product(CircleLift g1, CircleLift g2, std::string label = "product");

  const FiberFamily& fiber() const { return beta_; }
  const CircleLift& base() const { return beta_.base(); }
  const std::string& label() const { return label_; }

  // Torus map; the result is wrapped into [0,1)^2.
  TorusPoint operator()(TorusPoint z) const { return wrap(lift(z)); }
  // Plane lift F(s,t) = (G1(s), beta(s mod 1)(t)).
  TorusPoint lift(TorusPoint z) const;
  TorusPoint inverse(TorusPoint z) const;
  // Outer bound of F(rect): exact in s by monotonicity, and in t from the
  // core lift at the two t edges shifted by the rotation range over the s
  // edge. A relative 1e-12 pad absorbs rounding.
  LiftRect enclosure(const LiftRect& rect) const;

 private:
  FiberFamily beta_;
  std::string label_;
};

TorusPoint skew_eval(const SkewProduct& f, TorusPoint z);

struct RotationVectorEstimate {
  double rho_s = 0.0;
  double rho_t = 0.0;
  double error_bound = 0.0;  // 2 / iterations
  std::int64_t iterations = 0;
  TorusPoint start;
};

RotationVectorEstimate rotation_vector(const SkewProduct& f, TorusPoint z0, std::int64_t n_iters);

// Lift of R_theta o beta(s_{n-1}) o ... o R_theta o beta(s_0), s_k = g1^k(s0).
CircleLift fiber_composition(const FiberFamily& beta, double s0, std::int64_t n, double theta);

// Least n for which the theta-rotated composition at t exceeds the plain one
// by more than a full turn.
std::int64_t find_displacement_time(const FiberFamily& beta, double s0, double t, double theta,
                                     std::int64_t cap = 1'000'000);

struct ReturnPerturbation {
  FiberFamily beta;
  std::int64_t k = 0;
  std::int64_t n0 = 0;
  double a = 0.0;
  double b = 0.0;
  int gap_index = 0;
  double theta = 0.0;
  double return_window = 0.0;  // half-width of the s-window I_{m+k} returns into
};

ReturnPerturbation build_return_perturbation(const FiberFamily& beta, TorusPoint x, double eps,
                                             double delta);

struct ReturnCheck {
  bool hit = false;
  TorusPoint witness;  // sample point p with f^k(p) in B(x, eps)
  TorusPoint landing;  // f^k(p)
  std::int64_t samples = 0;
};

// Samples a grid inside B(x, eps) and iterates each sample k times.
ReturnCheck verify_return(const SkewProduct& f, TorusPoint x, double eps, std::int64_t k,
                          int samples, int threads = 1);
// Samples the segment (from, to) (points outside B(x, eps) are skipped) and
// falls back to bisection on any adjacent pair whose images bracket the fiber
// height of x inside the s-window.
ReturnCheck verify_return_along(const SkewProduct& f, TorusPoint x, double eps, std::int64_t k,
                                TorusPoint from, TorusPoint to, int samples, int threads = 1);

}  // namespace torlab

#endif  // TORLAB_TORUS_HPP
