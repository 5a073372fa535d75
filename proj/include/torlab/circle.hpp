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

// Circle homeomorphisms represented through their degree-one lifts: rigid
// rotations, Denjoy maps with wandering gaps, and rotated composites.

#ifndef TORLAB_CIRCLE_HPP
#define TORLAB_CIRCLE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace torlab {

// (a + b*sqrt(c)) / d
struct QuadraticIrrational {
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::int64_t c = 2;
  std::int64_t d = 1;

  long double value() const;
  std::string to_string() const;

  // (sqrt(5) - 1) / 2
  static QuadraticIrrational golden() { return {-1, 1, 5, 2}; }
  // sqrt(2) - 1
  static QuadraticIrrational silver() { return {-1, 1, 2, 1}; }
};

enum class LiftKind { kRigid, kDenjoy, kRotatedComposite, kComposition };

const char* lift_kind_name(LiftKind kind);

// Value handle over an immutable lift implementation. Copies share the
// implementation; evaluation is thread-safe.
class CircleLift {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double eval(double x) const = 0;
    // Default is bracketed bisection on the monotone lift.
    virtual double inverse(double y) const;
    virtual LiftKind kind() const = 0;
  };

  CircleLift();
  explicit CircleLift(std::shared_ptr<const Impl> impl);

  static CircleLift rigid(double alpha);

  double operator()(double x) const { return impl_->eval(x); }
  double eval(double x) const { return impl_->eval(x); }
  double inverse(double y) const { return impl_->inverse(y); }
  LiftKind kind() const { return impl_->kind(); }

  // x -> eval(x) + theta, i.e. the lift of R_theta composed after this map.
  CircleLift rotated(double theta) const;

 private:
  std::shared_ptr<const Impl> impl_;
};

double lift_eval(const CircleLift& lift, double x);
double inverse_eval(const CircleLift& lift, double y);
CircleLift compose_rotation(const CircleLift& lift, double theta);

// Bisection inverse for any nondecreasing degree-one lift. Throws
// ErrorCode::kNumeric when the bracket cannot be established, which only
// happens for non-monotone data.
double bisection_inverse(const CircleLift::Impl& lift, double y);

struct RotationEstimate {
  double estimate = 0.0;
  double error_bound = 0.0;
  std::int64_t iterations = 0;
};

// (eval^n(x0) - x0) / n with the classical 1/n bound. The orbit is tracked
// as integer winding plus a point of [0,1) so no precision is lost to the
// growing lift coordinate.
RotationEstimate rotation_number(const CircleLift& lift, std::int64_t n_iters,
                                 double x0 = 0.0);

struct DenjoySpec {
  QuadraticIrrational rotation = QuadraticIrrational::golden();
  double alpha = 0.0;            // floating value of rotation, in [0,1)
  double gap_coefficient = 0.0;  // c0 in l_n = c0 (|n|+1)^-p
  double gap_exponent = 4.0;     // p > 1
  int truncation = 2000;         // gaps n in [-N, N] are enumerated

  // c0 chosen so that the full (untruncated) gap length equals total.
  static DenjoySpec with_total_gap(const QuadraticIrrational& rotation,
                                   double total, double exponent,
                                   int truncation);

  double gap_length(std::int64_t n) const;
  // L = sum over all n of l_n = c0 (2 zeta(p) - 1).
  double total_gap_length() const;
  // delta(N) = sum over |n| > N of l_n.
  double tail_mass() const;
  void validate() const;
};

struct Gap {
  int index = 0;
  double left = 0.0;
  double length = 0.0;
  double rotation_coordinate = 0.0;  // {index * alpha}

  double right() const { return left + length; }
  double midpoint() const { return left + 0.5 * length; }
};

struct GapLocation {
  std::optional<int> gap;  // empty: the point is in the Cantor part
  // For gap points: distance to the nearer endpoint. For Cantor points: 0,
  // with `uncertainty` bounding the unenumerated gap that might contain it.
  double distance_to_minimal_set = 0.0;
  double uncertainty = 0.0;

  bool in_gap() const { return gap.has_value(); }
};

namespace detail {
struct DenjoyData;
}

// Denjoy counterexample with prescribed irrational rotation number. Gap I_n
// sits at the image of {n alpha} under the gap-inserting semiconjugacy
//   H(u) = c u + sum_{|n|<=N, {n alpha} < u} l_n,   c = 1 - sum l_n,
// the Cantor part rotates by alpha in the u coordinate, and I_n maps
// affinely onto I_{n+1}. The last enumerated gap I_N collapses onto H({(N+1)
// alpha}); that and the tail mass delta(N) form the evaluation error budget.
class DenjoyMap {
 public:
  explicit DenjoyMap(const DenjoySpec& spec);

  const CircleLift& lift() const { return lift_; }
  const DenjoySpec& spec() const;
  int truncation() const;

  std::size_t gap_count() const;
  // n in [-N, N].
  const Gap& gap(int n) const;
  // Gaps ordered by position on [0,1).
  std::span<const Gap> gaps_by_position() const;
  std::size_t position_of(int n) const;

  double enumerated_gap_length() const;
  double tail_mass() const;
  double minimal_set_tolerance() const;

  GapLocation locate(double t) const;
  // H(u) for u in the rotation coordinate; lands in the minimal set.
  double cantor_point(double u) const;

 private:
  std::shared_ptr<const detail::DenjoyData> data_;
  CircleLift lift_;
};

DenjoyMap build_denjoy(const DenjoySpec& spec);
GapLocation gap_locate(const DenjoyMap& map, double t);

// Partial quotients of the continued fraction of x, stopping once the
// convergent denominator passes max_denominator or the remainder vanishes.
std::vector<std::int64_t> continued_fraction(double x, std::int64_t max_denominator);

struct IndependenceReport {
  bool suspicious = false;
  double smallest_residual = 0.0;
  std::vector<std::int64_t> worst_coefficients;  // (k0, k1, ..., kd)
};

// Searches k0 + k1 x1 + ... + kd xd for integer vectors with
// max |ki| <= max_coefficient (i >= 1) and flags residuals below threshold.
// A heuristic only: floating point cannot certify irrationality.
IndependenceReport rational_independence_heuristic(std::span<const double> values,
                                                   int max_coefficient,
                                                   double threshold = 1e-10);

}  // namespace torlab

#endif  // TORLAB_CIRCLE_HPP
