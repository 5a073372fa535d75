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

#include "torlab/circle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "torlab/error.hpp"

namespace torlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kBudgetExhausted: return "budget-exhausted";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

long double QuadraticIrrational::value() const {
  require(d != 0, ErrorCode::kInvalidArgument, "quadratic irrational with zero denominator");
  require(c >= 0, ErrorCode::kInvalidArgument, "quadratic irrational with negative radicand");
  return (static_cast<long double>(a) +
          static_cast<long double>(b) * std::sqrt(static_cast<long double>(c))) /
         static_cast<long double>(d);
}

std::string QuadraticIrrational::to_string() const {
  std::ostringstream os;
  os << "(" << a << (b < 0 ? " - " : " + ") << std::llabs(b) << "*sqrt(" << c << "))/" << d;
  return os.str();
}

const char* lift_kind_name(LiftKind kind) {
  switch (kind) {
    case LiftKind::kRigid: return "rigid";
    case LiftKind::kDenjoy: return "denjoy";
    case LiftKind::kRotatedComposite: return "rotated-composite";
    case LiftKind::kComposition: return "composition";
  }
  return "unknown";
}

namespace {

class RigidLift final : public CircleLift::Impl {
 public:
  explicit RigidLift(double alpha) : alpha_(alpha) {}
  double eval(double x) const override { return x + alpha_; }
  double inverse(double y) const override { return y - alpha_; }
  LiftKind kind() const override { return LiftKind::kRigid; }

 private:
  double alpha_;
};

class RotatedLift final : public CircleLift::Impl {
 public:
  RotatedLift(CircleLift base, double theta) : base_(std::move(base)), theta_(theta) {}
  double eval(double x) const override { return base_(x) + theta_; }
  double inverse(double y) const override { return base_.inverse(y - theta_); }
  LiftKind kind() const override { return LiftKind::kRotatedComposite; }

 private:
  CircleLift base_;
  double theta_;
};

// Sum over j >= first of j^-p, Euler-Maclaurin after a short explicit head.
long double power_tail(long double first, long double p) {
  constexpr int kHead = 16;
  long double sum = 0.0L;
  for (int k = 0; k < kHead; ++k) sum += std::pow(first + k, -p);
  const long double j = first + kHead;
  sum += std::pow(j, 1.0L - p) / (p - 1.0L);
  sum += 0.5L * std::pow(j, -p);
  sum += p * std::pow(j, -p - 1.0L) / 12.0L;
  sum -= p * (p + 1.0L) * (p + 2.0L) * std::pow(j, -p - 3.0L) / 720.0L;
  return sum;
}

}  // namespace

double bisection_inverse(const CircleLift::Impl& lift, double y) {
  // A degree-one homeomorphism lift has displacement eval(x) - x varying by
  // less than one over a period, which gives the initial bracket.
  const double shift = lift.eval(0.0);
  double lo = y - shift - 1.0;
  double hi = y - shift + 1.0;
  int expansions = 0;
  while (lift.eval(lo) > y) {
    lo -= 1.0;
    if (++expansions > 64) fail(ErrorCode::kNumeric, "inverse_eval: bracket not found (non-monotone lift)");
  }
  while (lift.eval(hi) < y) {
    hi += 1.0;
    if (++expansions > 64) fail(ErrorCode::kNumeric, "inverse_eval: bracket not found (non-monotone lift)");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    if (lift.eval(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  fail(ErrorCode::kNumeric, "inverse_eval: bisection budget exhausted");
}

double CircleLift::Impl::inverse(double y) const { return bisection_inverse(*this, y); }

CircleLift::CircleLift() : impl_(std::make_shared<RigidLift>(0.0)) {}

CircleLift::CircleLift(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
  require(impl_ != nullptr, ErrorCode::kInvalidArgument, "null lift implementation");
}

CircleLift CircleLift::rigid(double alpha) { return CircleLift(std::make_shared<RigidLift>(alpha)); }

CircleLift CircleLift::rotated(double theta) const {
  return CircleLift(std::make_shared<RotatedLift>(*this, theta));
}

double lift_eval(const CircleLift& lift, double x) { return lift(x); }

double inverse_eval(const CircleLift& lift, double y) { return lift.inverse(y); }

CircleLift compose_rotation(const CircleLift& lift, double theta) {
  require(theta >= 0.0 && theta < 1.0, ErrorCode::kInvalidArgument,
          "compose_rotation: theta must lie in [0,1)");
  return lift.rotated(theta);
}

RotationEstimate rotation_number(const CircleLift& lift, std::int64_t n_iters, double x0) {
  require(n_iters >= 1, ErrorCode::kInvalidArgument, "rotation_number: n_iters must be >= 1");
  const double start = x0 - std::floor(x0);
  double y = start;
  std::int64_t winding = 0;
  for (std::int64_t i = 0; i < n_iters; ++i) {
    const double z = lift(y);
    const double whole = std::floor(z);
    winding += static_cast<std::int64_t>(whole);
    y = z - whole;
  }
  RotationEstimate out;
  out.iterations = n_iters;
  out.estimate = (static_cast<double>(winding) + (y - start)) / static_cast<double>(n_iters);
  out.error_bound = 1.0 / static_cast<double>(n_iters);
  return out;
}

// ---------------------------------------------------------------------------
// Denjoy construction

DenjoySpec DenjoySpec::with_total_gap(const QuadraticIrrational& rotation, double total,
                                      double exponent, int truncation) {
  require(exponent > 1.0, ErrorCode::kInvalidArgument, "gap exponent must exceed 1");
  require(total > 0.0 && total < 1.0, ErrorCode::kInvalidArgument, "total gap length must lie in (0,1)");
  DenjoySpec spec;
  spec.rotation = rotation;
  const long double v = rotation.value();
  spec.alpha = static_cast<double>(v - std::floor(v));
  spec.gap_exponent = exponent;
  spec.truncation = truncation;
  const long double zeta = power_tail(1.0L, exponent);
  spec.gap_coefficient = static_cast<double>(total / (2.0L * zeta - 1.0L));
  return spec;
}

double DenjoySpec::gap_length(std::int64_t n) const {
  return gap_coefficient * std::pow(static_cast<double>(std::llabs(n) + 1), -gap_exponent);
}

double DenjoySpec::total_gap_length() const {
  return static_cast<double>(gap_coefficient * (2.0L * power_tail(1.0L, gap_exponent) - 1.0L));
}

double DenjoySpec::tail_mass() const {
  return static_cast<double>(2.0L * gap_coefficient *
                             power_tail(static_cast<long double>(truncation) + 2.0L, gap_exponent));
}

void DenjoySpec::validate() const {
  require(gap_coefficient > 0.0, ErrorCode::kInvalidArgument, "gap coefficient must be positive");
  require(gap_exponent > 1.0, ErrorCode::kInvalidArgument, "gap exponent must exceed 1");
  require(truncation >= 1, ErrorCode::kInvalidArgument, "truncation must be positive");
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::kInvalidArgument, "rotation number must lie in (0,1)");
  require(total_gap_length() < 1.0, ErrorCode::kInvalidArgument, "total gap length must be < 1");
  require(tail_mass() < 1e-8, ErrorCode::kInvalidArgument,
          "tail mass delta(N) must be < 1e-8; increase the truncation");
}

namespace detail {

struct DenjoyData {
  DenjoySpec spec;
  int truncation = 0;
  double slope = 0.0;  // c: x-length per unit of rotation coordinate
  double enumerated = 0.0;
  double tail = 0.0;
  double next_rotation_coordinate = 0.0;  // {(N+1) alpha}
  std::vector<Gap> by_index;              // n + N
  std::vector<Gap> sorted;
  std::vector<double> u;       // sorted rotation coordinates
  std::vector<double> left;    // sorted left endpoints
  std::vector<double> prefix;  // prefix[j] = sum of sorted lengths before j
  std::vector<std::size_t> position;  // n + N -> sorted index

  double h(double w) const {
    const double whole = std::floor(w);
    double v = w - whole;
    if (v <= 0.0) return whole;
    const auto lb = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), v) - u.begin());
    return whole + slope * v + prefix[lb];
  }

  // Position of u[s] + du approached from the right of sorted gap s.
  double h_right(std::size_t s, double du) const {
    const double v = u[s] + du;
    if (v >= 1.0) return h(v);
    const auto lb = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), v) - u.begin());
    return slope * v + prefix[std::max(s + 1, lb)];
  }

  // 1 when {(n+1) alpha} wrapped below {n alpha}, so the image lift needs
  // the extra turn.
  double carry(const Gap& g) const {
    const double next = g.index < truncation
                            ? by_index[static_cast<std::size_t>(g.index + 1 + truncation)].rotation_coordinate
                            : next_rotation_coordinate;
    return next < g.rotation_coordinate ? 1.0 : 0.0;
  }

  double cantor_after(std::size_t j, double offset) const {
    const Gap& g = sorted[j];
    const double du = offset / slope;
    if (g.index < truncation) {
      return carry(g) + h_right(position[static_cast<std::size_t>(g.index + 1 + truncation)], du);
    }
    return carry(g) + h(next_rotation_coordinate + du);
  }

  std::size_t segment(double y) const {
    return static_cast<std::size_t>(std::upper_bound(left.begin(), left.end(), y) - left.begin()) - 1;
  }

  double eval(double x) const {
    double whole = std::floor(x);
    double y = x - whole;
    if (y >= 1.0) {
      y -= 1.0;
      whole += 1.0;
    }
    const std::size_t j = segment(y);
    const Gap& g = sorted[j];
    // Closed on the left: a left endpoint goes to the next left endpoint.
    if (y >= g.left && y < g.right()) {
      const double phi = (y - g.left) / g.length;
      if (g.index < truncation) {
        const Gap& next = by_index[static_cast<std::size_t>(g.index + 1 + truncation)];
        return whole + carry(g) + next.left + phi * next.length;
      }
      return whole + carry(g) + h(next_rotation_coordinate);
    }
    return whole + cantor_after(j, y - g.right());
  }
};

}  // namespace detail

namespace {

class DenjoyLift final : public CircleLift::Impl {
 public:
  explicit DenjoyLift(std::shared_ptr<const detail::DenjoyData> data) : data_(std::move(data)) {}
  double eval(double x) const override { return data_->eval(x); }
  LiftKind kind() const override { return LiftKind::kDenjoy; }

 private:
  std::shared_ptr<const detail::DenjoyData> data_;
};

}  // namespace

DenjoyMap::DenjoyMap(const DenjoySpec& spec) {
  spec.validate();
  auto data = std::make_shared<detail::DenjoyData>();
  data->spec = spec;
  const int n_max = spec.truncation;
  data->truncation = n_max;

  const long double value = spec.rotation.value();
  long double alpha = value - std::floor(value);
  if (std::fabs(static_cast<double>(alpha) - spec.alpha) > 1e-12) {
    // A hand-edited alpha that disagrees with the descriptor wins.
    alpha = spec.alpha;
  }
  auto frac = [alpha](std::int64_t n) {
    const long double v = static_cast<long double>(n) * alpha;
    return static_cast<double>(v - std::floor(v));
  };

  const std::size_t count = static_cast<std::size_t>(2 * n_max + 1);
  data->by_index.resize(count);
  double enumerated = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    Gap& g = data->by_index[static_cast<std::size_t>(n + n_max)];
    g.index = n;
    g.length = spec.gap_length(n);
    g.rotation_coordinate = frac(n);
    enumerated += g.length;
  }
  data->enumerated = enumerated;
  data->tail = spec.tail_mass();
  data->slope = 1.0 - enumerated;
  data->next_rotation_coordinate = frac(n_max + 1);

  data->sorted = data->by_index;
  std::sort(data->sorted.begin(), data->sorted.end(),
            [](const Gap& x, const Gap& y) { return x.rotation_coordinate < y.rotation_coordinate; });
  data->u.resize(count);
  data->left.resize(count);
  data->prefix.assign(count + 1, 0.0);
  data->position.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    Gap& g = data->sorted[j];
    if (j > 0) {
      require(g.rotation_coordinate > data->sorted[j - 1].rotation_coordinate, ErrorCode::kNumeric,
              "build_denjoy: coincident orbit points (rotation number numerically rational?)");
    }
    data->u[j] = g.rotation_coordinate;
    data->prefix[j + 1] = data->prefix[j] + g.length;
    g.left = data->slope * g.rotation_coordinate + data->prefix[j];
    data->left[j] = g.left;
    data->position[static_cast<std::size_t>(g.index + n_max)] = j;
    data->by_index[static_cast<std::size_t>(g.index + n_max)].left = g.left;
  }
  require(data->sorted.front().rotation_coordinate == 0.0, ErrorCode::kNumeric,
          "build_denjoy: gap I_0 must sit at the origin");
  for (std::size_t j = 0; j + 1 < count; ++j) {
    require(data->sorted[j].right() < data->sorted[j + 1].left, ErrorCode::kNumeric,
            "build_denjoy: gaps overlap after placement");
  }
  require(data->sorted.back().right() < 1.0, ErrorCode::kNumeric,
          "build_denjoy: last gap crosses the origin");

  data_ = data;
  lift_ = CircleLift(std::make_shared<DenjoyLift>(data));
}

const DenjoySpec& DenjoyMap::spec() const { return data_->spec; }
int DenjoyMap::truncation() const { return data_->truncation; }
std::size_t DenjoyMap::gap_count() const { return data_->sorted.size(); }

const Gap& DenjoyMap::gap(int n) const {
  require(n >= -data_->truncation && n <= data_->truncation, ErrorCode::kInvalidArgument,
          "gap index outside the enumerated range");
  return data_->by_index[static_cast<std::size_t>(n + data_->truncation)];
}

std::span<const Gap> DenjoyMap::gaps_by_position() const { return data_->sorted; }

std::size_t DenjoyMap::position_of(int n) const {
  gap(n);
  return data_->position[static_cast<std::size_t>(n + data_->truncation)];
}

double DenjoyMap::enumerated_gap_length() const { return data_->enumerated; }
double DenjoyMap::tail_mass() const { return data_->tail; }
double DenjoyMap::minimal_set_tolerance() const { return data_->tail; }

GapLocation DenjoyMap::locate(double t) const {
  double y = t - std::floor(t);
  if (y >= 1.0) y = 0.0;
  const Gap& g = data_->sorted[data_->segment(y)];
  GapLocation out;
  if (y > g.left && y < g.right()) {
    out.gap = g.index;
    out.distance_to_minimal_set = std::min(y - g.left, g.right() - y);
  } else {
    out.uncertainty = data_->spec.gap_length(data_->truncation + 1);
  }
  return out;
}

double DenjoyMap::cantor_point(double u) const { return data_->h(u); }

DenjoyMap build_denjoy(const DenjoySpec& spec) { return DenjoyMap(spec); }

GapLocation gap_locate(const DenjoyMap& map, double t) { return map.locate(t); }

// ---------------------------------------------------------------------------

std::vector<std::int64_t> continued_fraction(double x, std::int64_t max_denominator) {
  std::vector<std::int64_t> quotients;
  long double r = x;
  long double q_prev = 0.0L, q = 1.0L;
  for (int depth = 0; depth < 64; ++depth) {
    const long double a = std::floor(r);
    quotients.push_back(static_cast<std::int64_t>(a));
    const long double q_next = a * q + q_prev;
    if (depth > 0) {
      q_prev = q;
      q = q_next;
    }
    if (q > static_cast<long double>(max_denominator)) break;
    const long double rem = r - a;
    if (rem < 1e-15L) break;
    r = 1.0L / rem;
  }
  return quotients;
}

IndependenceReport rational_independence_heuristic(std::span<const double> values,
                                                   int max_coefficient, double threshold) {
  require(!values.empty(), ErrorCode::kInvalidArgument, "no values to test");
  require(max_coefficient >= 1, ErrorCode::kInvalidArgument, "max_coefficient must be >= 1");
  IndependenceReport report;
  report.smallest_residual = INFINITY;
  const std::size_t d = values.size();
  std::vector<std::int64_t> k(d, -max_coefficient);
  for (;;) {
    bool nonzero = false;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < d; ++i) {
      sum += static_cast<long double>(k[i]) * values[i];
      nonzero = nonzero || k[i] != 0;
    }
    if (nonzero) {
      const long double k0 = -std::nearbyint(sum);
      const double residual = static_cast<double>(std::fabs(k0 + sum));
      if (residual < report.smallest_residual) {
        report.smallest_residual = residual;
        report.worst_coefficients.assign(1, static_cast<std::int64_t>(k0));
        report.worst_coefficients.insert(report.worst_coefficients.end(), k.begin(), k.end());
      }
    }
    std::size_t i = 0;
    while (i < d && k[i] == max_coefficient) {
      k[i] = -max_coefficient;
      ++i;
    }
    if (i == d) break;
    ++k[i];
  }
  report.suspicious = report.smallest_residual < threshold;
  return report;
}

}  // namespace torlab
