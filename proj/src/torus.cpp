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

#include "torlab/torus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"

namespace torlab {

TorusPoint wrap(TorusPoint z) {
  z.s -= std::floor(z.s);
  z.t -= std::floor(z.t);
  if (z.s >= 1.0) z.s = 0.0;
  if (z.t >= 1.0) z.t = 0.0;
  return z;
}

double circle_offset(double x) { return x - std::floor(x + 0.5); }

double torus_distance(TorusPoint a, TorusPoint b) {
  return std::hypot(circle_offset(a.s - b.s), circle_offset(a.t - b.t));
}

double gap_bump(double phi) {
  if (phi <= 0.0 || phi >= 1.0) return 0.0;
  const double v = std::sin(std::numbers::pi * phi);
  return v * v;
}

double override_bump(double d, double radius) {
  if (radius <= 0.0 || std::fabs(d) >= radius) return 0.0;
  const double v = std::cos(0.5 * std::numbers::pi * d / radius);
  return v * v;
}

namespace {

// Max of gap_bump over [p, q] within [0, 1].
double bump_max(double p, double q) {
  if (p <= 0.5 && q >= 0.5) return 1.0;
  return q < 0.5 ? gap_bump(q) : gap_bump(p);
}

class CompositionLift final : public CircleLift::Impl {
 public:
  CompositionLift(CircleLift core, std::vector<double> offsets)
      : core_(std::move(core)), offsets_(std::move(offsets)) {}

  double eval(double x) const override {
    for (double off : offsets_) x = core_(x) + off;
    return x;
  }
  double inverse(double y) const override {
    for (auto it = offsets_.rbegin(); it != offsets_.rend(); ++it) y = core_.inverse(y - *it);
    return y;
  }
  LiftKind kind() const override { return LiftKind::kComposition; }

 private:
  CircleLift core_;
  std::vector<double> offsets_;
};

}  // namespace

struct FiberFamily::Data {
  CircleLift base;
  CircleLift core;
  std::optional<DenjoyMap> gaps;
  double amplitude = 0.0;
  double decay = 0.0;
  double tail_amplitude = 0.0;
  std::vector<double> sorted_lefts;
  std::vector<std::vector<double>> range_max;  // sparse table over sorted theta_n
  std::vector<FiberOverride> overrides;       // sorted by center
  double max_radius = 0.0;

  bool modulated() const { return gaps.has_value() && amplitude > 0.0; }

  double theta(int n) const { return amplitude * std::pow(decay, std::abs(n)); }

  double max_sorted(std::size_t lo, std::size_t hi) const {
    const std::size_t len = hi - lo + 1;
    const std::size_t level = static_cast<std::size_t>(std::bit_width(len)) - 1;
    return std::max(range_max[level][lo], range_max[level][hi + 1 - (std::size_t{1} << level)]);
  }

  std::size_t segment(double y) const {
    const auto it = std::upper_bound(sorted_lefts.begin(), sorted_lefts.end(), y);
    return it == sorted_lefts.begin() ? 0 : static_cast<std::size_t>(it - sorted_lefts.begin()) - 1;
  }

  void build_table() {
    const auto sorted = gaps->gaps_by_position();
    const std::size_t count = sorted.size();
    sorted_lefts.resize(count);
    range_max.assign(1, std::vector<double>(count));
    for (std::size_t j = 0; j < count; ++j) {
      sorted_lefts[j] = sorted[j].left;
      range_max[0][j] = theta(sorted[j].index);
    }
    for (std::size_t level = 1; (std::size_t{1} << level) <= count; ++level) {
      const std::size_t half = std::size_t{1} << (level - 1);
      std::vector<double> row(count - (std::size_t{1} << level) + 1);
      for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] = std::max(range_max[level - 1][j], range_max[level - 1][j + half]);
      }
      range_max.push_back(std::move(row));
    }
    tail_amplitude = theta(gaps->truncation() + 1);
  }

  double base_rotation(double y) const {
    if (!modulated()) return 0.0;
    const auto loc = gaps->locate(y);
    if (!loc.gap) return 0.0;
    const Gap& g = gaps->gap(*loc.gap);
    return theta(g.index) * gap_bump((y - g.left) / g.length);
  }

  double override_rotation(double y) const {
    double sum = 0.0;
    if (overrides.empty()) return sum;
    for (double shift : {-1.0, 0.0, 1.0}) {
      const double target = y + shift;
      auto it = std::lower_bound(overrides.begin(), overrides.end(), target - max_radius,
                                 [](const FiberOverride& o, double v) { return o.center < v; });
      for (; it != overrides.end() && it->center <= target + max_radius; ++it) {
        sum += it->angle * override_bump(target - it->center, it->radius);
      }
    }
    return sum;
  }

  // Bounds over [a, b] with 0 <= a <= b <= 1.
  std::pair<double, double> piece_range(double a, double b) const {
    double lo = 0.0;
    double hi = 0.0;
    if (modulated()) {
      const auto sorted = gaps->gaps_by_position();
      const std::size_t ja = segment(a);
      const std::size_t jb = segment(b);
      const Gap& ga = sorted[ja];
      if (ja == jb && a > ga.left && b < ga.right()) {
        const double pa = (a - ga.left) / ga.length;
        const double pb = (b - ga.left) / ga.length;
        const double th = theta(ga.index);
        lo = th * std::min(gap_bump(pa), gap_bump(pb));
        hi = th * bump_max(pa, pb);
      } else {
        const std::size_t first = ga.right() > a ? ja : ja + 1;
        const std::size_t last = (sorted[jb].left < b || jb == 0) ? jb : jb - 1;
        if (first <= last && first < sorted.size()) {
          auto partial = [&](std::size_t j) {
            const Gap& g = sorted[j];
            const double p = std::max(0.0, (a - g.left) / g.length);
            const double q = std::min(1.0, (b - g.left) / g.length);
            return p < q ? theta(g.index) * bump_max(p, q) : 0.0;
          };
          hi = std::max(partial(first), partial(last));
          if (last > first + 1) hi = std::max(hi, max_sorted(first + 1, last - 1));
        }
      }
      hi += tail_amplitude;
    }
    for (const FiberOverride& o : overrides) {
      for (double shift : {-1.0, 0.0, 1.0}) {
        const double c = o.center + shift;
        if (c - o.radius >= b || c + o.radius <= a) continue;
        hi += o.angle * override_bump(std::clamp(c, a, b) - c, o.radius);
        if (a > c - o.radius && b < c + o.radius) {
          lo += o.angle * std::min(override_bump(a - c, o.radius), override_bump(b - c, o.radius));
        }
      }
    }
    return {lo, hi};
  }
};

FiberFamily::FiberFamily(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

FiberFamily::FiberFamily(CircleLift base, CircleLift core) {
  auto data = std::make_shared<Data>();
  data->base = std::move(base);
  data->core = std::move(core);
  data_ = data;
}

FiberFamily::FiberFamily(const DenjoyMap& base, CircleLift core, double amplitude, double decay) {
  require(amplitude >= 0.0 && std::isfinite(amplitude), ErrorCode::kInvalidArgument,
          "fiber family: amplitude must be >= 0");
  require(decay > 0.0 && decay < 1.0, ErrorCode::kInvalidArgument,
          "fiber family: decay must lie in (0,1)");
  auto data = std::make_shared<Data>();
  data->base = base.lift();
  data->core = std::move(core);
  data->gaps = base;
  data->amplitude = amplitude;
  data->decay = decay;
  data->build_table();
  data_ = data;
}

const CircleLift& FiberFamily::base() const { return data_->base; }
const CircleLift& FiberFamily::core() const { return data_->core; }
const std::optional<DenjoyMap>& FiberFamily::base_gaps() const { return data_->gaps; }
double FiberFamily::amplitude() const { return data_->amplitude; }
double FiberFamily::decay() const { return data_->decay; }
double FiberFamily::gap_amplitude(int n) const { return data_->modulated() ? data_->theta(n) : 0.0; }
std::span<const FiberOverride> FiberFamily::overrides() const { return data_->overrides; }

double FiberFamily::rotation_at(double s) const {
  double y = s - std::floor(s);
  if (y >= 1.0) y = 0.0;
  return data_->base_rotation(y) + data_->override_rotation(y);
}

CircleLift FiberFamily::at(double s) const {
  const double theta = rotation_at(s);
  return theta == 0.0 ? data_->core : data_->core.rotated(theta);
}

std::pair<double, double> FiberFamily::rotation_range(double s0, double s1) const {
  require(s1 >= s0, ErrorCode::kInvalidArgument, "rotation_range: empty interval");
  if (s1 - s0 >= 1.0) {
    const auto whole = data_->piece_range(0.0, 1.0);
    return {0.0, whole.second};
  }
  const double a = s0 - std::floor(s0);
  const double b = a + (s1 - s0);
  if (b <= 1.0) return data_->piece_range(a, b);
  const auto left = data_->piece_range(a, 1.0);
  const auto right = data_->piece_range(0.0, b - 1.0);
  return {std::min(left.first, right.first), std::max(left.second, right.second)};
}

FiberFamily FiberFamily::with_overrides(std::vector<FiberOverride> extra) const {
  auto data = std::make_shared<Data>(*data_);
  for (FiberOverride o : extra) {
    require(o.radius > 0.0 && o.angle >= 0.0, ErrorCode::kInvalidArgument,
            "fiber override needs a positive radius and a non-negative angle");
    o.center -= std::floor(o.center);
    data->overrides.push_back(o);
    data->max_radius = std::max(data->max_radius, o.radius);
  }
  std::sort(data->overrides.begin(), data->overrides.end(),
            [](const FiberOverride& x, const FiberOverride& y) { return x.center < y.center; });
  return FiberFamily(std::shared_ptr<const Data>(std::move(data)));
}

FiberFamily build_example_fiber_family(const DenjoyMap& g1, const CircleLift& g2, double amplitude,
                                       double decay) {
  return FiberFamily(g1, g2, amplitude, decay);
}

double fiber_sup_distance(const FiberFamily& lhs, const FiberFamily& rhs,
                          std::span<const double> s_samples, int t_samples) {
  require(t_samples >= 1, ErrorCode::kInvalidArgument, "fiber_sup_distance: need t samples");
  double sup = 0.0;
  for (double s : s_samples) {
    for (int i = 0; i < t_samples; ++i) {
      const double t = (i + 0.5) / t_samples;
      sup = std::max(sup, std::fabs(lhs.eval(s, t) - rhs.eval(s, t)));
    }
  }
  return sup;
}

// ---------------------------------------------------------------------------

SkewProduct::SkewProduct(FiberFamily beta, std::string label)
    : beta_(std::move(beta)), label_(std::move(label)) {}

SkewProduct SkewProduct::rigid_translation(double a, double b) {
  return SkewProduct(FiberFamily(CircleLift::rigid(a), CircleLift::rigid(b)), "rigid");
}

SkewProduct SkewProduct::product(CircleLift g1, CircleLift g2, std::string label) {
  return SkewProduct(FiberFamily(std::move(g1), std::move(g2)), std::move(label));
}

TorusPoint SkewProduct::lift(TorusPoint z) const {
  return {beta_.base()(z.s), beta_.eval(z.s, z.t)};
}

TorusPoint SkewProduct::inverse(TorusPoint z) const {
  const double s = beta_.base().inverse(z.s);
  return wrap({s, beta_.inverse(s, z.t)});
}

LiftRect SkewProduct::enclosure(const LiftRect& rect) const {
  const auto [lo, hi] = beta_.rotation_range(rect.s0, rect.s1);
  LiftRect out;
  out.s0 = beta_.base()(rect.s0);
  out.s1 = beta_.base()(rect.s1);
  out.t0 = beta_.core()(rect.t0) + lo;
  if (rect.t1 - rect.t0 >= 1.0) {
    out.t1 = out.t0 + 1.0 + (hi - lo);
  } else {
    out.t1 = beta_.core()(rect.t1) + hi;
  }
  auto pad = [](double v) { return 1e-12 * (1.0 + std::fabs(v)); };
  out.s0 -= pad(out.s0);
  out.s1 += pad(out.s1);
  out.t0 -= pad(out.t0);
  out.t1 += pad(out.t1);
  return out;
}

TorusPoint skew_eval(const SkewProduct& f, TorusPoint z) { return f(z); }

RotationVectorEstimate rotation_vector(const SkewProduct& f, TorusPoint z0, std::int64_t n_iters) {
  require(n_iters >= 1, ErrorCode::kInvalidArgument, "rotation_vector: n_iters must be >= 1");
  const TorusPoint start = wrap(z0);
  TorusPoint z = start;
  std::int64_t ws = 0;
  std::int64_t wt = 0;
  for (std::int64_t i = 0; i < n_iters; ++i) {
    const TorusPoint next = f.lift(z);
    const double fs = std::floor(next.s);
    const double ft = std::floor(next.t);
    ws += static_cast<std::int64_t>(fs);
    wt += static_cast<std::int64_t>(ft);
    z = {next.s - fs, next.t - ft};
  }
  RotationVectorEstimate out;
  const double n = static_cast<double>(n_iters);
  out.rho_s = (static_cast<double>(ws) + (z.s - start.s)) / n;
  out.rho_t = (static_cast<double>(wt) + (z.t - start.t)) / n;
  out.error_bound = 2.0 / n;
  out.iterations = n_iters;
  out.start = start;
  return out;
}

CircleLift fiber_composition(const FiberFamily& beta, double s0, std::int64_t n, double theta) {
  require(n >= 1, ErrorCode::kInvalidArgument, "fiber_composition: n must be >= 1");
  std::vector<double> offsets;
  offsets.reserve(static_cast<std::size_t>(n));
  double s = s0 - std::floor(s0);
  for (std::int64_t k = 0; k < n; ++k) {
    offsets.push_back(beta.rotation_at(s) + theta);
    s = beta.base()(s);
    s -= std::floor(s);
  }
  return CircleLift(std::make_shared<CompositionLift>(beta.core(), std::move(offsets)));
}

std::int64_t find_displacement_time(const FiberFamily& beta, double s0, double t, double theta,
                                     std::int64_t cap) {
  require(theta > 0.0, ErrorCode::kInvalidArgument,
          "find_displacement_time: theta must be positive (theta = 0 never displaces)");
  double s = s0 - std::floor(s0);
  double plain = t;
  double rotated = t;
  for (std::int64_t n = 1; n <= cap; ++n) {
    const double r = beta.rotation_at(s);
    plain = beta.core()(plain) + r;
    rotated = beta.core()(rotated) + r + theta;
    if (rotated - plain > 1.0) return n;
    const double whole = std::floor(plain);
    plain -= whole;
    rotated -= whole;
    s = beta.base()(s);
    s -= std::floor(s);
  }
  fail(ErrorCode::kBudgetExhausted, "find_displacement_time: no full-turn displacement within " +
                                        std::to_string(cap) + " iterations");
}

// ---------------------------------------------------------------------------

namespace {

bool gap_inside_window(const Gap& g, double center, double half_width) {
  const double d = circle_offset(g.left - center);
  return d > -half_width && d + g.length < half_width;
}

constexpr double kMinOverrideRadius = 1e-9;

}  // namespace

ReturnPerturbation build_return_perturbation(const FiberFamily& beta, TorusPoint x, double eps,
                                             double delta) {
  require(beta.base_gaps().has_value(), ErrorCode::kPrecondition,
          "build_return_perturbation: the base map must be a Denjoy map");
  require(eps > 0.0 && eps < 0.5 && delta > 0.0, ErrorCode::kInvalidArgument,
          "build_return_perturbation: eps in (0, 1/2) and delta > 0 required");
  const DenjoyMap& g1 = *beta.base_gaps();
  x = wrap(x);
  require(!g1.locate(x.s).in_gap(), ErrorCode::kPrecondition,
          "build_return_perturbation: x must lie in M1 x S1");

  const double theta = std::min(0.05, 0.5 * delta);
  // Returns into half the window keep the landing inside the Euclidean ball.
  const double window = 0.5 * eps;
  const int truncation = g1.truncation();

  std::vector<Gap> candidates;
  for (const Gap& g : g1.gaps_by_position()) {
    if (gap_inside_window(g, x.s, eps)) candidates.push_back(g);
  }
  require(!candidates.empty(), ErrorCode::kPrecondition,
          "build_return_perturbation: no enumerated gap inside (s - eps, s + eps); increase N");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Gap& p, const Gap& q) { return p.length > q.length; });
  if (candidates.size() > 256) candidates.resize(256);

  std::string last_reason = "no candidate gap returned into the window";
  for (const Gap& gap : candidates) {
    const double a = gap.left + 0.25 * gap.length;
    const double b = gap.left + 0.75 * gap.length;
    std::int64_t n0 = 0;
    try {
      n0 = find_displacement_time(beta, b, x.t, theta);
    } catch (const Error& e) {
      last_reason = e.what();
      continue;
    }
    std::int64_t k = -1;
    for (std::int64_t step = n0 + 1; gap.index + step <= truncation; ++step) {
      if (gap_inside_window(g1.gap(static_cast<int>(gap.index + step)), x.s, window)) {
        k = step;
        break;
      }
    }
    if (k < 0) {
      last_reason = "no enumerated return of gap " + std::to_string(gap.index) + " after n0";
      continue;
    }

    std::vector<FiberOverride> bumps;
    bumps.reserve(static_cast<std::size_t>(k + 1));
    double sa = a;
    double sb = b;
    bool ok = true;
    for (std::int64_t j = 0; j <= k; ++j) {
      const Gap& gj = g1.gap(static_cast<int>(gap.index + j));
      const double right_room = gj.right() - sb;
      const double left_room = circle_offset(sb - sa);
      const double radius = 0.8 * std::min(right_room, left_room);
      if (!(radius >= kMinOverrideRadius)) {
        ok = false;
        last_reason = "override radius below 1e-9 along the orbit of gap " + std::to_string(gap.index);
        break;
      }
      bumps.push_back({sb, radius, theta});
      sa = beta.base()(sa);
      sb = beta.base()(sb);
      sa -= std::floor(sa);
      sb -= std::floor(sb);
    }
    if (!ok) continue;

    ReturnPerturbation out{beta.with_overrides(std::move(bumps)), k, n0, a, b, gap.index, theta, window};
    return out;
  }
  fail(ErrorCode::kBudgetExhausted, "build_return_perturbation: " + last_reason);
}

namespace {

TorusPoint iterate_lift(const SkewProduct& f, TorusPoint z, std::int64_t k) {
  for (std::int64_t i = 0; i < k; ++i) {
    z = f.lift(z);
    // Keep s on [0,1) and carry t's integer part; t stays a lift coordinate.
    z.s -= std::floor(z.s);
  }
  return z;
}

}  // namespace

ReturnCheck verify_return(const SkewProduct& f, TorusPoint x, double eps, std::int64_t k, int samples,
                          int threads) {
  require(k >= 1, ErrorCode::kInvalidArgument, "verify_return: k must be >= 1");
  require(samples >= 1 && eps > 0.0, ErrorCode::kInvalidArgument, "verify_return: bad sampling");
  x = wrap(x);
  const int side = static_cast<int>(std::ceil(std::sqrt(samples * 4.0 / std::numbers::pi))) + 1;
  std::vector<TorusPoint> pts;
  for (int i = 0; i < side && static_cast<int>(pts.size()) < samples; ++i) {
    for (int j = 0; j < side && static_cast<int>(pts.size()) < samples; ++j) {
      const double ds = eps * (2.0 * (i + 0.5) / side - 1.0);
      const double dt = eps * (2.0 * (j + 0.5) / side - 1.0);
      if (std::hypot(ds, dt) < eps) pts.push_back(wrap({x.s + ds, x.t + dt}));
    }
  }
  std::vector<TorusPoint> images(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) { images[i] = wrap(iterate_lift(f, pts[i], k)); });
  ReturnCheck out;
  out.samples = static_cast<std::int64_t>(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (torus_distance(images[i], x) < eps) {
      out.hit = true;
      out.witness = pts[i];
      out.landing = images[i];
      break;
    }
  }
  return out;
}

ReturnCheck verify_return_along(const SkewProduct& f, TorusPoint x, double eps, std::int64_t k,
                                TorusPoint from, TorusPoint to, int samples, int threads) {
  require(k >= 1, ErrorCode::kInvalidArgument, "verify_return_along: k must be >= 1");
  require(samples >= 2 && eps > 0.0, ErrorCode::kInvalidArgument, "verify_return_along: bad sampling");
  x = wrap(x);
  const double ds = circle_offset(to.s - from.s);
  const double dt = circle_offset(to.t - from.t);
  auto point_at = [&](double u) { return TorusPoint{from.s + u * ds, from.t + u * dt}; };

  std::vector<double> params(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) params[static_cast<std::size_t>(i)] = (i + 0.5) / samples;
  std::vector<TorusPoint> images(params.size());
  parallel_for(params.size(), threads,
               [&](std::size_t i) { images[i] = iterate_lift(f, point_at(params[i]), k); });

  ReturnCheck out;
  out.samples = samples;
  auto accept = [&](double u, const TorusPoint& img) {
    const TorusPoint p = wrap(point_at(u));
    if (torus_distance(p, x) >= eps) return false;
    if (torus_distance(wrap(img), x) >= eps) return false;
    out.hit = true;
    out.witness = p;
    out.landing = wrap(img);
    return true;
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (accept(params[i], images[i])) return out;
  }
  // Crossing search: the image curve is continuous in u, so a change of the
  // integer part of (t - x.t) between neighbours brackets an exact hit height.
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    const double level_lo = std::floor(images[i].t - x.t);
    const double level_hi = std::floor(images[i + 1].t - x.t);
    if (level_lo == level_hi) continue;
    if (std::fabs(circle_offset(images[i].s - x.s)) >= eps) continue;
    const double target = x.t + std::max(level_lo, level_hi);
    double lo = params[i];
    double hi = params[i + 1];
    const bool increasing = images[i + 1].t > images[i].t;
    TorusPoint best = images[i];
    double best_u = lo;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const TorusPoint img = iterate_lift(f, point_at(mid), k);
      best = img;
      best_u = mid;
      if ((img.t < target) == increasing) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (std::fabs(img.t - target) < 1e-12) break;
    }
    if (accept(best_u, best)) return out;
  }
  return out;
}

}  // namespace torlab
