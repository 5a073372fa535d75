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

#include "torlab/covering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <sstream>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"

namespace torlab {

namespace {

int wrap_index(int i, int m) {
  i %= m;
  return i < 0 ? i + m : i;
}

}  // namespace

BoxDomain::BoxDomain(int m) : m_(m) {
  require(m >= 1 && m <= 65536, ErrorCode::kInvalidArgument, "box domain: grid resolution out of range");
  mask_.assign(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);
}

BoxDomain::BoxDomain(int m, std::span<const Cell> cells) : BoxDomain(m) {
  for (const Cell& c : cells) {
    require(c.i >= 0 && c.i < m && c.j >= 0 && c.j < m, ErrorCode::kInvalidArgument,
            "box domain: cell index out of range");
    insert(c.i, c.j);
  }
}

BoxDomain BoxDomain::full(int m) {
  BoxDomain d(m);
  std::fill(d.mask_.begin(), d.mask_.end(), 1);
  d.count_ = d.mask_.size();
  return d;
}

BoxDomain BoxDomain::ball(int m, TorusPoint center, double radius) {
  BoxDomain d(m);
  const double h = 1.0 / m;
  auto axis_gap = [h](double x, int i) {
    return std::max(0.0, std::fabs(circle_offset(x - (i + 0.5) * h)) - 0.5 * h);
  };
  for (int i = 0; i < m; ++i) {
    const double ds = axis_gap(center.s, i);
    if (ds >= radius) continue;
    for (int j = 0; j < m; ++j) {
      if (std::hypot(ds, axis_gap(center.t, j)) < radius) d.insert(i, j);
    }
  }
  return d;
}

bool BoxDomain::contains(int i, int j) const {
  return mask_[id(wrap_index(i, m_), wrap_index(j, m_))] != 0;
}

bool BoxDomain::lifted_contains(double x, double y) const {
  const auto i = static_cast<int>(std::floor(x * m_));
  const auto j = static_cast<int>(std::floor(y * m_));
  return contains(i, j);
}

void BoxDomain::insert(int i, int j) { insert_id(id(wrap_index(i, m_), wrap_index(j, m_))); }

void BoxDomain::insert_id(std::uint32_t id) {
  if (mask_[id] == 0) {
    mask_[id] = 1;
    ++count_;
  }
}

std::uint32_t BoxDomain::id(int i, int j) const {
  return static_cast<std::uint32_t>(i) * static_cast<std::uint32_t>(m_) + static_cast<std::uint32_t>(j);
}

Cell BoxDomain::cell(std::uint32_t id) const {
  return {static_cast<int>(id / static_cast<std::uint32_t>(m_)),
          static_cast<int>(id % static_cast<std::uint32_t>(m_))};
}

std::vector<Cell> BoxDomain::cells() const {
  std::vector<Cell> out;
  out.reserve(count_);
  for (std::uint32_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k]) out.push_back(cell(k));
  }
  return out;
}

std::vector<std::uint32_t> BoxDomain::ids() const {
  std::vector<std::uint32_t> out;
  out.reserve(count_);
  for (std::uint32_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k]) out.push_back(k);
  }
  return out;
}

BoxDomain BoxDomain::translated(int di, int dj) const {
  BoxDomain out(m_);
  for (const Cell& c : cells()) out.insert(c.i + di, c.j + dj);
  return out;
}

BoxDomain BoxDomain::refined() const {
  BoxDomain out(2 * m_);
  for (const Cell& c : cells()) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) out.insert(2 * c.i + a, 2 * c.j + b);
    }
  }
  return out;
}

bool BoxDomain::intersects(const BoxDomain& other) const {
  require(other.m_ == m_, ErrorCode::kInvalidArgument, "box domains on different grids");
  for (std::size_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k] && other.mask_[k]) return true;
  }
  return false;
}

BoxDomain BoxDomain::united(const BoxDomain& other) const {
  require(other.m_ == m_, ErrorCode::kInvalidArgument, "box domains on different grids");
  BoxDomain out = *this;
  for (std::uint32_t k = 0; k < mask_.size(); ++k) {
    if (other.mask_[k]) out.insert_id(k);
  }
  return out;
}

bool BoxDomain::subset_of(const BoxDomain& other) const {
  require(other.m_ == m_, ErrorCode::kInvalidArgument, "box domains on different grids");
  for (std::size_t k = 0; k < mask_.size(); ++k) {
    if (mask_[k] && !other.mask_[k]) return false;
  }
  return true;
}

namespace {

constexpr std::array<std::array<int, 2>, 4> kFourNeighbours{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<std::array<int, 2>, 8> kEightNeighbours{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

// Running Hermite form of a subgroup of Z^2: rows (a, b) and (0, c).
class HermiteAccumulator {
 public:
  void add(std::int64_t x, std::int64_t y) {
    if (x == 0 && y == 0) return;
    if (x == 0 && a_ == 0) {
      c_ = std::gcd(c_, y);
    } else {
      // u a + w x = g, and (x/g) row1 - (a/g) v has zero first entry.
      auto [g, u, w] = extended_gcd(a_, x);
      const std::int64_t na = u * a_ + w * x;
      const std::int64_t nb = u * b_ + w * y;
      const std::int64_t other = (x / g) * b_ - (a_ / g) * y;
      a_ = na;
      b_ = nb;
      c_ = std::gcd(c_, other);
    }
    normalize();
  }

  std::vector<DeckVector> basis() const {
    std::vector<DeckVector> out;
    if (a_ != 0) out.push_back({a_, b_});
    if (c_ != 0) out.push_back({0, c_});
    return out;
  }

 private:
  static std::array<std::int64_t, 3> extended_gcd(std::int64_t p, std::int64_t q) {
    std::int64_t old_r = p, r = q, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      const std::int64_t quot = old_r / r;
      std::int64_t tmp = old_r - quot * r;
      old_r = r;
      r = tmp;
      tmp = old_s - quot * s;
      old_s = s;
      s = tmp;
      tmp = old_t - quot * t;
      old_t = t;
      t = tmp;
    }
    if (old_r < 0) return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
  }

  void normalize() {
    c_ = std::abs(c_);
    if (a_ < 0) {
      a_ = -a_;
      b_ = -b_;
    }
    if (a_ == 0 && b_ != 0) {
      c_ = std::gcd(c_, b_);
      b_ = 0;
    }
    if (c_ != 0 && a_ != 0) {
      b_ %= c_;
      if (b_ < 0) b_ += c_;
    }
    if (a_ == 0 && c_ == 0) b_ = 0;
    // Rank one with a single row (a, b): make it the canonical primitive
    // direction sign (first nonzero entry positive) already ensured by a > 0.
  }

  std::int64_t a_ = 0, b_ = 0, c_ = 0;
};

struct LiftedComponent {
  std::vector<std::uint32_t> cells;
  std::vector<DeckVector> offsets;  // parallel to cells: cell lifts to (i, j) + m * offset
  std::vector<DeckVector> basis;
};

template <std::size_t N>
LiftedComponent lift_component(const std::vector<std::uint8_t>& mask, int m, std::uint32_t root,
                               const std::array<std::array<int, 2>, N>& neighbours,
                               std::vector<std::int64_t>& slot, std::mt19937_64* rng) {
  LiftedComponent out;
  HermiteAccumulator acc;
  std::deque<std::uint32_t> queue{root};
  slot[root] = 0;
  out.cells.push_back(root);
  out.offsets.push_back({0, 0});
  auto order = neighbours;
  while (!queue.empty()) {
    const std::uint32_t c = queue.front();
    queue.pop_front();
    const DeckVector pc = out.offsets[static_cast<std::size_t>(slot[c])];
    const int ci = static_cast<int>(c / static_cast<std::uint32_t>(m));
    const int cj = static_cast<int>(c % static_cast<std::uint32_t>(m));
    if (rng) std::shuffle(order.begin(), order.end(), *rng);
    for (const auto& nb : order) {
      int ni = ci + nb[0];
      int nj = cj + nb[1];
      DeckVector w{0, 0};
      if (ni < 0) { ni += m; w.p = -1; }
      if (ni >= m) { ni -= m; w.p = 1; }
      if (nj < 0) { nj += m; w.q = -1; }
      if (nj >= m) { nj -= m; w.q = 1; }
      const auto d = static_cast<std::uint32_t>(ni) * static_cast<std::uint32_t>(m) +
                     static_cast<std::uint32_t>(nj);
      if (!mask[d]) continue;
      if (slot[d] < 0) {
        slot[d] = static_cast<std::int64_t>(out.cells.size());
        out.cells.push_back(d);
        out.offsets.push_back({pc.p + w.p, pc.q + w.q});
        queue.push_back(d);
      } else {
        const DeckVector pd = out.offsets[static_cast<std::size_t>(slot[d])];
        acc.add(pc.p + w.p - pd.p, pc.q + w.q - pd.q);
      }
    }
  }
  out.basis = acc.basis();
  return out;
}

template <std::size_t N>
std::vector<LiftedComponent> lift_all(const std::vector<std::uint8_t>& mask, int m,
                                      const std::array<std::array<int, 2>, N>& neighbours,
                                      std::uint64_t seed) {
  std::vector<std::int64_t> slot(mask.size(), -1);
  std::vector<LiftedComponent> comps;
  std::mt19937_64 rng(seed);
  std::mt19937_64* rng_ptr = seed != 0 ? &rng : nullptr;
  for (std::uint32_t k = 0; k < mask.size(); ++k) {
    if (!mask[k] || slot[k] >= 0) continue;
    // With a seed, root the tree at a random cell of this component.
    std::uint32_t root = k;
    if (rng_ptr) {
      std::vector<std::int64_t> probe(mask.size(), -1);
      const auto members = lift_component(mask, m, k, neighbours, probe, nullptr).cells;
      root = members[rng() % members.size()];
    }
    comps.push_back(lift_component(mask, m, root, neighbours, slot, rng_ptr));
  }
  return comps;
}

}  // namespace

std::vector<BoxDomain> BoxDomain::components() const {
  std::vector<BoxDomain> out;
  for (const auto& comp : lift_all(mask_, m_, kFourNeighbours, 0)) {
    BoxDomain d(m_);
    for (std::uint32_t c : comp.cells) d.insert_id(c);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DeckVector> subgroup_basis(std::span<const DeckVector> generators) {
  HermiteAccumulator acc;
  for (const DeckVector& v : generators) acc.add(v.p, v.q);
  return acc.basis();
}

const char* essentiality_name(Essentiality e) {
  switch (e) {
    case Essentiality::kInessential: return "inessential";
    case Essentiality::kSimplyEssential: return "simply-essential";
    case Essentiality::kDoublyEssential: return "doubly-essential";
  }
  return "unknown";
}

EssentialityResult classify_essentiality(const BoxDomain& domain, std::uint64_t tree_seed) {
  require(!domain.empty(), ErrorCode::kInvalidArgument, "classify_essentiality: empty domain");
  const int m = domain.resolution();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (std::uint32_t k : domain.ids()) mask[k] = 1;
  EssentialityResult best;
  bool first = true;
  for (const auto& comp : lift_all(mask, m, kFourNeighbours, tree_seed)) {
    const int rank = static_cast<int>(comp.basis.size());
    if (first || rank > best.rank()) {
      best.cls = static_cast<Essentiality>(rank);
      best.basis = comp.basis;
      BoxDomain d(m);
      for (std::uint32_t c : comp.cells) d.insert_id(c);
      best.component = std::move(d);
      first = false;
    }
  }
  // Components come out in an order that depends on the seeded root choice;
  // the achieving component is normalized to the first one in id order.
  if (tree_seed != 0) {
    for (const BoxDomain& comp : domain.components()) {
      if (classify_essentiality(comp, 0).rank() == best.rank()) {
        best.component = comp;
        break;
      }
    }
  }
  return best;
}

bool essential_intersection_check(const BoxDomain& u, const BoxDomain& v) {
  require(u.resolution() == v.resolution(), ErrorCode::kInvalidArgument,
          "essential_intersection_check: domains on different grids");
  require(classify_essentiality(u).cls == Essentiality::kDoublyEssential &&
              classify_essentiality(v).cls == Essentiality::kDoublyEssential,
          ErrorCode::kPrecondition, "essential_intersection_check: both domains must be doubly essential");
  return u.intersects(v);
}

namespace {

struct IPoint {
  std::int64_t x, y;
  friend bool operator<(const IPoint& a, const IPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
  friend bool operator==(const IPoint&, const IPoint&) = default;
};

std::int64_t cross(const IPoint& o, const IPoint& a, const IPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::int64_t squared_diameter(std::vector<IPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    std::int64_t best = 0;
    for (const auto& p : pts) {
      for (const auto& q : pts) best = std::max(best, (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y));
    }
    return best;
  }
  std::vector<IPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  std::int64_t best = 0;
  for (std::size_t a = 0; a < hull.size(); ++a) {
    for (std::size_t b = a + 1; b < hull.size(); ++b) {
      const std::int64_t dx = hull[a].x - hull[b].x;
      const std::int64_t dy = hull[a].y - hull[b].y;
      best = std::max(best, dx * dx + dy * dy);
    }
  }
  return best;
}

}  // namespace

double compute_capture_diameter(const BoxDomain& u) {
  require(!u.empty() && classify_essentiality(u).cls == Essentiality::kDoublyEssential,
          ErrorCode::kPrecondition,
          "compute_capture_diameter: domain must be doubly essential (complement components are unbounded otherwise)");
  const int m = u.resolution();
  std::vector<std::uint8_t> complement(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 1);
  for (std::uint32_t k : u.ids()) complement[k] = 0;
  std::int64_t best = 0;
  for (const auto& comp : lift_all(complement, m, kEightNeighbours, 0)) {
    require(comp.basis.empty(), ErrorCode::kPrecondition,
            "compute_capture_diameter: a complement component is unbounded in the cover");
    std::vector<IPoint> corners;
    corners.reserve(4 * comp.cells.size());
    for (std::size_t n = 0; n < comp.cells.size(); ++n) {
      const std::int64_t i = comp.cells[n] / static_cast<std::uint32_t>(m);
      const std::int64_t j = comp.cells[n] % static_cast<std::uint32_t>(m);
      const std::int64_t x = i + m * comp.offsets[n].p;
      const std::int64_t y = j + m * comp.offsets[n].q;
      corners.push_back({x, y});
      corners.push_back({x + 1, y});
      corners.push_back({x, y + 1});
      corners.push_back({x + 1, y + 1});
    }
    best = std::max(best, squared_diameter(std::move(corners)));
  }
  return std::sqrt(static_cast<double>(best)) / m;
}

void cells_meeting(int m, const LiftRect& rect, double fatten, std::vector<std::uint32_t>& out) {
  out.clear();
  auto axis = [m](double lo, double hi) {
    std::vector<int> idx;
    if (hi - lo >= 1.0) {
      idx.resize(static_cast<std::size_t>(m));
      std::iota(idx.begin(), idx.end(), 0);
      return idx;
    }
    const auto first = static_cast<std::int64_t>(std::ceil(lo * m)) - 1;
    const auto last = static_cast<std::int64_t>(std::floor(hi * m));
    if (last - first + 1 >= m) {
      idx.resize(static_cast<std::size_t>(m));
      std::iota(idx.begin(), idx.end(), 0);
      return idx;
    }
    for (std::int64_t k = first; k <= last; ++k) {
      std::int64_t w = k % m;
      if (w < 0) w += m;
      idx.push_back(static_cast<int>(w));
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
  };
  const auto is = axis(rect.s0 - fatten, rect.s1 + fatten);
  const auto js = axis(rect.t0 - fatten, rect.t1 + fatten);
  out.reserve(is.size() * js.size());
  for (int i : is) {
    for (int j : js) {
      out.push_back(static_cast<std::uint32_t>(i) * static_cast<std::uint32_t>(m) + static_cast<std::uint32_t>(j));
    }
  }
}

BoxDomain forward_invariant_hull(const SkewProduct& f, const BoxDomain& u0, int n_max, int threads) {
  require(n_max >= 1, ErrorCode::kInvalidArgument, "forward_invariant_hull: n_max must be >= 1");
  const int m = u0.resolution();
  const double h = 1.0 / m;
  auto images_of = [&](const std::vector<std::uint32_t>& cells) {
    std::vector<std::vector<std::uint32_t>> images(cells.size());
    parallel_for(cells.size(), threads, [&](std::size_t k) {
      const Cell c = u0.cell(cells[k]);
      const LiftRect r{c.i * h, (c.i + 1) * h, c.j * h, (c.j + 1) * h};
      cells_meeting(m, f.enclosure(r), 0.0, images[k]);
    });
    return images;
  };

  BoxDomain hull(m);
  std::vector<std::uint32_t> frontier = u0.ids();
  for (int n = 1; n <= n_max && !frontier.empty(); ++n) {
    std::vector<std::uint32_t> fresh;
    for (const auto& image : images_of(frontier)) {
      for (std::uint32_t c : image) {
        if (!hull.contains_id(c)) {
          hull.insert_id(c);
          fresh.push_back(c);
        }
      }
    }
    std::sort(fresh.begin(), fresh.end());
    frontier = std::move(fresh);
  }
  return hull;
}

// ---------------------------------------------------------------------------

std::string serialize_domain(const BoxDomain& domain) {
  std::ostringstream os;
  const int m = domain.resolution();
  os << "boxdomain " << m << ' ' << domain.size() << '\n';
  for (int i = 0; i < m; ++i) {
    int j = 0;
    while (j < m) {
      if (!domain.contains(i, j)) {
        ++j;
        continue;
      }
      const int start = j;
      while (j < m && domain.contains(i, j)) ++j;
      os << i << ' ' << start << ' ' << (j - start) << '\n';
    }
  }
  return os.str();
}

BoxDomain parse_domain(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string tag;
  long long m = 0;
  long long count = 0;
  if (!(is >> tag >> m >> count) || tag != "boxdomain") {
    fail(ErrorCode::kInvalidArgument, "parse_domain: missing 'boxdomain <m> <count>' header");
  }
  require(m >= 1 && m <= 65536 && count >= 0 && count <= m * m, ErrorCode::kInvalidArgument,
          "parse_domain: header values out of range");
  BoxDomain d(static_cast<int>(m));
  long long i = 0, j = 0, run = 0;
  long long prev_i = -1, prev_end = 0;
  while (is >> i >> j >> run) {
    require(i >= 0 && i < m && j >= 0 && run >= 1 && j + run <= m, ErrorCode::kInvalidArgument,
            "parse_domain: run out of range");
    require(i > prev_i || (i == prev_i && j > prev_end), ErrorCode::kInvalidArgument,
            "parse_domain: runs must be increasing and non-adjacent");
    for (long long k = j; k < j + run; ++k) d.insert(static_cast<int>(i), static_cast<int>(k));
    prev_i = i;
    prev_end = j + run;
  }
  require(is.eof(), ErrorCode::kInvalidArgument, "parse_domain: trailing garbage");
  require(static_cast<long long>(d.size()) == count, ErrorCode::kInvalidArgument,
          "parse_domain: cell count does not match header");
  return d;
}

// ---------------------------------------------------------------------------

BoxDomain cross_domain(int m, double width) {
  require(width > 0.0 && width < 1.0, ErrorCode::kInvalidArgument, "cross_domain: width must lie in (0,1)");
  BoxDomain d(m);
  const int w = std::max(1, static_cast<int>(std::lround(width * m)));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i < w || j < w) d.insert(i, j);
    }
  }
  return d;
}

BoxDomain random_doubly_essential(int m, std::uint64_t seed) {
  require(m >= 2, ErrorCode::kInvalidArgument, "random_doubly_essential: grid too small");
  std::mt19937_64 rng(seed);
  BoxDomain d(m);
  // Walk once around in the first coordinate (axis 0) or the second (axis 1),
  // drifting randomly across, then walk back to the start across.
  auto loop = [&](int axis) {
    int along = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    const int across0 = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    int across = across0;
    auto put = [&] { axis == 0 ? d.insert(along, across) : d.insert(across, along); };
    put();
    for (int step = 0; step < m; ++step) {
      const int drift = static_cast<int>(rng() % 3) - 1;
      if (drift != 0) {
        across += drift;
        put();
      }
      ++along;
      put();
    }
    while (across != across0) {
      across += across < across0 ? 1 : -1;
      put();
    }
  };
  loop(0);
  loop(1);
  const auto base = d.cells();
  for (const Cell& c : base) {
    if (rng() % 4 == 0) d.insert(c.i + 1, c.j);
    if (rng() % 4 == 0) d.insert(c.i, c.j + 1);
  }
  return d;
}

std::vector<TorusPoint> random_polyline(double diameter, std::uint64_t seed) {
  require(diameter > 0.0, ErrorCode::kInvalidArgument, "random_polyline: diameter must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<TorusPoint> pts{{unit(rng), unit(rng)}};
  double current = 0.0;
  const double step = std::max(0.02, diameter / 8.0);
  while (current <= diameter) {
    const double angle = 2.0 * 3.14159265358979323846 * unit(rng);
    const double len = step * (0.5 + unit(rng));
    const TorusPoint next{pts.back().s + len * std::cos(angle), pts.back().t + len * std::sin(angle)};
    pts.push_back(next);
    for (const TorusPoint& p : pts) current = std::max(current, std::hypot(p.s - next.s, p.t - next.t));
  }
  return pts;
}

bool lifted_path_meets(const BoxDomain& u, std::span<const TorusPoint> polyline) {
  if (polyline.empty()) return false;
  const double spacing = 1.0 / (16.0 * u.resolution());
  if (u.lifted_contains(polyline[0].s, polyline[0].t)) return true;
  for (std::size_t k = 1; k < polyline.size(); ++k) {
    const TorusPoint a = polyline[k - 1];
    const TorusPoint b = polyline[k];
    const auto steps = static_cast<int>(std::ceil(std::hypot(b.s - a.s, b.t - a.t) / spacing));
    for (int q = 1; q <= steps; ++q) {
      const double w = static_cast<double>(q) / steps;
      if (u.lifted_contains(a.s + w * (b.s - a.s), a.t + w * (b.t - a.t))) return true;
    }
  }
  return false;
}

}  // namespace torlab
