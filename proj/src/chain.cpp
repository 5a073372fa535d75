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

#include "torlab/chain.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "torlab/error.hpp"
#include "torlab/parallel.hpp"

namespace torlab {

namespace {

constexpr std::uint64_t kMaxEdges = 400'000'000;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shift a lifted rectangle so that s0, t0 lie in [0, 1); widths of a full
// turn or more collapse to exactly one turn.
LiftRect normalize(LiftRect r) {
  if (r.s1 - r.s0 >= 1.0) {
    r.s0 = 0.0;
    r.s1 = 1.0;
  } else {
    const double fs = std::floor(r.s0);
    r.s0 -= fs;
    r.s1 -= fs;
  }
  if (r.t1 - r.t0 >= 1.0) {
    r.t0 = 0.0;
    r.t1 = 1.0;
  } else {
    const double ft = std::floor(r.t0);
    r.t0 -= ft;
    r.t1 -= ft;
  }
  return r;
}

// Closed arcs [a0, a1] and [b0, b1] of the circle meet.
bool arcs_meet(double a0, double a1, double b0, double b1) {
  if (a1 - a0 >= 1.0 || b1 - b0 >= 1.0) return true;
  return std::ceil(b0 - a1) <= std::floor(b1 - a0);
}

bool rects_meet(const LiftRect& a, const LiftRect& b) {
  return arcs_meet(a.s0, a.s1, b.s0, b.s1) && arcs_meet(a.t0, a.t1, b.t0, b.t1);
}

double box_distance(int m, std::uint32_t box, TorusPoint z) {
  const double h = 1.0 / m;
  const int i = static_cast<int>(box / static_cast<std::uint32_t>(m));
  const int j = static_cast<int>(box % static_cast<std::uint32_t>(m));
  const double ds = std::max(0.0, std::fabs(circle_offset(z.s - (i + 0.5) * h)) - 0.5 * h);
  const double dt = std::max(0.0, std::fabs(circle_offset(z.t - (j + 0.5) * h)) - 0.5 * h);
  return std::hypot(ds, dt);
}

}  // namespace

const char* enclosure_mode_name(EnclosureMode mode) {
  return mode == EnclosureMode::kSampled ? "sampled" : "outer-bound";
}

std::span<const std::uint32_t> TransitionGraph::successors(std::uint32_t box) const {
  return {targets.data() + offsets[box], static_cast<std::size_t>(offsets[box + 1] - offsets[box])};
}

bool TransitionGraph::has_edge(std::uint32_t from, std::uint32_t to) const {
  const auto succ = successors(from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::uint32_t box_of(int m, TorusPoint z) {
  z = wrap(z);
  const int i = std::min(m - 1, static_cast<int>(z.s * m));
  const int j = std::min(m - 1, static_cast<int>(z.t * m));
  return static_cast<std::uint32_t>(i) * static_cast<std::uint32_t>(m) + static_cast<std::uint32_t>(j);
}

LiftRect box_rect(int m, std::uint32_t box) {
  const double h = 1.0 / m;
  const auto i = box / static_cast<std::uint32_t>(m);
  const auto j = box % static_cast<std::uint32_t>(m);
  return {i * h, (i + 1) * h, j * h, (j + 1) * h};
}

TransitionGraph build_transition_graph(const SkewProduct& f, int m, double epsilon, EnclosureMode mode,
                                       int samples_per_axis, int threads) {
  require(m >= 1 && m <= 4096, ErrorCode::kInvalidArgument, "build_transition_graph: grid out of range");
  require(std::isfinite(epsilon) && epsilon * (1.0 + 1e-12) >= std::sqrt(2.0) / m,
          ErrorCode::kInvalidArgument, "build_transition_graph: epsilon must be >= sqrt(2)/m");
  require(samples_per_axis >= 1, ErrorCode::kInvalidArgument, "build_transition_graph: need samples");
  TransitionGraph g;
  g.m = m;
  g.epsilon = epsilon;
  g.mode = mode;
  const std::size_t n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);

  std::vector<double> margins(static_cast<std::size_t>(m));
  parallel_for(margins.size(), threads, [&](std::size_t i) {
    const auto [lo, hi] = f.fiber().rotation_range(static_cast<double>(i) / m, static_cast<double>(i + 1) / m);
    margins[i] = hi - lo;
  });
  g.fiber_margin = *std::max_element(margins.begin(), margins.end());

  std::vector<std::vector<std::uint32_t>> adj(n);
  parallel_for(n, threads, [&](std::size_t b) {
    const auto box = static_cast<std::uint32_t>(b);
    auto& out = adj[b];
    if (mode == EnclosureMode::kOuterBound) {
      cells_meeting(m, f.enclosure(box_rect(m, box)), epsilon, out);
      std::sort(out.begin(), out.end());
      return;
    }
    const LiftRect r = box_rect(m, box);
    std::vector<std::uint32_t> tmp;
    for (int a = 0; a < samples_per_axis; ++a) {
      for (int c = 0; c < samples_per_axis; ++c) {
        const TorusPoint p{r.s0 + (a + 0.5) / samples_per_axis * (r.s1 - r.s0),
                           r.t0 + (c + 0.5) / samples_per_axis * (r.t1 - r.t0)};
        const TorusPoint q = f(p);
        cells_meeting(m, {q.s, q.s, q.t, q.t}, epsilon, tmp);
        out.insert(out.end(), tmp.begin(), tmp.end());
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  });

  g.offsets.resize(n + 1, 0);
  for (std::size_t b = 0; b < n; ++b) g.offsets[b + 1] = g.offsets[b] + adj[b].size();
  require(g.offsets[n] <= kMaxEdges, ErrorCode::kBudgetExhausted, "build_transition_graph: edge budget exceeded");
  g.targets.reserve(g.offsets[n]);
  for (auto& row : adj) {
    g.targets.insert(g.targets.end(), row.begin(), row.end());
    std::vector<std::uint32_t>().swap(row);
  }
  return g;
}

TransitionGraph graph_from_edges(int m, double epsilon,
                                 std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) {
  require(m >= 1, ErrorCode::kInvalidArgument, "graph_from_edges: grid out of range");
  const std::size_t n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  TransitionGraph g;
  g.m = m;
  g.epsilon = epsilon;
  g.offsets.assign(n + 1, 0);
  for (const auto& [a, b] : edges) {
    require(a < n && b < n, ErrorCode::kInvalidArgument, "graph_from_edges: box id out of range");
    ++g.offsets[a + 1];
  }
  for (std::size_t b = 0; b < n; ++b) g.offsets[b + 1] += g.offsets[b];
  g.targets.reserve(edges.size());
  for (const auto& e : edges) g.targets.push_back(e.second);
  return g;
}

std::optional<std::vector<std::uint32_t>> chain_path(const TransitionGraph& graph,
                                                     std::span<const std::uint32_t> from,
                                                     std::span<const std::uint32_t> to) {
  require(!from.empty() && !to.empty(), ErrorCode::kInvalidArgument, "chain_path: empty box set");
  const std::size_t n = graph.node_count();
  std::vector<std::uint8_t> is_target(n, 0);
  for (std::uint32_t b : to) {
    require(b < n, ErrorCode::kInvalidArgument, "chain_path: box id out of range");
    is_target[b] = 1;
  }
  constexpr std::int64_t kUnseen = -2;
  std::vector<std::int64_t> parent(n, kUnseen);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t b : from) {
    require(b < n, ErrorCode::kInvalidArgument, "chain_path: box id out of range");
    if (parent[b] == kUnseen) {
      parent[b] = -1;
      queue.push_back(b);
    }
  }
  while (!queue.empty()) {
    const std::uint32_t u = queue.front();
    queue.pop_front();
    for (std::uint32_t v : graph.successors(u)) {
      if (is_target[v]) {
        std::vector<std::uint32_t> path{v};
        for (std::int64_t w = u; w >= 0; w = parent[static_cast<std::size_t>(w)]) {
          path.push_back(static_cast<std::uint32_t>(w));
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (parent[v] == kUnseen) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  return std::nullopt;
}

SccDecomposition strongly_connected_components(const TransitionGraph& graph) {
  // Iterative Tarjan.
  const std::size_t n = graph.node_count();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kNone), low(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> call;  // node, next edge
  SccDecomposition out;
  out.component.assign(n, kNone);
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, graph.offsets[root]});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < graph.offsets[v + 1]) {
        const std::uint32_t w = graph.targets[e++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, graph.offsets[w]});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::uint32_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        const auto id = static_cast<std::uint32_t>(out.count++);
        std::size_t size = 0;
        std::uint32_t w = kNone;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.component[w] = id;
          ++size;
        } while (w != done);
        out.recurrent.push_back(size > 1 || graph.has_edge(done, done) ? 1 : 0);
      }
    }
  }
  return out;
}

ChainReport chain_transitivity_report(const TransitionGraph& graph, int trials, std::uint64_t seed) {
  require(trials >= 0, ErrorCode::kInvalidArgument, "chain_transitivity_report: negative trials");
  ChainReport r;
  r.m = graph.m;
  r.epsilon = graph.epsilon;
  r.edge_count = graph.edge_count();
  r.fiber_margin = graph.fiber_margin;
  r.trials = trials;
  const std::size_t n = graph.node_count();
  std::mt19937_64 rng(seed);
  for (int k = 0; k < trials; ++k) {
    ChainPairResult p;
    p.from = static_cast<std::uint32_t>(rng() % n);
    p.to = static_cast<std::uint32_t>(rng() % n);
    const std::uint32_t a[1] = {p.from};
    const std::uint32_t b[1] = {p.to};
    if (auto path = chain_path(graph, a, b)) {
      p.connected = true;
      p.path_length = path->size() - 1;
      ++r.connected;
      r.max_path_length = std::max(r.max_path_length, p.path_length);
    }
    r.pairs.push_back(p);
  }
  const SccDecomposition scc = strongly_connected_components(graph);
  for (std::size_t v = 0; v < n; ++v) r.chain_recurrent_boxes += scc.recurrent[scc.component[v]];
  for (std::uint8_t rec : scc.recurrent) r.recurrent_components += rec;
  r.single_recurrent_component = r.recurrent_components == 1;
  return r;
}

ChainReport chain_transitivity_report(const SkewProduct& f, int m, double epsilon, int trials,
                                      std::uint64_t seed, int threads) {
  const TransitionGraph g = build_transition_graph(f, m, epsilon, EnclosureMode::kOuterBound, 4, threads);
  return chain_transitivity_report(g, trials, seed);
}

std::string export_edge_list(const TransitionGraph& graph) {
  std::string out = "edges " + std::to_string(graph.m) + ' ' + std::to_string(graph.edge_count()) + '\n';
  for (std::uint32_t v = 0; v < graph.node_count(); ++v) {
    for (std::uint32_t w : graph.successors(v)) {
      out += std::to_string(v);
      out += ' ';
      out += std::to_string(w);
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t NonwanderingApprox::returning_count() const {
  return static_cast<std::size_t>(std::count(returning.begin(), returning.end(), std::uint8_t{1}));
}

BoxDomain NonwanderingApprox::returning_domain() const {
  BoxDomain d(m);
  for (std::uint32_t k = 0; k < returning.size(); ++k) {
    if (returning[k]) d.insert_id(k);
  }
  return d;
}

BoxDomain NonwanderingApprox::nonreturning_domain() const {
  BoxDomain d(m);
  for (std::uint32_t k = 0; k < returning.size(); ++k) {
    if (!returning[k]) d.insert_id(k);
  }
  return d;
}

double NonwanderingApprox::distance_to_returning(TorusPoint z, double radius) const {
  z = wrap(z);
  const int reach = std::min(m / 2 + 1, static_cast<int>(std::ceil(radius * m)) + 1);
  const int ci = std::min(m - 1, static_cast<int>(z.s * m));
  const int cj = std::min(m - 1, static_cast<int>(z.t * m));
  double best = std::numeric_limits<double>::infinity();
  for (int di = -reach; di <= reach; ++di) {
    for (int dj = -reach; dj <= reach; ++dj) {
      const int i = ((ci + di) % m + m) % m;
      const int j = ((cj + dj) % m + m) % m;
      const auto box = static_cast<std::uint32_t>(i) * static_cast<std::uint32_t>(m) + static_cast<std::uint32_t>(j);
      if (!returning[box]) continue;
      best = std::min(best, box_distance(m, box, z));
    }
  }
  return best <= radius ? best : std::numeric_limits<double>::infinity();
}

std::int32_t box_return_time(const SkewProduct& f, int m, std::uint32_t box, int n_max) {
  const LiftRect home = box_rect(m, box);
  LiftRect r = home;
  for (int n = 1; n <= n_max; ++n) {
    r = normalize(f.enclosure(r));
    if (rects_meet(r, home)) return n;
  }
  return 0;
}

NonwanderingApprox nonwandering_approx(const SkewProduct& f, int m, int n_max, int threads) {
  require(m >= 1 && m <= 4096, ErrorCode::kInvalidArgument, "nonwandering_approx: grid out of range");
  require(n_max >= 1, ErrorCode::kInvalidArgument, "nonwandering_approx: n_max must be >= 1");
  NonwanderingApprox out;
  out.m = m;
  out.n_max = n_max;
  const std::size_t n = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  out.returning.assign(n, 0);
  out.return_time.assign(n, 0);

  // A whole column (or row) whose strip enclosure never comes back to the
  // strip is certified at once.
  std::vector<std::uint8_t> strip_returns(2 * static_cast<std::size_t>(m), 0);
  parallel_for(strip_returns.size(), threads, [&](std::size_t k) {
    const double lo = static_cast<double>(k % m) / m;
    const double hi = static_cast<double>(k % m + 1) / m;
    const bool column = k < static_cast<std::size_t>(m);
    const LiftRect home = column ? LiftRect{lo, hi, 0.0, 1.0} : LiftRect{0.0, 1.0, lo, hi};
    LiftRect r = home;
    for (int n = 1; n <= n_max; ++n) {
      r = normalize(f.enclosure(r));
      if (rects_meet(r, home)) {
        strip_returns[k] = 1;
        return;
      }
    }
  });

  std::vector<std::uint32_t> pending;
  for (std::uint32_t b = 0; b < n; ++b) {
    const std::uint32_t i = b / static_cast<std::uint32_t>(m);
    const std::uint32_t j = b % static_cast<std::uint32_t>(m);
    if (strip_returns[i] && strip_returns[static_cast<std::size_t>(m) + j]) pending.push_back(b);
  }
  parallel_for(pending.size(), threads, [&](std::size_t k) {
    const std::uint32_t box = pending[k];
    const std::int32_t t = box_return_time(f, m, box, n_max);
    out.return_time[box] = t;
    out.returning[box] = t > 0 ? 1 : 0;
  });
  return out;
}

// ---------------------------------------------------------------------------

PseudoOrbitCheck validate_pseudo_orbit(const SkewProduct& f, const PseudoOrbit& po) {
  require(po.points.size() >= 2, ErrorCode::kInvalidArgument, "validate_pseudo_orbit: need n >= 1");
  require(po.epsilon > 0.0, ErrorCode::kInvalidArgument, "validate_pseudo_orbit: epsilon must be positive");
  PseudoOrbitCheck c;
  c.valid = true;
  for (std::size_t i = 0; i + 1 < po.points.size(); ++i) {
    const double d = torus_distance(f(po.points[i]), po.points[i + 1]);
    c.max_step_error = std::max(c.max_step_error, d);
    if (!(d < po.epsilon)) c.valid = false;
    if (d > kJumpTolerance) c.jumps.push_back(i);
  }
  c.jump_count = c.jumps.size();
  return c;
}

std::string serialize_pseudo_orbit(const PseudoOrbit& po) {
  std::string out = "pseudo-orbit\nepsilon " + format_real(po.epsilon) + '\n';
  out += "n " + std::to_string(po.points.empty() ? 0 : po.points.size() - 1) + '\n';
  out += "jumps " + std::to_string(po.jumps.size());
  for (std::size_t j : po.jumps) out += ' ' + std::to_string(j);
  out += '\n';
  for (const TorusPoint& p : po.points) out += format_real(p.s) + ' ' + format_real(p.t) + '\n';
  return out;
}

PseudoOrbit parse_pseudo_orbit(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string tag, key;
  PseudoOrbit po;
  long long n = 0;
  long long k = 0;
  auto bad = [](const char* what) { fail(ErrorCode::kInvalidArgument, std::string("parse_pseudo_orbit: ") + what); };
  if (!(is >> tag) || tag != "pseudo-orbit") bad("missing header");
  if (!(is >> key >> po.epsilon) || key != "epsilon") bad("missing epsilon");
  if (!(is >> key >> n) || key != "n" || n < 1) bad("missing or invalid n");
  if (!(is >> key >> k) || key != "jumps" || k < 0 || k > n) bad("missing or invalid jumps");
  for (long long i = 0; i < k; ++i) {
    long long j = 0;
    if (!(is >> j) || j < 0 || j >= n) bad("invalid jump index");
    po.jumps.push_back(static_cast<std::size_t>(j));
  }
  for (long long i = 0; i <= n; ++i) {
    TorusPoint p;
    if (!(is >> p.s >> p.t)) bad("truncated point list");
    po.points.push_back(p);
  }
  std::string rest;
  if (is >> rest) bad("trailing data");
  return po;
}

// ---------------------------------------------------------------------------

const char* search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::kSuccess: return "success";
    case SearchStatus::kConnectorExhausted: return "connector-budget-exhausted";
    case SearchStatus::kHorizonExhausted: return "omega-horizon-exhausted";
  }
  return "unknown";
}

namespace {

struct ConnectorHit {
  std::int64_t steps = 0;  // 0 when the sample missed
  double closest = std::numeric_limits<double>::infinity();
  std::int64_t evals = 0;
};

// Points of the dyadic 2^level grid on the square around c, kept when inside
// the open ball of the given radius.
std::vector<TorusPoint> ball_samples(TorusPoint c, double radius, int level) {
  const int g = 1 << level;
  std::vector<TorusPoint> pts;
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      const double ds = radius * (-1.0 + (2.0 * a + 1.0) / g);
      const double dt = radius * (-1.0 + (2.0 * b + 1.0) / g);
      if (std::hypot(ds, dt) < radius * (1.0 - 1e-9)) pts.push_back(wrap({c.s + ds, c.t + dt}));
    }
  }
  return pts;
}

}  // namespace

TwoJumpResult two_jump_pseudo_orbit(const SkewProduct& f, TorusPoint x, TorusPoint y, double epsilon,
                                    const TwoJumpBudgets& budgets, const NonwanderingApprox* omega) {
  require(epsilon > 0.0 && epsilon < 0.5, ErrorCode::kInvalidArgument, "two_jump_pseudo_orbit: epsilon out of range");
  require(budgets.min_level >= 1 && budgets.max_level >= budgets.min_level && budgets.max_level <= 12,
          ErrorCode::kInvalidArgument, "two_jump_pseudo_orbit: invalid sample levels");
  x = wrap(x);
  y = wrap(y);
  TwoJumpResult res;
  res.near_miss = std::numeric_limits<double>::infinity();
  res.orbit.epsilon = epsilon;

  // A genuine orbit from x to y needs no jump at all.
  {
    TorusPoint z = x;
    std::vector<TorusPoint> seg{x};
    for (std::int64_t j = 1; j <= budgets.orbit_precheck; ++j) {
      z = f(z);
      if (torus_distance(z, y) < kJumpTolerance) {
        seg.push_back(y);
        res.orbit.points = std::move(seg);
        res.status = SearchStatus::kSuccess;
        res.note = "orbit";
        res.near_miss = 0.0;
        res.orbit.jumps = validate_pseudo_orbit(f, res.orbit).jumps;
        return res;
      }
      seg.push_back(z);
    }
  }

  NonwanderingApprox local;
  if (omega == nullptr) {
    local = nonwandering_approx(f, budgets.omega_grid, budgets.omega_horizon, budgets.threads);
    omega = &local;
  }
  if (omega->returning_count() == 0) {
    res.status = SearchStatus::kHorizonExhausted;
    res.note = "no returning boxes at the Omega horizon";
    return res;
  }

  const double half = 0.5 * epsilon;
  const double strict = epsilon * (1.0 - 1e-9);
  std::vector<TorusPoint> fwd{x, f(x)};  // fwd[k] = f^k(x)
  std::vector<TorusPoint> bwd{y};        // bwd[k] = f^{-k}(y)
  int attempts = 0;
  std::int64_t n0 = 0;
  // Fixed batch size keeps the reported sample counts independent of threads.
  constexpr std::size_t batch = 32;

  while (attempts < budgets.n0_attempts) {
    // Next n0 with f^{n0+1}(x) and f^{-n0}(y) within epsilon/2 of Omega.
    bool found = false;
    while (n0 < budgets.n0_cap) {
      ++n0;
      while (static_cast<std::int64_t>(fwd.size()) <= n0 + 1) fwd.push_back(f(fwd.back()));
      while (static_cast<std::int64_t>(bwd.size()) <= n0) bwd.push_back(f.inverse(bwd.back()));
      if (omega->distance_to_returning(fwd[static_cast<std::size_t>(n0 + 1)], half) < half &&
          omega->distance_to_returning(bwd[static_cast<std::size_t>(n0)], half) < half) {
        found = true;
        break;
      }
    }
    if (!found) {
      if (attempts == 0) {
        res.status = SearchStatus::kHorizonExhausted;
        res.note = "no n0 found within the cap";
        return res;
      }
      break;
    }
    ++attempts;

    const TorusPoint center = fwd[static_cast<std::size_t>(n0)];
    const TorusPoint target = bwd[static_cast<std::size_t>(n0)];
    // Short connectors are common near wandering regions, so every sample
    // level is tried at a short horizon before any orbit runs long.
    std::vector<std::vector<TorusPoint>> levels;
    for (int level = budgets.min_level; level <= budgets.max_level; ++level) {
      levels.push_back(ball_samples(center, epsilon, level));
    }
    std::vector<std::int64_t> done(levels.size(), 0);
    for (std::int64_t horizon = std::min<std::int64_t>(1024, budgets.orbit_cap);;
         horizon = std::min(budgets.orbit_cap, horizon * 16)) {
      for (std::size_t li = 0; li < levels.size(); ++li) {
        const int level = budgets.min_level + static_cast<int>(li);
        const std::vector<TorusPoint>& pts = levels[li];
        const std::int64_t affordable =
            budgets.evals_per_level / std::max<std::int64_t>(1, static_cast<std::int64_t>(pts.size()));
        const std::int64_t length = std::clamp<std::int64_t>(std::min(horizon, affordable), 1, budgets.orbit_cap);
        if (length <= done[li]) continue;
        done[li] = length;
        std::vector<ConnectorHit> hits(pts.size());
        std::optional<std::size_t> winner;
        for (std::size_t lo = 0; lo < pts.size() && !winner; lo += batch) {
          const std::size_t hi = std::min(pts.size(), lo + batch);
          parallel_for(hi - lo, budgets.threads, [&](std::size_t k) {
            ConnectorHit& h = hits[lo + k];
            TorusPoint z = pts[lo + k];
            for (std::int64_t j = 1; j <= length; ++j) {
              z = f(z);
              const double d = torus_distance(z, target);
              h.closest = std::min(h.closest, d);
              if (d < strict) {
                h.steps = j;
                h.evals = j;
                return;
              }
            }
            h.evals = length;
          });
          for (std::size_t k = lo; k < hi; ++k) {
            res.samples += 1;
            res.evaluations += hits[k].evals;
            res.near_miss = std::min(res.near_miss, hits[k].closest);
            if (!winner && hits[k].steps > 0) winner = k;
          }
        }
        if (!winner) continue;

        const TorusPoint z0 = pts[*winner];
        const std::int64_t steps = hits[*winner].steps;
        PseudoOrbit& po = res.orbit;
        po.points.assign(fwd.begin(), fwd.begin() + n0);
        TorusPoint z = z0;
        for (std::int64_t j = 0; j < steps; ++j) {
          po.points.push_back(z);
          z = f(z);
        }
        for (std::int64_t k = n0; k >= 0; --k) po.points.push_back(bwd[static_cast<std::size_t>(k)]);
        const PseudoOrbitCheck check = validate_pseudo_orbit(f, po);
        require(check.valid && check.jump_count <= 2, ErrorCode::kNumeric,
                "two_jump_pseudo_orbit: assembled pseudo-orbit failed validation");
        po.jumps = check.jumps;
        res.status = SearchStatus::kSuccess;
        res.n0 = n0;
        res.connector_steps = steps;
        res.level = level;
        res.note = "two-jump";
        return res;
      }
      if (horizon >= budgets.orbit_cap) break;
    }
  }
  res.status = SearchStatus::kConnectorExhausted;
  res.n0 = n0;
  res.note = "connector search exhausted its budget";
  return res;
}

// ---------------------------------------------------------------------------

namespace {

bool enclosure_meets(int m, const LiftRect& r, const BoxDomain& v, const std::vector<std::uint8_t>& v_columns,
                     std::vector<std::uint32_t>& scratch) {
  LiftRect s_only{r.s0, r.s1, 0.0, 0.0};
  cells_meeting(m, s_only, 0.0, scratch);
  bool any_column = false;
  for (std::uint32_t c : scratch) {
    if (v_columns[c / static_cast<std::uint32_t>(m)]) {
      any_column = true;
      break;
    }
  }
  if (!any_column) return false;
  cells_meeting(m, r, 0.0, scratch);
  for (std::uint32_t c : scratch) {
    if (v.contains_id(c)) return true;
  }
  return false;
}

LiftRect iterate_rect(const SkewProduct& f, LiftRect r, std::int64_t n) {
  for (std::int64_t k = 0; k < n; ++k) r = normalize(f.enclosure(r));
  return r;
}

TorusPoint iterate_point(const SkewProduct& f, TorusPoint z, std::int64_t n) {
  for (std::int64_t k = 0; k < n; ++k) z = f(z);
  return z;
}

}  // namespace

WeakTransitivityResult weak_transitivity_check(const SkewProduct& f, const BoxDomain& u, const BoxDomain& v,
                                               const WeakTransitivityBudgets& budgets) {
  require(u.resolution() == v.resolution(), ErrorCode::kInvalidArgument,
          "weak_transitivity_check: domains on different grids");
  require(!u.empty() && !v.empty(), ErrorCode::kInvalidArgument, "weak_transitivity_check: empty domain");
  require(budgets.n_max >= 1 && budgets.samples_per_axis >= 1, ErrorCode::kInvalidArgument,
          "weak_transitivity_check: invalid budgets");
  const int m = u.resolution();
  const int threads = budgets.threads;

  auto meets_omega = [&](const BoxDomain& d) {
    const auto ids = d.ids();
    std::vector<std::uint8_t> ret(ids.size(), 0);
    parallel_for(ids.size(), threads, [&](std::size_t k) {
      ret[k] = box_return_time(f, m, ids[k], budgets.omega_horizon) > 0 ? 1 : 0;
    });
    return std::find(ret.begin(), ret.end(), std::uint8_t{1}) != ret.end();
  };
  require(meets_omega(u) && meets_omega(v), ErrorCode::kPrecondition,
          "weak_transitivity_check: U and V must meet the Omega over-approximation");

  WeakTransitivityResult res;
  const auto u_ids = u.ids();

  // True orbits of sample points of U, with a doubling horizon.
  std::vector<TorusPoint> starts;
  const int k = budgets.samples_per_axis;
  for (std::uint32_t id : u_ids) {
    const LiftRect r = box_rect(m, id);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        starts.push_back({r.s0 + (a + 0.5) / k * (r.s1 - r.s0), r.t0 + (b + 0.5) / k * (r.t1 - r.t0)});
      }
    }
  }
  std::vector<TorusPoint> state = starts;
  std::vector<std::int64_t> first_hit(starts.size(), 0);
  std::int64_t done = 0;
  std::int64_t confirmed = 0;
  std::size_t witness = 0;
  for (std::int64_t horizon = 256; done < budgets.n_max && confirmed == 0; horizon *= 4) {
    const std::int64_t until = std::min(horizon, budgets.n_max);
    parallel_for(starts.size(), threads, [&](std::size_t s) {
      TorusPoint z = state[s];
      for (std::int64_t n = done + 1; n <= until; ++n) {
        z = f(z);
        if (v.contains_id(box_of(m, z))) {
          first_hit[s] = n;
          break;
        }
      }
      state[s] = z;
    });
    for (std::size_t s = 0; s < starts.size(); ++s) {
      if (first_hit[s] > 0 && (confirmed == 0 || first_hit[s] < confirmed)) {
        confirmed = first_hit[s];
        witness = s;
      }
    }
    done = until;
  }
  if (confirmed == 0) return res;
  res.n = confirmed;
  res.witness = starts[witness];
  res.landing = iterate_point(f, starts[witness], confirmed);

  // Enclosure hits before the confirmed time are the only candidates for a
  // smaller n.
  std::vector<std::uint8_t> v_columns(static_cast<std::size_t>(m), 0);
  for (const Cell& c : v.cells()) v_columns[static_cast<std::size_t>(c.i)] = 1;
  std::vector<std::vector<std::uint8_t>> hit_rows(u_ids.size());
  parallel_for(u_ids.size(), threads, [&](std::size_t c) {
    std::vector<std::uint32_t> scratch;
    auto& row = hit_rows[c];
    row.assign(static_cast<std::size_t>(confirmed), 0);
    LiftRect r = box_rect(m, u_ids[c]);
    for (std::int64_t n = 1; n < confirmed; ++n) {
      r = normalize(f.enclosure(r));
      row[static_cast<std::size_t>(n)] = enclosure_meets(m, r, v, v_columns, scratch) ? 1 : 0;
    }
  });
  std::vector<std::int64_t> candidates;
  for (std::int64_t n = 1; n < confirmed; ++n) {
    for (const auto& row : hit_rows) {
      if (row[static_cast<std::size_t>(n)]) {
        candidates.push_back(n);
        break;
      }
    }
  }
  res.enclosure_lower_bound = candidates.empty() ? confirmed : candidates.front();

  // Refine candidate times in increasing order: confirm with a center sample
  // or refute when every sub-rectangle's enclosure misses V.
  bool all_refuted = true;
  int tried = 0;
  std::vector<std::uint32_t> scratch;
  for (std::int64_t n : candidates) {
    if (tried++ >= budgets.refine_candidates) {
      all_refuted = false;
      break;
    }
    std::vector<LiftRect> rects;
    for (std::size_t c = 0; c < u_ids.size(); ++c) {
      if (hit_rows[c][static_cast<std::size_t>(n)]) rects.push_back(box_rect(m, u_ids[c]));
    }
    enum { kOpen, kConfirmed, kRefuted } outcome = kOpen;
    TorusPoint found{};
    for (int depth = 0; depth <= budgets.refine_depth && outcome == kOpen; ++depth) {
      std::vector<std::uint8_t> lands(rects.size(), 0);
      parallel_for(rects.size(), threads, [&](std::size_t q) {
        const TorusPoint p{0.5 * (rects[q].s0 + rects[q].s1), 0.5 * (rects[q].t0 + rects[q].t1)};
        lands[q] = v.contains_id(box_of(m, iterate_point(f, p, n))) ? 1 : 0;
      });
      for (std::size_t q = 0; q < rects.size(); ++q) {
        if (lands[q]) {
          outcome = kConfirmed;
          found = {0.5 * (rects[q].s0 + rects[q].s1), 0.5 * (rects[q].t0 + rects[q].t1)};
          break;
        }
      }
      if (outcome != kOpen || depth == budgets.refine_depth) break;
      std::vector<LiftRect> split;
      for (const LiftRect& r : rects) {
        const double sm = 0.5 * (r.s0 + r.s1);
        const double tm = 0.5 * (r.t0 + r.t1);
        split.push_back({r.s0, sm, r.t0, tm});
        split.push_back({sm, r.s1, r.t0, tm});
        split.push_back({r.s0, sm, tm, r.t1});
        split.push_back({sm, r.s1, tm, r.t1});
      }
      std::vector<std::uint8_t> keep(split.size(), 0);
      parallel_for(split.size(), threads, [&](std::size_t q) {
        std::vector<std::uint32_t> local;
        keep[q] = enclosure_meets(m, iterate_rect(f, split[q], n), v, v_columns, local) ? 1 : 0;
      });
      rects.clear();
      for (std::size_t q = 0; q < split.size(); ++q) {
        if (keep[q]) rects.push_back(split[q]);
      }
      if (rects.empty()) outcome = kRefuted;
      if (rects.size() > budgets.rect_cap) break;
    }
    if (outcome == kConfirmed) {
      res.n = n;
      res.witness = wrap(found);
      res.landing = iterate_point(f, res.witness, n);
      break;
    }
    if (outcome == kRefuted) {
      ++res.refuted;
    } else {
      ++res.unresolved;
      all_refuted = false;
    }
  }
  res.least = all_refuted;
  return res;
}

}  // namespace torlab
