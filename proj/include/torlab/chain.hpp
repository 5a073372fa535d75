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

// Box discretization of torus maps: epsilon-fattened transition graphs,
// chain paths and strongly connected components, a finite-horizon
// over-approximation of the nonwandering set, pseudo-orbits with at most two
// jumps, and the weak transitivity check.

#ifndef TORLAB_CHAIN_HPP
#define TORLAB_CHAIN_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torlab/covering.hpp"
#include "torlab/torus.hpp"

namespace torlab {

// Step distances above this count as jumps.
inline constexpr double kJumpTolerance = 1e-9;

enum class EnclosureMode { kSampled, kOuterBound };

const char* enclosure_mode_name(EnclosureMode mode);

// Edges of box b are targets[offsets[b] .. offsets[b+1]), sorted.
struct TransitionGraph {
  int m = 0;
  double epsilon = 0.0;
  EnclosureMode mode = EnclosureMode::kOuterBound;
  // Largest width of the fiber rotation range used over a single box.
  double fiber_margin = 0.0;
  std::vector<std::uint64_t> offsets;
  std::vector<std::uint32_t> targets;

  std::size_t node_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t edge_count() const { return targets.size(); }
  std::span<const std::uint32_t> successors(std::uint32_t box) const;
  bool has_edge(std::uint32_t from, std::uint32_t to) const;
};

// Box id of a torus point on the m-grid.
std::uint32_t box_of(int m, TorusPoint z);
LiftRect box_rect(int m, std::uint32_t box);

// Edge (B, B') iff B' meets the enclosure of f(B) fattened by epsilon in the
// max norm. Sampled mode uses k x k points per box instead of the enclosure.
TransitionGraph build_transition_graph(const SkewProduct& f, int m, double epsilon,
                                       EnclosureMode mode = EnclosureMode::kOuterBound,
                                       int samples_per_axis = 4, int threads = 1);
TransitionGraph graph_from_edges(int m, double epsilon,
                                 std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

// Breadth-first path of at least one edge from some box of `from` to some box
// of `to`.
std::optional<std::vector<std::uint32_t>> chain_path(const TransitionGraph& graph,
                                                     std::span<const std::uint32_t> from,
                                                     std::span<const std::uint32_t> to);

struct SccDecomposition {
  std::vector<std::uint32_t> component;  // per box
  std::size_t count = 0;
  // Component holds a cycle (more than one box or a self-loop).
  std::vector<std::uint8_t> recurrent;
};

SccDecomposition strongly_connected_components(const TransitionGraph& graph);

struct ChainPairResult {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  bool connected = false;
  std::size_t path_length = 0;  // edges
};

struct ChainReport {
  int m = 0;
  double epsilon = 0.0;
  std::size_t edge_count = 0;
  double fiber_margin = 0.0;
  int trials = 0;
  int connected = 0;
  std::size_t max_path_length = 0;
  std::size_t chain_recurrent_boxes = 0;
  std::size_t recurrent_components = 0;
  bool single_recurrent_component = false;
  std::vector<ChainPairResult> pairs;

  double fraction_connected() const { return trials == 0 ? 0.0 : static_cast<double>(connected) / trials; }
};

ChainReport chain_transitivity_report(const TransitionGraph& graph, int trials, std::uint64_t seed);
ChainReport chain_transitivity_report(const SkewProduct& f, int m, double epsilon, int trials,
                                      std::uint64_t seed, int threads = 1);

// One "<from> <to>" line per edge after an "edges <m> <count>" header.
std::string export_edge_list(const TransitionGraph& graph);

// Finite-horizon partition of the grid. A box is certified nonreturning when
// the outer enclosures of its first n_max iterates all miss it.
struct NonwanderingApprox {
  int m = 0;
  int n_max = 0;
  std::vector<std::uint8_t> returning;   // per box
  std::vector<std::int32_t> return_time;  // first enclosure return, 0 when certified

  std::size_t returning_count() const;
  std::size_t nonreturning_count() const { return returning.size() - returning_count(); }
  BoxDomain returning_domain() const;
  BoxDomain nonreturning_domain() const;
  // Distance from z to the nearest closed returning box, searching up to
  // `radius`; +inf when none lies that close.
  double distance_to_returning(TorusPoint z, double radius) const;
};

// First n in [1, n_max] whose enclosure of f^n(box) meets the box, or 0.
std::int32_t box_return_time(const SkewProduct& f, int m, std::uint32_t box, int n_max);

NonwanderingApprox nonwandering_approx(const SkewProduct& f, int m, int n_max, int threads = 1);

struct PseudoOrbit {
  double epsilon = 0.0;
  std::vector<TorusPoint> points;
  std::vector<std::size_t> jumps;  // as recorded by the builder
};

struct PseudoOrbitCheck {
  bool valid = false;
  std::size_t jump_count = 0;
  double max_step_error = 0.0;
  std::vector<std::size_t> jumps;
};

// Recomputes every step distance d(f(z_i), z_{i+1}).
PseudoOrbitCheck validate_pseudo_orbit(const SkewProduct& f, const PseudoOrbit& po);

// Header "pseudo-orbit", "epsilon <e>", "n <n>", "jumps <k> <i...>", then
// one "<s> <t>" line per point, all reals with 17 significant digits.
std::string serialize_pseudo_orbit(const PseudoOrbit& po);
PseudoOrbit parse_pseudo_orbit(std::string_view text);

struct TwoJumpBudgets {
  int omega_grid = 64;
  int omega_horizon = 10'000;
  std::int64_t n0_cap = 100'000;
  int n0_attempts = 4;
  std::int64_t orbit_precheck = 10'000;
  std::int64_t orbit_cap = 1'000'000;
  // Sample grids of 4^level points per ball, level in [min_level, max_level].
  // Horizons grow from 1024 by x16 up to orbit_cap; each pass over one level
  // spends at most evals_per_level map evaluations.
  int min_level = 2;
  int max_level = 6;
  std::int64_t evals_per_level = 20'000'000;
  int threads = 1;
};

enum class SearchStatus { kSuccess, kConnectorExhausted, kHorizonExhausted };

const char* search_status_name(SearchStatus s);

struct TwoJumpResult {
  SearchStatus status = SearchStatus::kConnectorExhausted;
  PseudoOrbit orbit;
  std::int64_t n0 = 0;
  std::int64_t connector_steps = 0;  // f^{connector_steps}(z) lands near the target
  std::int64_t samples = 0;
  std::int64_t evaluations = 0;
  double near_miss = 0.0;  // best distance to the target ball center seen
  int level = 0;
  std::string note;
};

// Pseudo-orbit x, ..., f^{n0-1}(x), z, ..., f^{n-1}(z), f^{-n0}(y), ..., y.
// The Omega approximation is computed from the budgets when not supplied.
TwoJumpResult two_jump_pseudo_orbit(const SkewProduct& f, TorusPoint x, TorusPoint y, double epsilon,
                                    const TwoJumpBudgets& budgets = {},
                                    const NonwanderingApprox* omega = nullptr);

struct WeakTransitivityBudgets {
  std::int64_t n_max = 100'000;
  int omega_horizon = 10'000;
  int samples_per_axis = 4;
  int refine_candidates = 64;
  int refine_depth = 6;
  std::size_t rect_cap = 4096;
  int threads = 1;
};

struct WeakTransitivityResult {
  std::optional<std::int64_t> n;           // least confirmed n
  std::int64_t enclosure_lower_bound = 0;  // least n whose enclosure meets V, 0 if none
  bool least = false;                      // every smaller enclosure hit was refuted
  int refuted = 0;
  int unresolved = 0;
  TorusPoint witness;
  TorusPoint landing;
};

// Requires U and V to meet the returning boxes at horizon omega_horizon.
WeakTransitivityResult weak_transitivity_check(const SkewProduct& f, const BoxDomain& u,
                                               const BoxDomain& v,
                                               const WeakTransitivityBudgets& budgets = {});

}  // namespace torlab

#endif  // TORLAB_CHAIN_HPP
