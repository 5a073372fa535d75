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

// Box domains on the torus and their behaviour in the universal cover:
// essentiality via deck-translation holonomy, and the capture diameter of a
// doubly essential domain.

#ifndef TORLAB_COVERING_HPP
#define TORLAB_COVERING_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torlab/torus.hpp"

namespace torlab {

struct Cell {
  int i = 0;  // s index
  int j = 0;  // t index

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Open set given as the interior of a union of closed grid cells
// [i/m, (i+1)/m] x [j/m, (j+1)/m] on an m x m torus grid.
class BoxDomain {
 public:
  explicit BoxDomain(int m);
  BoxDomain(int m, std::span<const Cell> cells);

  static BoxDomain full(int m);
  // Cells whose closed square meets the open ball B(center, radius).
  static BoxDomain ball(int m, TorusPoint center, double radius);

  int resolution() const { return m_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(int i, int j) const;
  bool contains_id(std::uint32_t id) const { return mask_[id] != 0; }
  // Whether the plane point lies in the closed cell of a member of p^-1(U).
  bool lifted_contains(double x, double y) const;
  void insert(int i, int j);
  void insert_id(std::uint32_t id);

  std::uint32_t id(int i, int j) const;
  Cell cell(std::uint32_t id) const;

  // Sorted by (i, j).
  std::vector<Cell> cells() const;
  std::vector<std::uint32_t> ids() const;

  BoxDomain translated(int di, int dj) const;
  // Same set on the 2m grid.
  BoxDomain refined() const;
  bool intersects(const BoxDomain& other) const;
  BoxDomain united(const BoxDomain& other) const;
  bool subset_of(const BoxDomain& other) const;
  // Connected components under 4-neighbour adjacency on the torus.
  std::vector<BoxDomain> components() const;

  friend bool operator==(const BoxDomain& a, const BoxDomain& b) {
    return a.m_ == b.m_ && a.mask_ == b.mask_;
  }

 private:
  int m_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> mask_;
};

// Text form: "boxdomain <m> <count>" then one "<i> <j> <run>" line per
// maximal run of consecutive j in row i, rows and runs in increasing order.
std::string serialize_domain(const BoxDomain& domain);
BoxDomain parse_domain(std::string_view text);

struct DeckVector {
  std::int64_t p = 0;
  std::int64_t q = 0;

  friend bool operator==(const DeckVector&, const DeckVector&) = default;
};

// Hermite-style basis of the subgroup of Z^2 generated by the vectors: at most
// two rows (a, b), (0, c) with a > 0, c > 0 and 0 <= b < c when both exist.
std::vector<DeckVector> subgroup_basis(std::span<const DeckVector> generators);

enum class Essentiality { kInessential = 0, kSimplyEssential = 1, kDoublyEssential = 2 };

const char* essentiality_name(Essentiality e);

struct EssentialityResult {
  Essentiality cls = Essentiality::kInessential;
  std::vector<DeckVector> basis;
  BoxDomain component{1};  // the component achieving the class

  int rank() const { return static_cast<int>(basis.size()); }
};

// tree_seed randomizes the root and the neighbour order of the spanning tree;
// the returned subgroup does not depend on it.
EssentialityResult classify_essentiality(const BoxDomain& domain, std::uint64_t tree_seed = 0);

// Requires both domains doubly essential on the same grid.
bool essential_intersection_check(const BoxDomain& u, const BoxDomain& v);

// Largest Euclidean diameter (unit-square units) of a lifted component of the
// complement of p^-1(U); complement components use 8-neighbour adjacency.
double compute_capture_diameter(const BoxDomain& u);

// Cells of the m-grid whose closed squares meet rect fattened by `fatten` in
// the max norm, as ids i*m + j without duplicates.
void cells_meeting(int m, const LiftRect& rect, double fatten, std::vector<std::uint32_t>& out);

// Union of outer box enclosures of f^n(U0), 1 <= n <= n_max, computed as the
// closure of the cell image map starting from the image of U0.
BoxDomain forward_invariant_hull(const SkewProduct& f, const BoxDomain& u0, int n_max,
                                 int threads = 1);

// Workload generators and checks used by the suites.

// Horizontal and vertical bands of the given width through the origin.
BoxDomain cross_domain(int m, double width);
// Union of a random horizontal and a random vertical lattice loop, each
// winding once, randomly thickened. Always doubly essential.
BoxDomain random_doubly_essential(int m, std::uint64_t seed);
// Random connected polyline in the plane, grown until its diameter exceeds
// the target.
std::vector<TorusPoint> random_polyline(double diameter, std::uint64_t seed);
// Whether the plane polyline meets p^-1(U), sampled at 1/(16 m) spacing.
bool lifted_path_meets(const BoxDomain& u, std::span<const TorusPoint> polyline);

}  // namespace torlab

#endif  // TORLAB_COVERING_HPP
