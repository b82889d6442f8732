#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "besicover/geometry.hpp"
#include "besicover/point.hpp"
#include "besicover/rational.hpp"

namespace besicover {

// A finitely supported measure on Z^d: positive rational mass per atom,
// exact total. Atom order is lexicographic, so iteration is deterministic.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  // Duplicated points are combined by summing; nonpositive masses rejected.
  static DiscreteMeasure from_atoms(std::vector<std::pair<Point, Rat>> atoms);

  static DiscreteMeasure uniform_on(const std::vector<Point>& pts, const Rat& mass_each = Rat(1));

  const Rat& total() const { return total_; }
  size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<std::pair<Point, Rat>>& atoms() const { return atoms_; }

  // Mass of one point (0 when absent).
  Rat mass(const Point& p) const;

  // Exact mass of a point set; the input is treated as a set (duplicates
  // contribute once). `pts` need not be sorted.
  Rat mass_of(const std::vector<Point>& pts) const;

  // Exact mass of a lattice ball. Iterates whichever of {atoms, ball box}
  // is smaller.
  Rat mass_in_ball(const BallTester& ball) const;

  // Restriction to the given point set.
  DiscreteMeasure restricted_to(const std::vector<Point>& pts) const;

  int dim() const { return atoms_.empty() ? 0 : static_cast<int>(atoms_.front().first.size()); }

 private:
  std::vector<std::pair<Point, Rat>> atoms_;  // sorted by point
  std::unordered_map<Point, size_t, PointHash> index_;
  Rat total_ = 0;

  void rebuild_index();
};

}  // namespace besicover
