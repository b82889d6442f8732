#include "besicover/measure.hpp"

#include <algorithm>

namespace besicover {

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<std::pair<Point, Rat>> atoms) {
  for (const auto& [p, m] : atoms) {
    if (m <= 0) {
      throw std::invalid_argument("measure atom at " + point_to_string(p) + " has nonpositive mass");
    }
    if (p.size() != atoms.front().first.size()) {
      throw std::invalid_argument("measure atoms have mixed dimensions");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  DiscreteMeasure mu;
  for (auto& [p, m] : atoms) {
    if (!mu.atoms_.empty() && mu.atoms_.back().first == p) {
      mu.atoms_.back().second += m;
    } else {
      mu.atoms_.emplace_back(std::move(p), m);
    }
    mu.total_ += m;
  }
  mu.rebuild_index();
  return mu;
}

DiscreteMeasure DiscreteMeasure::uniform_on(const std::vector<Point>& pts, const Rat& mass_each) {
  std::vector<std::pair<Point, Rat>> atoms;
  atoms.reserve(pts.size());
  for (const Point& p : pts) atoms.emplace_back(p, mass_each);
  return from_atoms(std::move(atoms));
}

void DiscreteMeasure::rebuild_index() {
  index_.clear();
  index_.reserve(atoms_.size() * 2);
  for (size_t i = 0; i < atoms_.size(); ++i) index_.emplace(atoms_[i].first, i);
}

Rat DiscreteMeasure::mass(const Point& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? Rat(0) : atoms_[it->second].second;
}

Rat DiscreteMeasure::mass_of(const std::vector<Point>& pts) const {
  std::vector<Point> uniq = pts;
  sort_unique(uniq);
  Rat out(0);
  for (const Point& p : uniq) out += mass(p);
  return out;
}

Rat DiscreteMeasure::mass_in_ball(const BallTester& ball) const {
  Rat out(0);
  Int box = ball.box_volume();
  if (box > Int(static_cast<long>(atoms_.size()))) {
    for (const auto& [p, m] : atoms_) {
      if (ball.contains(p)) out += m;
    }
  } else {
    for_each_ball_point(ball, [&](const Point& p) { out += mass(p); });
  }
  return out;
}

DiscreteMeasure DiscreteMeasure::restricted_to(const std::vector<Point>& pts) const {
  std::vector<Point> uniq = pts;
  sort_unique(uniq);
  std::vector<std::pair<Point, Rat>> atoms;
  for (const Point& p : uniq) {
    Rat m = mass(p);
    if (m > 0) atoms.emplace_back(p, m);
  }
  return from_atoms(std::move(atoms));
}

}  // namespace besicover
