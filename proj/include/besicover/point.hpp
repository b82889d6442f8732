#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace besicover {

// A lattice point in Z^d. Comparison is lexicographic (the vector default),
// which fixes the deterministic enumeration order everywhere.
using Point = std::vector<int64_t>;

inline Point point_add(const Point& a, const Point& b) {
  Point out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Point point_sub(const Point& a, const Point& b) {
  Point out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Point point_neg(const Point& a) {
  Point out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

std::string point_to_string(const Point& p);

struct PointHash {
  size_t operator()(const Point& p) const noexcept {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ (p.size() * 0xff51afd7ed558ccdull);
    for (int64_t c : p) {
      uint64_t x = static_cast<uint64_t>(c);
      x ^= x >> 33;
      x *= 0xff51afd7ed558ccdull;
      x ^= x >> 33;
      h = (h ^ x) * 0xc4ceb9fe1a85ec53ull;
    }
    return static_cast<size_t>(h ^ (h >> 29));
  }
};

// Sorts lexicographically and removes duplicates, in place.
inline void sort_unique(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Membership in a sorted unique vector.
inline bool sorted_contains(const std::vector<Point>& sorted_pts, const Point& p) {
  return std::binary_search(sorted_pts.begin(), sorted_pts.end(), p);
}

// A = A \ B for sorted unique vectors.
std::vector<Point> sorted_difference(const std::vector<Point>& a, const std::vector<Point>& b);

// A ∩ B for sorted unique vectors.
std::vector<Point> sorted_intersection(const std::vector<Point>& a, const std::vector<Point>& b);

bool sorted_is_subset(const std::vector<Point>& sub, const std::vector<Point>& super);

}  // namespace besicover
