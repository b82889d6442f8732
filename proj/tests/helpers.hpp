#pragma once

#include <doctest.h>

#include "besicover/covering.hpp"
#include "besicover/geometry.hpp"
#include "besicover/measure.hpp"

namespace besicover::testing {

// Independent ball enumeration oracle: plain rational comparisons via
// NormSpec::cmp, no integer-threshold fast paths.
inline std::vector<Point> oracle_ball_points(const NormSpec& norm, const Point& center,
                                             const Rat& r) {
  std::vector<Point> out;
  if (r < 0) return out;
  const int d = norm.dim();
  std::vector<int64_t> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    int64_t b = rat_ceil_i64(r * norm.axis_bound(i)) + 1;
    lo[i] = center[i] - b;
    hi[i] = center[i] + b;
  }
  Point u(d);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      if (norm.cmp(point_sub(u, center), r) <= 0) out.push_back(u);
      return;
    }
    for (int64_t c = lo[axis]; c <= hi[axis]; ++c) {
      u[axis] = c;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

inline NormRef linf2() { return make_norm(NormSpec::linf(2)); }
inline NormRef l1_2() { return make_norm(NormSpec::l1(2)); }
inline NormRef l2_2() { return make_norm(NormSpec::l2(2)); }

inline Rat Q(long num, long den = 1) { return Rat(num, den); }

// Restores the global point cap on scope exit.
struct CapGuard {
  int64_t saved;
  CapGuard() : saved(point_cap()) {}
  ~CapGuard() { set_point_cap(saved); }
};

}  // namespace besicover::testing
