#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "besicover/point.hpp"
#include "besicover/rational.hpp"

namespace besicover {

// Thrown when an enumeration would touch more lattice points than the
// configured cap. Protects CLI runs from accidental blow-up.
struct ResourceCapError : std::runtime_error {
  explicit ResourceCapError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatchError : std::invalid_argument {
  explicit DimensionMismatchError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Global point-count cap (default 10^8). BESICOVER_CAP overrides it in the CLI.
int64_t point_cap();
void set_point_cap(int64_t cap);

enum class NormKind { l1, l2, linf, wsup, poly };

// A norm on R^d evaluable exactly on lattice points. For l1, linf,
// weighted-sup and polyhedral kinds the value of an integer vector is an
// exact rational; for l2 the SQUARED value is exact and every comparison
// against a rational radius goes through squared quantities.
class NormSpec {
 public:
  static NormSpec l1(int d);
  static NormSpec l2(int d);
  static NormSpec linf(int d);
  // max_i w_i |v_i| with w_i > 0 rational.
  static NormSpec weighted_sup(std::vector<Rat> weights);
  // max_j |<f_j, v>| over rational functionals; the rows must span R^d.
  static NormSpec polyhedral(std::vector<std::vector<Rat>> functionals);

  NormKind kind() const { return kind_; }
  int dim() const { return d_; }
  bool operator==(const NormSpec& o) const;
  bool operator!=(const NormSpec& o) const { return !(*this == o); }

  // Exact value; `squared` marks the l2 convention.
  struct Value {
    Rat v;
    bool squared = false;
  };
  Value eval(const Point& v) const;

  // Sign of ‖v‖ - r, computed exactly (squared comparison for l2).
  int cmp(const Point& v, const Rat& r) const;
  bool le(const Point& v, const Rat& r) const { return cmp(v, r) <= 0; }

  // Least integer n >= 0 with ‖v‖ <= n.
  int64_t int_ceil_norm(const Point& v) const;

  // sup { |x_i| : ‖x‖ <= 1 } as an exact rational, per axis.
  const Rat& axis_bound(int axis) const { return axis_bound_[axis]; }

  // Short identifier used in CSV outputs ("l1", "l2", "linf", "wsup", "poly").
  std::string describe() const;

  const std::vector<Rat>& weights() const { return weights_; }
  const std::vector<std::vector<Rat>>& functionals() const { return funcs_; }
  const std::vector<std::vector<Int>>& scaled_functionals() const { return ifuncs_; }
  const std::vector<Int>& functional_denominators() const { return ifunc_den_; }

 private:
  NormSpec(NormKind k, int d) : kind_(k), d_(d) {}
  void finish_poly_setup();

  NormKind kind_;
  int d_;
  std::vector<Rat> weights_;
  std::vector<std::vector<Rat>> funcs_;
  // Integer-scaled functionals: ifuncs_[j] = den_[j] * funcs_[j].
  std::vector<std::vector<Int>> ifuncs_;
  std::vector<Int> ifunc_den_;
  std::vector<Rat> axis_bound_;
};

using NormRef = std::shared_ptr<const NormSpec>;

inline NormRef make_norm(NormSpec n) { return std::make_shared<const NormSpec>(std::move(n)); }

// Closed lattice ball B_r(x) = { u in Z^d : ‖u - x‖ <= r }.
struct LatticeBall {
  Point center;
  Rat radius;  // >= 0
  NormRef norm;
};

// Thick sphere ∂_t B_r(x) = B_{r+t}(x) \ B_{r-t}(x), carrying (r, t) as data.
// Requires 0 < t <= r.
struct ThickSphere {
  ThickSphere(Point c, Rat r, Rat t, NormRef n);
  Point center;
  Rat radius;
  Rat thickness;
  NormRef norm;
};

// Precomputed integer-threshold membership test for one ball. All hot-path
// comparisons are plain integer arithmetic; a negative radius yields the
// empty ball (used for annulus inner parts).
class BallTester {
 public:
  BallTester(const NormSpec& norm, const Point& center, const Rat& radius);

  bool contains(const Point& u) const;
  bool empty() const { return empty_; }
  // Inclusive per-axis bounding box of the ball.
  int64_t box_lo(int axis) const { return box_lo_[axis]; }
  int64_t box_hi(int axis) const { return box_hi_[axis]; }
  // Product of box extents; the enumeration cost.
  Int box_volume() const;
  int dim() const { return d_; }

 private:
  const NormSpec* norm_;
  Point center_;
  int d_;
  bool empty_ = false;
  NormKind kind_;
  int64_t scalar_thr_ = 0;                 // l1/linf: floor(r); l2: floor(r^2) fits? may be big -> Int fallback
  Int scalar_thr_big_;                     // exact threshold for l2 when large
  bool use_big_ = false;
  std::vector<int64_t> axis_thr_;          // wsup: floor(r / w_i)
  std::vector<int64_t> func_thr_;          // poly: floor(r * den_j)
  const std::vector<std::vector<Int>>* ifuncs_ = nullptr;
  std::vector<std::vector<int64_t>> ifuncs_i64_;  // small-coefficient fast path
  bool funcs_fit_i64_ = false;
  std::vector<int64_t> box_lo_, box_hi_;
  Rat radius_;
};

// Exact value of ‖v‖ (squared for l2); checks dimensions.
NormSpec::Value norm_eval(const NormSpec& norm, const Point& v);

// All lattice points of the closed ball, lexicographic order.
std::vector<Point> lattice_ball_points(const LatticeBall& ball);

// |B_r(0)| for the given norm, without materializing the points.
Int ball_point_count(const NormSpec& norm, const Rat& radius);

// All points of ∂_t B_r(x).
std::vector<Point> thick_boundary_points(const ThickSphere& sphere);

// B_{r+t}(x) \ B_{r-t}(x) with no t <= r restriction (inner ball empty when
// r < t). Internal building block for exhaustion and scans.
std::vector<Point> annulus_points(const Point& center, const Rat& r, const Rat& t, const NormSpec& norm);

// { u : ‖u - x‖ = r } exactly; the lattice stand-in for the topological
// sphere. May be empty for radii the norm never attains.
std::vector<Point> exact_sphere_points(const Point& center, const Rat& r, const NormSpec& norm);

// Exact |B_{2r}(0)| / |B_r(0)|; requires r >= 1.
Rat doubling_ratio(const NormSpec& norm, const Rat& r);

// Empirical doubling certificate over r in {1, ..., r_max}.
struct DoublingCertificate {
  std::string norm;
  int d = 0;
  int64_t r_max = 0;
  Rat max_ratio;        // exact maximum of |B_2r|/|B_r|
  int64_t at_radius = 0;
  int64_t D = 0;        // ceil(max_ratio): the certified integer constant
};
DoublingCertificate certify_doubling(const NormSpec& norm, int64_t r_max);

// Iterates lattice points of the ball in lexicographic order.
void for_each_ball_point(const BallTester& t, const std::function<void(const Point&)>& fn);

}  // namespace besicover
