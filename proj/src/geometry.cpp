#include "besicover/geometry.hpp"

#include <atomic>
#include <cassert>
#include <numeric>

namespace besicover {

namespace {
std::atomic<int64_t> g_point_cap{100000000};  // 10^8 default

using Wide = __int128;

Wide wide_abs(Wide x) { return x < 0 ? -x : x; }
}  // namespace

int64_t point_cap() { return g_point_cap.load(std::memory_order_relaxed); }
void set_point_cap(int64_t cap) {
  if (cap < 1) throw std::invalid_argument("point cap must be positive");
  g_point_cap.store(cap, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// NormSpec
// ---------------------------------------------------------------------------

NormSpec NormSpec::l1(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  NormSpec n(NormKind::l1, d);
  n.axis_bound_.assign(d, Rat(1));
  return n;
}

NormSpec NormSpec::l2(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  NormSpec n(NormKind::l2, d);
  n.axis_bound_.assign(d, Rat(1));
  return n;
}

NormSpec NormSpec::linf(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  NormSpec n(NormKind::linf, d);
  n.axis_bound_.assign(d, Rat(1));
  return n;
}

NormSpec NormSpec::weighted_sup(std::vector<Rat> weights) {
  if (weights.empty()) throw std::invalid_argument("weighted_sup needs at least one weight");
  for (const Rat& w : weights) {
    if (w <= 0) throw std::invalid_argument("weighted_sup weights must be positive");
  }
  NormSpec n(NormKind::wsup, static_cast<int>(weights.size()));
  n.axis_bound_.reserve(weights.size());
  for (const Rat& w : weights) n.axis_bound_.push_back(Rat(1) / w);
  n.weights_ = std::move(weights);
  return n;
}

namespace {

// Solves A x = b over Q by Gaussian elimination; nullopt if singular.
std::optional<std::vector<Rat>> solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const size_t d = b.size();
  for (size_t col = 0; col < d; ++col) {
    size_t pivot = col;
    while (pivot < d && a[pivot][col] == 0) ++pivot;
    if (pivot == d) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (size_t row = 0; row < d; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rat f = a[row][col] / a[col][col];
      for (size_t k = col; k < d; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::vector<Rat> x(d);
  for (size_t i = 0; i < d; ++i) x[i] = b[i] / a[i][i];
  return x;
}

size_t matrix_rank(std::vector<std::vector<Rat>> a) {
  if (a.empty()) return 0;
  const size_t rows = a.size(), cols = a[0].size();
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (size_t row = rank + 1; row < rows; ++row) {
      if (a[row][col] == 0) continue;
      Rat f = a[row][col] / a[rank][col];
      for (size_t k = col; k < cols; ++k) a[row][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

NormSpec NormSpec::polyhedral(std::vector<std::vector<Rat>> functionals) {
  if (functionals.empty()) throw std::invalid_argument("polyhedral norm needs functionals");
  const int d = static_cast<int>(functionals[0].size());
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  for (const auto& f : functionals) {
    if (static_cast<int>(f.size()) != d) {
      throw std::invalid_argument("polyhedral functionals must share a dimension");
    }
  }
  if (matrix_rank(functionals) != static_cast<size_t>(d)) {
    throw std::invalid_argument("polyhedral functionals must span R^d (norm would be degenerate)");
  }
  NormSpec n(NormKind::poly, d);
  n.funcs_ = std::move(functionals);
  n.finish_poly_setup();
  return n;
}

void NormSpec::finish_poly_setup() {
  const int d = d_;
  ifuncs_.clear();
  ifunc_den_.clear();
  for (const auto& f : funcs_) {
    Int den(1);
    for (const Rat& c : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Int> row;
    row.reserve(d);
    for (const Rat& c : f) {
      Rat scaled = c * Rat(den);
      row.push_back(scaled.get_num());  // denominator is 1 after scaling
    }
    ifuncs_.push_back(std::move(row));
    ifunc_den_.push_back(den);
  }

  // Axis bounds of the unit ball via vertex enumeration: every vertex of
  // { v : |<f_j,v>| <= 1 } solves d active constraints with signs.
  const size_t m = funcs_.size();
  std::vector<size_t> idx(d);
  std::vector<Rat> best(d, Rat(0));
  std::function<void(size_t, size_t)> choose = [&](size_t start, size_t depth) {
    if (depth == static_cast<size_t>(d)) {
      for (uint32_t signs = 0; signs < (1u << d); ++signs) {
        std::vector<std::vector<Rat>> a(d);
        std::vector<Rat> b(d);
        for (int i = 0; i < d; ++i) {
          a[i] = funcs_[idx[i]];
          b[i] = (signs >> i) & 1 ? Rat(-1) : Rat(1);
        }
        auto x = solve_linear(a, b);
        if (!x) continue;
        bool feasible = true;
        for (size_t j = 0; j < m && feasible; ++j) {
          Rat dot(0);
          for (int i = 0; i < d; ++i) dot += funcs_[j][i] * (*x)[i];
          if (rat_abs(dot) > 1) feasible = false;
        }
        if (!feasible) continue;
        for (int i = 0; i < d; ++i) {
          Rat av = rat_abs((*x)[i]);
          if (av > best[i]) best[i] = av;
        }
      }
      return;
    }
    for (size_t j = start; j + (d - depth) <= m; ++j) {
      idx[depth] = j;
      choose(j + 1, depth + 1);
    }
  };
  choose(0, 0);
  axis_bound_ = std::move(best);
}

bool NormSpec::operator==(const NormSpec& o) const {
  return kind_ == o.kind_ && d_ == o.d_ && weights_ == o.weights_ && funcs_ == o.funcs_;
}

NormSpec::Value NormSpec::eval(const Point& v) const {
  if (static_cast<int>(v.size()) != d_) {
    throw DimensionMismatchError("norm_eval: vector dimension " + std::to_string(v.size()) +
                                 " does not match norm dimension " + std::to_string(d_));
  }
  switch (kind_) {
    case NormKind::l1: {
      Int s(0);
      for (int64_t c : v) s += Int(c < 0 ? -c : c);
      return {Rat(s), false};
    }
    case NormKind::linf: {
      Int best(0);
      for (int64_t c : v) {
        Int a(c < 0 ? -c : c);
        if (a > best) best = a;
      }
      return {Rat(best), false};
    }
    case NormKind::l2: {
      Int s(0);
      for (int64_t c : v) {
        Int a(c);
        s += a * a;
      }
      return {Rat(s), true};
    }
    case NormKind::wsup: {
      Rat best(0);
      for (int i = 0; i < d_; ++i) {
        Rat a = weights_[i] * Rat(Int(v[i] < 0 ? -v[i] : v[i]));
        if (a > best) best = a;
      }
      return {best, false};
    }
    case NormKind::poly: {
      Rat best(0);
      for (size_t j = 0; j < ifuncs_.size(); ++j) {
        Int dot(0);
        for (int i = 0; i < d_; ++i) dot += ifuncs_[j][i] * Int(v[i]);
        if (dot < 0) dot = -dot;
        Rat a = Rat(dot) / Rat(ifunc_den_[j]);
        if (a > best) best = a;
      }
      return {best, false};
    }
  }
  throw std::logic_error("unreachable norm kind");
}

int NormSpec::cmp(const Point& v, const Rat& r) const {
  Value val = eval(v);
  if (val.squared) {
    if (r < 0) return 1;  // ‖v‖ >= 0 > r
    Rat r2 = r * r;
    return ::cmp(val.v, r2);
  }
  return ::cmp(val.v, r);
}

int64_t NormSpec::int_ceil_norm(const Point& v) const {
  Value val = eval(v);
  if (val.squared) {
    Int sq = val.v.get_num();  // denominator 1
    Int root = isqrt_floor(sq);
    if (root * root < sq) root += 1;
    if (!root.fits_slong_p()) throw std::overflow_error("int_ceil_norm overflow");
    return root.get_si();
  }
  return rat_ceil_i64(val.v);
}

std::string NormSpec::describe() const {
  switch (kind_) {
    case NormKind::l1:
      return "l1";
    case NormKind::l2:
      return "l2";
    case NormKind::linf:
      return "linf";
    case NormKind::wsup:
      return "wsup";
    case NormKind::poly:
      return "poly";
  }
  return "?";
}

NormSpec::Value norm_eval(const NormSpec& norm, const Point& v) { return norm.eval(v); }

// ---------------------------------------------------------------------------
// BallTester
// ---------------------------------------------------------------------------

BallTester::BallTester(const NormSpec& norm, const Point& center, const Rat& radius)
    : norm_(&norm), center_(center), d_(norm.dim()), kind_(norm.kind()), radius_(radius) {
  if (static_cast<int>(center.size()) != d_) {
    throw DimensionMismatchError("ball center dimension does not match norm");
  }
  box_lo_.assign(d_, 0);
  box_hi_.assign(d_, -1);
  if (radius < 0) {
    empty_ = true;
    return;
  }
  auto fit_thr = [this](const Int& t) {
    if (t.fits_slong_p()) return static_cast<int64_t>(t.get_si());
    use_big_ = true;
    return int64_t{0};
  };
  switch (kind_) {
    case NormKind::l1:
    case NormKind::linf: {
      Int f = rat_floor(radius);
      scalar_thr_big_ = f;
      scalar_thr_ = fit_thr(f);
      if (use_big_) throw ResourceCapError("ball radius too large to enumerate");
      for (int i = 0; i < d_; ++i) {
        box_lo_[i] = center[i] - scalar_thr_;
        box_hi_[i] = center[i] + scalar_thr_;
      }
      break;
    }
    case NormKind::l2: {
      Int f = rat_floor(radius * radius);
      scalar_thr_big_ = f;
      scalar_thr_ = fit_thr(f);
      Int axis = isqrt_floor(f);
      if (!axis.fits_slong_p()) throw ResourceCapError("ball radius too large to enumerate");
      int64_t a = axis.get_si();
      for (int i = 0; i < d_; ++i) {
        box_lo_[i] = center[i] - a;
        box_hi_[i] = center[i] + a;
      }
      break;
    }
    case NormKind::wsup: {
      axis_thr_.resize(d_);
      for (int i = 0; i < d_; ++i) {
        Int f = rat_floor(radius / norm.weights()[i]);
        if (!f.fits_slong_p()) throw ResourceCapError("ball radius too large to enumerate");
        axis_thr_[i] = f.get_si();
        box_lo_[i] = center[i] - axis_thr_[i];
        box_hi_[i] = center[i] + axis_thr_[i];
      }
      break;
    }
    case NormKind::poly: {
      ifuncs_ = &norm.scaled_functionals();
      func_thr_.clear();
      funcs_fit_i64_ = true;
      for (size_t j = 0; j < ifuncs_->size(); ++j) {
        Int thr = rat_floor(radius * Rat(norm.functional_denominators()[j]));
        if (!thr.fits_slong_p()) throw ResourceCapError("ball radius too large to enumerate");
        func_thr_.push_back(thr.get_si());
        std::vector<int64_t> row;
        for (const Int& c : (*ifuncs_)[j]) {
          if (!c.fits_slong_p()) {
            funcs_fit_i64_ = false;
            break;
          }
          row.push_back(c.get_si());
        }
        if (funcs_fit_i64_) ifuncs_i64_.push_back(std::move(row));
      }
      for (int i = 0; i < d_; ++i) {
        Int b = rat_floor(radius * norm.axis_bound(i));
        if (!b.fits_slong_p()) throw ResourceCapError("ball radius too large to enumerate");
        box_lo_[i] = center[i] - b.get_si();
        box_hi_[i] = center[i] + b.get_si();
      }
      break;
    }
  }
}

bool BallTester::contains(const Point& u) const {
  if (empty_) return false;
  switch (kind_) {
    case NormKind::l1: {
      Wide s = 0;
      for (int i = 0; i < d_; ++i) s += wide_abs(Wide(u[i]) - Wide(center_[i]));
      return s <= Wide(scalar_thr_);
    }
    case NormKind::linf: {
      Wide best = 0;
      for (int i = 0; i < d_; ++i) {
        Wide a = wide_abs(Wide(u[i]) - Wide(center_[i]));
        if (a > best) best = a;
      }
      return best <= Wide(scalar_thr_);
    }
    case NormKind::l2: {
      if (use_big_) return norm_->le(point_sub(u, center_), radius_);
      Wide s = 0;
      for (int i = 0; i < d_; ++i) {
        Wide dcoord = Wide(u[i]) - Wide(center_[i]);
        s += dcoord * dcoord;
        if (s > (Wide(1) << 126)) return norm_->le(point_sub(u, center_), radius_);
      }
      return s <= Wide(scalar_thr_);
    }
    case NormKind::wsup: {
      for (int i = 0; i < d_; ++i) {
        Wide a = wide_abs(Wide(u[i]) - Wide(center_[i]));
        if (a > Wide(axis_thr_[i])) return false;
      }
      return true;
    }
    case NormKind::poly: {
      if (!funcs_fit_i64_) return norm_->le(point_sub(u, center_), radius_);
      for (size_t j = 0; j < ifuncs_i64_.size(); ++j) {
        Wide dot = 0;
        for (int i = 0; i < d_; ++i) {
          dot += Wide(ifuncs_i64_[j][i]) * (Wide(u[i]) - Wide(center_[i]));
        }
        if (wide_abs(dot) > Wide(func_thr_[j])) return false;
      }
      return true;
    }
  }
  return false;
}

Int BallTester::box_volume() const {
  if (empty_) return Int(0);
  Int vol(1);
  for (int i = 0; i < d_; ++i) {
    if (box_hi_[i] < box_lo_[i]) return Int(0);
    vol *= Int(box_hi_[i]) - Int(box_lo_[i]) + 1;
  }
  return vol;
}

void for_each_ball_point(const BallTester& t, const std::function<void(const Point&)>& fn) {
  if (t.empty()) return;
  Int vol = t.box_volume();
  if (vol > point_cap()) {
    throw ResourceCapError("ball enumeration of " + vol.get_str() + " candidate points exceeds cap " +
                           std::to_string(point_cap()));
  }
  const int d = t.dim();
  Point u(d);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      if (t.contains(u)) fn(u);
      return;
    }
    for (int64_t c = t.box_lo(axis); c <= t.box_hi(axis); ++c) {
      u[axis] = c;
      rec(axis + 1);
    }
  };
  rec(0);
}

// ---------------------------------------------------------------------------
// Ball/sphere point sets and counts
// ---------------------------------------------------------------------------

ThickSphere::ThickSphere(Point c, Rat r, Rat t, NormRef n)
    : center(std::move(c)), radius(std::move(r)), thickness(std::move(t)), norm(std::move(n)) {
  if (thickness <= 0) throw std::invalid_argument("thick sphere: thickness must be positive");
  if (thickness > radius) throw std::invalid_argument("thick sphere: thickness exceeds radius");
}

std::vector<Point> lattice_ball_points(const LatticeBall& ball) {
  if (ball.radius < 0) throw std::invalid_argument("lattice ball: negative radius");
  BallTester t(*ball.norm, ball.center, ball.radius);
  std::vector<Point> out;
  for_each_ball_point(t, [&](const Point& p) { out.push_back(p); });
  return out;
}

std::vector<Point> annulus_points(const Point& center, const Rat& r, const Rat& t, const NormSpec& norm) {
  BallTester outer(norm, center, r + t);
  BallTester inner(norm, center, r - t);
  std::vector<Point> out;
  for_each_ball_point(outer, [&](const Point& p) {
    if (!inner.contains(p)) out.push_back(p);
  });
  return out;
}

std::vector<Point> thick_boundary_points(const ThickSphere& sphere) {
  return annulus_points(sphere.center, sphere.radius, sphere.thickness, *sphere.norm);
}

std::vector<Point> exact_sphere_points(const Point& center, const Rat& r, const NormSpec& norm) {
  if (r < 0) return {};
  BallTester outer(norm, center, r);
  std::vector<Point> out;
  for_each_ball_point(outer, [&](const Point& p) {
    if (norm.cmp(point_sub(p, center), r) == 0) out.push_back(p);
  });
  return out;
}

namespace {

Int binom(int64_t n, int64_t k) {
  if (k < 0 || k > n) return Int(0);
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Int l2_count_rec(const Int& budget, int axes) {
  if (budget < 0) return Int(0);
  Int root = isqrt_floor(budget);
  if (axes == 1) return 2 * root + 1;
  Int total(0);
  if (!root.fits_slong_p()) throw ResourceCapError("l2 ball count: radius too large");
  int64_t s = root.get_si();
  for (int64_t x = -s; x <= s; ++x) {
    total += l2_count_rec(budget - Int(x) * Int(x), axes - 1);
  }
  return total;
}

}  // namespace

Int ball_point_count(const NormSpec& norm, const Rat& radius) {
  if (radius < 0) return Int(0);
  const int d = norm.dim();
  switch (norm.kind()) {
    case NormKind::linf: {
      Int m = rat_floor(radius);
      return int_pow(2 * m + 1, static_cast<unsigned long>(d));
    }
    case NormKind::wsup: {
      Int vol(1);
      for (int i = 0; i < d; ++i) vol *= 2 * rat_floor(radius / norm.weights()[i]) + 1;
      return vol;
    }
    case NormKind::l1: {
      // |{x in Z^d : sum |x_i| <= m}| = sum_k 2^k C(d,k) C(m,k)
      Int m = rat_floor(radius);
      if (!m.fits_slong_p()) throw ResourceCapError("l1 ball count: radius too large");
      int64_t mi = m.get_si();
      Int total(0);
      for (int64_t k = 0; k <= d; ++k) {
        total += int_pow(Int(2), static_cast<unsigned long>(k)) * binom(d, k) * binom(mi, k);
      }
      return total;
    }
    case NormKind::l2: {
      Int budget = rat_floor(radius * radius);
      if (d >= 2) {
        Int est = int_pow(2 * isqrt_floor(budget) + 1, static_cast<unsigned long>(d));
        if (est > point_cap()) {
          throw ResourceCapError("l2 ball count of ~" + est.get_str() + " candidates exceeds cap");
        }
      }
      return l2_count_rec(budget, d);
    }
    case NormKind::poly: {
      BallTester t(norm, Point(d, 0), radius);
      Int n(0);
      for_each_ball_point(t, [&](const Point&) { n += 1; });
      return n;
    }
  }
  throw std::logic_error("unreachable norm kind");
}

Rat doubling_ratio(const NormSpec& norm, const Rat& r) {
  if (r < 1) throw std::invalid_argument("doubling_ratio requires r >= 1");
  Int big = ball_point_count(norm, 2 * r);
  Int small = ball_point_count(norm, r);
  Rat out(big, small);
  out.canonicalize();
  return out;
}

DoublingCertificate certify_doubling(const NormSpec& norm, int64_t r_max) {
  if (r_max < 1) throw std::invalid_argument("certify_doubling requires r_max >= 1");
  DoublingCertificate cert;
  cert.norm = norm.describe();
  cert.d = norm.dim();
  cert.r_max = r_max;
  cert.max_ratio = 0;
  for (int64_t r = 1; r <= r_max; ++r) {
    Rat ratio = doubling_ratio(norm, Rat(r));
    if (ratio > cert.max_ratio) {
      cert.max_ratio = ratio;
      cert.at_radius = r;
    }
  }
  Int dce = rat_ceil(cert.max_ratio);
  if (!dce.fits_slong_p()) throw std::overflow_error("doubling constant overflow");
  cert.D = dce.get_si();
  return cert;
}

}  // namespace besicover
