#include "besicover/dynamics.hpp"

#include <algorithm>

namespace besicover {

// ---------------------------------------------------------------------------
// Observable
// ---------------------------------------------------------------------------

Observable Observable::from_pairs(std::vector<std::pair<Point, Rat>> vals) {
  std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Observable f;
  for (auto& [p, v] : vals) {
    if (!f.vals_.empty() && f.vals_.back().first == p) {
      f.vals_.back().second += v;
    } else {
      f.vals_.emplace_back(std::move(p), v);
    }
  }
  std::erase_if(f.vals_, [](const auto& pv) { return pv.second == 0; });
  return f;
}

Observable Observable::indicator(const std::vector<Point>& pts) {
  std::vector<Point> uniq = pts;
  sort_unique(uniq);
  std::vector<std::pair<Point, Rat>> vals;
  vals.reserve(uniq.size());
  for (Point& p : uniq) vals.emplace_back(std::move(p), Rat(1));
  return from_pairs(std::move(vals));
}

Rat Observable::at(const Point& p) const {
  auto it = std::lower_bound(vals_.begin(), vals_.end(), p,
                             [](const auto& pv, const Point& q) { return pv.first < q; });
  if (it != vals_.end() && it->first == p) return it->second;
  return Rat(0);
}

bool Observable::nonnegative() const {
  for (const auto& [p, v] : vals_) {
    if (v < 0) return false;
  }
  return true;
}

Rat Observable::sup_norm() const {
  Rat best(0);
  for (const auto& [p, v] : vals_) {
    Rat a = rat_abs(v);
    if (a > best) best = a;
  }
  return best;
}

Observable Observable::abs() const {
  std::vector<std::pair<Point, Rat>> vals = vals_;
  for (auto& [p, v] : vals) v = rat_abs(v);
  return from_pairs(std::move(vals));
}

Observable Observable::scaled(const Rat& c) const {
  std::vector<std::pair<Point, Rat>> vals = vals_;
  for (auto& [p, v] : vals) v *= c;
  return from_pairs(std::move(vals));
}

Observable Observable::minus(const Observable& other) const {
  std::vector<std::pair<Point, Rat>> vals = vals_;
  for (const auto& [p, v] : other.vals_) vals.emplace_back(p, -v);
  return from_pairs(std::move(vals));
}

// ---------------------------------------------------------------------------
// Built-in actions
// ---------------------------------------------------------------------------

Rat Action::integral(const Observable& f) const {
  Rat acc(0);
  for (const auto& [p, v] : f.atoms()) acc += v * mass(p);
  return acc;
}

namespace {

class CountingTranslation final : public Action {
 public:
  explicit CountingTranslation(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
  }
  int dim() const override { return d_; }
  Point apply(const Point& u, const Point& omega) const override { return point_add(omega, u); }
  Rat mass(const Point&) const override { return Rat(1); }
  Rat total_mass() const override { return Rat(0); }
  bool finite_measure() const override { return false; }
  std::optional<int64_t> freeness_horizon() const override { return std::nullopt; }
  bool translation_model() const override { return true; }
  std::string describe() const override { return "counting"; }
  void preimage_shifts(const Point& omega, const Point& v, int64_t coord_bound,
                       std::vector<Point>& out) const override {
    Point u = point_sub(omega, v);
    for (int64_t c : u) {
      if (c < -coord_bound || c > coord_bound) return;
    }
    out.push_back(std::move(u));
  }

 private:
  int d_;
};

class WeightedTranslation final : public Action {
 public:
  WeightedTranslation(int d, Rat lambda) : d_(d), lambda_(std::move(lambda)) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (lambda_ <= 0 || lambda_ >= 1) {
      throw std::invalid_argument("weighted translation needs lambda in (0,1)");
    }
  }
  int dim() const override { return d_; }
  Point apply(const Point& u, const Point& omega) const override { return point_add(omega, u); }
  Rat mass(const Point& omega) const override {
    uint64_t n = 0;
    for (int64_t c : omega) n += static_cast<uint64_t>(c < 0 ? -c : c);
    return rat_pow(lambda_, n);
  }
  Rat total_mass() const override {
    // per axis: sum_{k in Z} lambda^{|k|} = (1+lambda)/(1-lambda)
    return rat_pow((1 + lambda_) / (1 - lambda_), static_cast<unsigned long>(d_));
  }
  bool finite_measure() const override { return true; }
  std::optional<int64_t> freeness_horizon() const override { return std::nullopt; }
  bool translation_model() const override { return true; }
  std::string describe() const override { return "weighted(lambda=" + rat_to_string(lambda_) + ")"; }
  void preimage_shifts(const Point& omega, const Point& v, int64_t coord_bound,
                       std::vector<Point>& out) const override {
    Point u = point_sub(omega, v);
    for (int64_t c : u) {
      if (c < -coord_bound || c > coord_bound) return;
    }
    out.push_back(std::move(u));
  }

 private:
  int d_;
  Rat lambda_;
};

class Odometer final : public Action {
 public:
  Odometer(int d, int N, std::vector<Rat> biases) : d_(d), n_bits_(N), biases_(std::move(biases)) {
    if (d < 1 || N < 1 || N > 62) throw std::invalid_argument("odometer needs d >= 1, 1 <= N <= 62");
    if (static_cast<int>(biases_.size()) != d) {
      throw std::invalid_argument("odometer needs one bias per axis");
    }
    for (const Rat& p : biases_) {
      if (p <= 0 || p >= 1) throw std::invalid_argument("odometer biases must lie in (0,1)");
    }
    modulus_ = int64_t{1} << n_bits_;
  }
  int dim() const override { return d_; }
  Point apply(const Point& u, const Point& omega) const override {
    Point out(d_);
    for (int i = 0; i < d_; ++i) out[i] = mod(omega[i] + u[i]);
    return out;
  }
  Rat mass(const Point& omega) const override {
    Rat m(1);
    for (int i = 0; i < d_; ++i) {
      int64_t w = omega[i];
      if (w < 0 || w >= modulus_) {
        throw HorizonError("odometer atom coordinate outside [0, 2^N)");
      }
      for (int b = 0; b < n_bits_; ++b) {
        m *= ((w >> b) & 1) ? biases_[i] : (1 - biases_[i]);
      }
    }
    return m;
  }
  Rat total_mass() const override { return Rat(1); }
  bool finite_measure() const override { return true; }
  std::optional<int64_t> freeness_horizon() const override { return modulus_; }
  std::string describe() const override {
    return "odometer(N=" + std::to_string(n_bits_) + ")";
  }
  void preimage_shifts(const Point& omega, const Point& v, int64_t coord_bound,
                       std::vector<Point>& out) const override {
    // u with T^{-u}omega = v, i.e. u = omega - v (mod 2^N) per axis.
    std::vector<std::vector<int64_t>> per_axis(d_);
    for (int i = 0; i < d_; ++i) {
      int64_t w = mod(omega[i] - v[i]);
      for (int64_t base = w - ((coord_bound + w) / modulus_ + 1) * modulus_; base <= coord_bound;
           base += modulus_) {
        if (base >= -coord_bound && base <= coord_bound) per_axis[i].push_back(base);
      }
      if (per_axis[i].empty()) return;
    }
    Point u(d_);
    std::function<void(int)> rec = [&](int axis) {
      if (axis == d_) {
        out.push_back(u);
        return;
      }
      for (int64_t c : per_axis[axis]) {
        u[axis] = c;
        rec(axis + 1);
      }
    };
    rec(0);
  }

 private:
  int64_t mod(int64_t x) const {
    int64_t r = x % modulus_;
    return r < 0 ? r + modulus_ : r;
  }
  int d_;
  int n_bits_;
  std::vector<Rat> biases_;
  int64_t modulus_ = 0;
};

}  // namespace

ActionRef make_counting_translation(int d) { return std::make_shared<CountingTranslation>(d); }

ActionRef make_weighted_translation(int d, const Rat& lambda) {
  return std::make_shared<WeightedTranslation>(d, lambda);
}

ActionRef make_odometer(int d, int N, std::vector<Rat> biases) {
  return std::make_shared<Odometer>(d, N, std::move(biases));
}

// ---------------------------------------------------------------------------
// Dual operator and ball sums
// ---------------------------------------------------------------------------

Rat rn_derivative(const Action& a, const Point& u, const Point& omega) {
  return a.mass(a.apply(point_neg(u), omega)) / a.mass(omega);
}

Rat dual_apply(const Action& a, const Point& u, const Observable& f, const Point& omega) {
  Point pre = a.apply(point_neg(u), omega);
  Rat fv = f.at(pre);
  if (fv == 0) return Rat(0);
  return fv * a.mass(pre) / a.mass(omega);
}

Observable dual_push(const Action& a, const Point& v, const Observable& f) {
  std::vector<std::pair<Point, Rat>> vals;
  vals.reserve(f.atoms().size());
  for (const auto& [w, val] : f.atoms()) {
    Point img = a.apply(v, w);
    Rat scale = a.mass(w) / a.mass(img);
    vals.emplace_back(std::move(img), val * scale);
  }
  return Observable::from_pairs(std::move(vals));
}

namespace {

int64_t ball_coord_bound(const NormSpec& norm, int64_t n) {
  int64_t best = 0;
  for (int i = 0; i < norm.dim(); ++i) {
    best = std::max(best, rat_floor_i64(Rat(n) * norm.axis_bound(i)));
  }
  return best;
}

void check_horizon(const Action& a, const NormSpec& norm, int64_t n) {
  if (n < 0) throw std::invalid_argument("ball index must be nonnegative");
  auto h = a.freeness_horizon();
  if (h && ball_coord_bound(norm, n) >= *h) {
    throw HorizonError("ball B_" + std::to_string(n) + " reaches beyond the freeness horizon " +
                       std::to_string(*h));
  }
}

}  // namespace

Rat ball_sum(const Action& a, const Observable& f, const NormSpec& norm, int64_t n,
             const Point& omega) {
  if (norm.dim() != a.dim()) throw DimensionMismatchError("ball_sum: norm/action dimension");
  check_horizon(a, norm, n);
  BallTester ball(norm, Point(norm.dim(), 0), Rat(n));
  int64_t bound = ball_coord_bound(norm, n);
  Rat acc(0);
  std::vector<Point> shifts;
  for (const auto& [v, val] : f.atoms()) {
    shifts.clear();
    a.preimage_shifts(omega, v, bound, shifts);
    for (const Point& u : shifts) {
      if (ball.contains(u)) acc += val * a.mass(v);
    }
  }
  return acc / a.mass(omega);
}

Rat ball_sum_ones(const Action& a, const NormSpec& norm, int64_t n, const Point& omega) {
  if (norm.dim() != a.dim()) throw DimensionMismatchError("ball_sum_ones: norm/action dimension");
  check_horizon(a, norm, n);
  BallTester ball(norm, Point(norm.dim(), 0), Rat(n));
  Rat acc(0);
  for_each_ball_point(ball, [&](const Point& u) { acc += a.mass(a.apply(point_neg(u), omega)); });
  return acc / a.mass(omega);
}

Rat ratio_average(const Action& a, const Observable& f, const Observable& g, const NormSpec& norm,
                  int64_t n, const Point& omega) {
  Rat den = ball_sum(a, g, norm, n, omega);
  if (den == 0) {
    throw ZeroDenominatorError("ratio_average: S_" + std::to_string(n) + " g vanishes at " +
                               point_to_string(omega));
  }
  return ball_sum(a, f, norm, n, omega) / den;
}

Rat shell_ratio(const Action& a, const Observable& h, const NormSpec& norm, int64_t n, int64_t t,
                const Point& omega) {
  if (t < 1 || t > n) throw std::invalid_argument("shell_ratio needs 1 <= t <= n");
  Rat den = ball_sum(a, h, norm, n, omega);
  if (den == 0) {
    throw ZeroDenominatorError("shell_ratio: S_" + std::to_string(n) + " h vanishes at " +
                               point_to_string(omega));
  }
  Rat num = ball_sum(a, h, norm, n + t, omega) - ball_sum(a, h, norm, n - t, omega);
  return num / den;
}

CoboundaryReport coboundary_ratio_bound_check(const Action& a, const Observable& f, const Point& v,
                                              const NormSpec& norm, int64_t n, const Point& omega) {
  CoboundaryReport rep;
  rep.n = n;
  rep.t = norm.int_ceil_norm(v);
  Observable coboundary = f.minus(dual_push(a, v, f));
  Observable absf = f.abs();

  Rat lhs = ball_sum(a, coboundary, norm, n, omega);
  rep.lhs_abs = rat_abs(lhs);
  Rat outer = ball_sum(a, absf, norm, n + rep.t, omega);
  Rat inner = rep.t <= n ? ball_sum(a, absf, norm, n - rep.t, omega) : Rat(0);
  rep.shell_sum_absf = outer - inner;
  rep.cancellation_ok = rep.lhs_abs <= rep.shell_sum_absf;

  rep.ball_sum_absf = ball_sum(a, absf, norm, n, omega);
  rep.ball_sum_ones = ball_sum_ones(a, norm, n, omega);
  rep.sup_f = f.sup_norm();
  rep.linfty_ok = rep.ball_sum_absf <= rep.sup_f * rep.ball_sum_ones;

  if (rep.ball_sum_ones != 0) rep.ratio_lhs = rep.lhs_abs / rep.ball_sum_ones;
  if (rep.ball_sum_absf != 0) {
    rep.ratio_bound = (rep.shell_sum_absf / rep.ball_sum_absf) * rep.sup_f;
  }
  if (rep.ratio_lhs && rep.ratio_bound) {
    rep.chain_ok = rep.cancellation_ok && rep.linfty_ok && *rep.ratio_lhs <= *rep.ratio_bound;
  } else {
    rep.chain_ok = rep.cancellation_ok && rep.linfty_ok && rep.lhs_abs == 0;
  }
  return rep;
}

RatioTailBound ratio_tail_bound(const Action& a, const Observable& f, const Observable& g,
                                const NormSpec& norm, int64_t n, const Point& omega) {
  if (!a.translation_model()) {
    throw std::invalid_argument("ratio_tail_bound applies to translation models only");
  }
  if (!f.nonnegative() || !g.nonnegative()) {
    throw std::invalid_argument("ratio_tail_bound needs f, g >= 0");
  }
  Rat int_f = a.integral(f);
  Rat int_g = a.integral(g);
  if (int_g <= 0) throw std::invalid_argument("ratio_tail_bound needs integral(g) > 0");
  // tail of an observable: its f*mu mass outside omega - B_n
  auto tail = [&](const Observable& obs) {
    Rat t(0);
    for (const auto& [v, val] : obs.atoms()) {
      if (norm.cmp(point_sub(omega, v), Rat(n)) > 0) t += val * a.mass(v);
    }
    return t;
  };
  RatioTailBound out;
  out.tail_f = tail(f);
  out.tail_g = tail(g);
  if (out.tail_g < int_g) {
    out.valid = true;
    out.bound = (out.tail_f * int_g + out.tail_g * int_f) / (int_g * (int_g - out.tail_g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transference
// ---------------------------------------------------------------------------

DiscreteMeasure transfer_measure(const Action& a, const Point& omega, int64_t n,
                                 const NormSpec& norm) {
  check_horizon(a, norm, 2 * n);
  BallTester ball(norm, Point(norm.dim(), 0), Rat(2 * n));
  std::vector<std::pair<Point, Rat>> atoms;
  for_each_ball_point(ball, [&](const Point& u) {
    atoms.emplace_back(u, a.mass(a.apply(point_neg(u), omega)) / a.mass(omega));
  });
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure transfer_measure(const Action& a, const Observable& f, const Point& omega,
                                 int64_t n, const NormSpec& norm) {
  if (!f.nonnegative()) throw std::invalid_argument("transfer_measure needs f >= 0");
  check_horizon(a, norm, 2 * n);
  BallTester ball(norm, Point(norm.dim(), 0), Rat(2 * n));
  int64_t bound = ball_coord_bound(norm, 2 * n);
  std::vector<std::pair<Point, Rat>> atoms;
  std::vector<Point> shifts;
  for (const auto& [v, val] : f.atoms()) {
    shifts.clear();
    a.preimage_shifts(omega, v, bound, shifts);
    for (const Point& u : shifts) {
      if (!ball.contains(u)) continue;
      Rat m = val * a.mass(v) / a.mass(omega);
      if (m > 0) atoms.emplace_back(u, m);
    }
  }
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

}  // namespace besicover
