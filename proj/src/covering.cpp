#include "besicover/covering.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace besicover {

namespace {

bool family_equal(const BallFamilySpec& a, const BallFamilySpec& b) {
  if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
  if (a.kind() == FamilyKind::norm_ball) return *a.norm() == *b.norm();
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// BallFamilySpec
// ---------------------------------------------------------------------------

std::shared_ptr<const BallFamilySpec> BallFamilySpec::norm_balls(NormRef norm) {
  if (!norm) throw std::invalid_argument("norm_balls: null norm");
  int d = norm->dim();
  return std::shared_ptr<const BallFamilySpec>(
      new BallFamilySpec(FamilyKind::norm_ball, std::move(norm), d));
}

std::shared_ptr<const BallFamilySpec> BallFamilySpec::one_sided_cubes(int d) {
  if (d < 1) throw std::invalid_argument("one_sided_cubes: dimension must be positive");
  NormRef linf = make_norm(NormSpec::linf(d));
  return std::shared_ptr<const BallFamilySpec>(
      new BallFamilySpec(FamilyKind::one_sided_cube, std::move(linf), d));
}

void BallFamilySpec::validate_radius(const Rat& radius) const {
  if (radius < 0) throw std::invalid_argument("ball radius must be nonnegative");
  if (kind_ == FamilyKind::one_sided_cube && radius.get_den() != 1) {
    throw std::invalid_argument("one-sided cube index must be an integer");
  }
}

bool BallFamilySpec::contains(const Point& center, const Rat& radius, const Point& u) const {
  if (radius < 0) return false;
  if (kind_ == FamilyKind::norm_ball) {
    return dist_norm_->le(point_sub(u, center), radius);
  }
  // u in center + {0..n}^d
  for (int i = 0; i < d_; ++i) {
    int64_t off = u[i] - center[i];
    if (off < 0 || Rat(off) > radius) return false;
  }
  return true;
}

std::vector<Point> BallFamilySpec::points(const Point& center, const Rat& radius) const {
  validate_radius(radius);
  if (kind_ == FamilyKind::norm_ball) {
    return lattice_ball_points(LatticeBall{center, radius, dist_norm_});
  }
  int64_t n = rat_floor_i64(radius);
  Int vol = int_pow(Int(n) + 1, static_cast<unsigned long>(d_));
  if (vol > point_cap()) throw ResourceCapError("cube enumeration exceeds point cap");
  std::vector<Point> out;
  Point u(d_);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d_) {
      out.push_back(u);
      return;
    }
    for (int64_t c = center[axis]; c <= center[axis] + n; ++c) {
      u[axis] = c;
      rec(axis + 1);
    }
  };
  rec(0);
  return out;
}

std::optional<int64_t> BallFamilySpec::entry_index(const Point& center, const Point& u) const {
  if (kind_ == FamilyKind::norm_ball) {
    return dist_norm_->int_ceil_norm(point_sub(u, center));
  }
  int64_t worst = 0;
  for (int i = 0; i < d_; ++i) {
    int64_t off = u[i] - center[i];
    if (off < 0) return std::nullopt;
    worst = std::max(worst, off);
  }
  return worst;
}

std::string BallFamilySpec::describe() const {
  if (kind_ == FamilyKind::norm_ball) return dist_norm_->describe();
  return "qcube";
}

// ---------------------------------------------------------------------------
// Carpet
// ---------------------------------------------------------------------------

Carpet::Carpet(FamilyRef family, std::vector<FamilyBall> balls)
    : family_(std::move(family)), balls_(std::move(balls)) {
  if (!family_) throw std::invalid_argument("carpet: null family");
  centers_.reserve(balls_.size());
  for (const FamilyBall& b : balls_) {
    if (static_cast<int>(b.center.size()) != family_->dim()) {
      throw DimensionMismatchError("carpet ball center dimension mismatch");
    }
    family_->validate_radius(b.radius);
    centers_.push_back(b.center);
  }
  sort_unique(centers_);
}

Rat Carpet::minrad() const {
  if (balls_.empty()) throw std::logic_error("minrad of empty carpet");
  Rat m = balls_.front().radius;
  for (const auto& b : balls_) {
    if (b.radius < m) m = b.radius;
  }
  return m;
}

Rat Carpet::maxrad() const {
  if (balls_.empty()) throw std::logic_error("maxrad of empty carpet");
  Rat m = balls_.front().radius;
  for (const auto& b : balls_) {
    if (b.radius > m) m = b.radius;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Incremental sequences
// ---------------------------------------------------------------------------

bool is_incremental(const BallFamilySpec& family, std::span<const FamilyBall> seq) {
  if (seq.empty()) throw std::invalid_argument("is_incremental: empty sequence");
  for (size_t i = 1; i < seq.size(); ++i) {
    if (seq[i].radius > seq[i - 1].radius) return false;
  }
  for (size_t i = 1; i < seq.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (family.contains(seq[j].center, seq[j].radius, seq[i].center)) return false;
    }
  }
  return true;
}

bool is_incremental(std::span<const LatticeBall> seq) {
  if (seq.empty()) throw std::invalid_argument("is_incremental: empty sequence");
  for (const LatticeBall& b : seq) {
    if (!b.norm || *b.norm != *seq.front().norm) {
      throw std::invalid_argument("is_incremental: mixed norms rejected");
    }
  }
  auto family = BallFamilySpec::norm_balls(seq.front().norm);
  std::vector<FamilyBall> fb;
  fb.reserve(seq.size());
  for (const LatticeBall& b : seq) fb.push_back({b.center, b.radius});
  return is_incremental(*family, fb);
}

Carpet incremental_select(const Carpet& carpet) {
  std::vector<size_t> order(carpet.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return carpet.balls()[a].radius > carpet.balls()[b].radius;
  });
  std::vector<FamilyBall> selected;
  for (size_t idx : order) {
    const FamilyBall& cand = carpet.balls()[idx];
    bool covered = false;
    for (const FamilyBall& s : selected) {
      if (carpet.family().contains(s.center, s.radius, cand.center)) {
        covered = true;
        break;
      }
    }
    if (!covered) selected.push_back(cand);
  }
  return Carpet(carpet.family_ptr(), std::move(selected));
}

// ---------------------------------------------------------------------------
// Multiplicity
// ---------------------------------------------------------------------------

int64_t multiplicity(const BallFamilySpec& family, std::span<const FamilyBall> balls,
                     const std::vector<Point>* probe) {
  if (balls.empty()) return 0;
  if (probe) {
    int64_t best = 0;
    for (const Point& p : *probe) {
      int64_t n = 0;
      for (const FamilyBall& b : balls) {
        if (family.contains(b.center, b.radius, p)) ++n;
      }
      best = std::max(best, n);
    }
    return best;
  }
  // Accumulate counts over the union; points outside every ball count zero,
  // so this equals the bounding-box scan.
  std::unordered_map<Point, int64_t, PointHash> counts;
  int64_t budget = point_cap();
  int64_t used = 0;
  for (const FamilyBall& b : balls) {
    std::vector<Point> pts = family.points(b.center, b.radius);
    used += static_cast<int64_t>(pts.size());
    if (used > budget) throw ResourceCapError("multiplicity enumeration exceeds point cap");
    for (Point& p : pts) ++counts[std::move(p)];
  }
  int64_t best = 0;
  for (const auto& [p, n] : counts) best = std::max(best, n);
  return best;
}

// ---------------------------------------------------------------------------
// Well-separation
// ---------------------------------------------------------------------------

namespace {

struct SepElem {
  Point center;
  Rat outer;  // all points lie within dist_norm distance `outer` of center
  Rat rad;    // nominal radius, for the minrad default
  std::function<std::vector<Point>()> gen;
  mutable std::vector<Point> pts;
  mutable bool have = false;
  const std::vector<Point>& points() const {
    if (!have) {
      pts = gen();
      have = true;
    }
    return pts;
  }
};

SepElem make_elem(Point center, Rat outer, Rat rad, std::function<std::vector<Point>()> gen) {
  SepElem e;
  e.center = std::move(center);
  e.outer = std::move(outer);
  e.rad = std::move(rad);
  e.gen = std::move(gen);
  return e;
}

struct BBox {
  std::vector<int64_t> lo, hi;
};

BBox bbox_of(const std::vector<Point>& pts) {
  BBox b;
  if (pts.empty()) return b;
  size_t d = pts.front().size();
  b.lo.assign(d, INT64_MAX);
  b.hi.assign(d, INT64_MIN);
  for (const Point& p : pts) {
    for (size_t i = 0; i < d; ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  }
  return b;
}

std::vector<Point> filter_near_box(const std::vector<Point>& pts, const BBox& box,
                                   const std::vector<int64_t>& inflate) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    bool in = true;
    for (size_t i = 0; i < p.size() && in; ++i) {
      if (p[i] < box.lo[i] - inflate[i] || p[i] > box.hi[i] + inflate[i]) in = false;
    }
    if (in) out.push_back(p);
  }
  return out;
}

// Exact test dist(A, B) >= R with center pruning and a corridor filter.
bool pair_separated(const NormSpec& dn, const SepElem& a, const SepElem& b, const Rat& R) {
  if (dn.cmp(point_sub(a.center, b.center), R + a.outer + b.outer) >= 0) return true;
  const auto& A = a.points();
  const auto& B = b.points();
  if (A.empty() || B.empty()) return true;
  std::vector<int64_t> inflate(A.front().size());
  for (size_t i = 0; i < inflate.size(); ++i) {
    inflate[i] = rat_ceil_i64(R * dn.axis_bound(static_cast<int>(i)));
  }
  BBox boxB = bbox_of(B);
  std::vector<Point> af = filter_near_box(A, boxB, inflate);
  if (af.empty()) return true;
  BBox boxA = bbox_of(af);
  std::vector<Point> bf = filter_near_box(B, boxA, inflate);
  for (const Point& x : af) {
    for (const Point& y : bf) {
      if (dn.cmp(point_sub(x, y), R) < 0) return false;
    }
  }
  return true;
}

bool all_pairs_separated(const NormSpec& dn, const std::vector<SepElem>& elems, const Rat& R) {
  for (size_t i = 0; i < elems.size(); ++i) {
    for (size_t j = i + 1; j < elems.size(); ++j) {
      if (!pair_separated(dn, elems[i], elems[j], R)) return false;
    }
  }
  return true;
}

Rat family_minrad(const std::vector<SepElem>& elems) {
  Rat m = elems.front().rad;
  for (const auto& e : elems) {
    if (e.rad < m) m = e.rad;
  }
  return m;
}

}  // namespace

bool is_well_separated(const BallFamilySpec& family, std::span<const FamilyBall> balls,
                       const std::optional<Rat>& R) {
  if (balls.empty()) throw std::invalid_argument("is_well_separated: empty family");
  std::vector<SepElem> elems;
  elems.reserve(balls.size());
  for (const FamilyBall& b : balls) {
    elems.push_back(make_elem(b.center, family.enclosing_radius(b.radius), b.radius,
                              [&family, b]() { return family.points(b.center, b.radius); }));
  }
  Rat sep = R ? *R : family_minrad(elems);
  return all_pairs_separated(family.dist_norm(), elems, sep);
}

bool is_well_separated(std::span<const ThickSphere> spheres, const std::optional<Rat>& R) {
  if (spheres.empty()) throw std::invalid_argument("is_well_separated: empty family");
  for (const ThickSphere& s : spheres) {
    if (*s.norm != *spheres.front().norm) {
      throw std::invalid_argument("is_well_separated: mixed norms rejected");
    }
  }
  std::vector<SepElem> elems;
  elems.reserve(spheres.size());
  for (const ThickSphere& s : spheres) {
    elems.push_back(make_elem(s.center, s.radius + s.thickness, s.radius,
                              [&s]() { return thick_boundary_points(s); }));
  }
  Rat sep = R ? *R : family_minrad(elems);
  return all_pairs_separated(*spheres.front().norm, elems, sep);
}

bool spheres_well_separated(const NormSpec& norm, std::span<const FamilyBall> spheres,
                            const std::optional<Rat>& R) {
  if (spheres.empty()) throw std::invalid_argument("spheres_well_separated: empty family");
  std::vector<SepElem> elems;
  elems.reserve(spheres.size());
  for (const FamilyBall& s : spheres) {
    elems.push_back(make_elem(s.center, s.radius, s.radius,
                              [&norm, s]() { return exact_sphere_points(s.center, s.radius, norm); }));
  }
  Rat sep = R ? *R : family_minrad(elems);
  return all_pairs_separated(norm, elems, sep);
}

// ---------------------------------------------------------------------------
// Coloring / disjointification
// ---------------------------------------------------------------------------

std::vector<std::vector<FamilyBall>> greedy_color_classes(const Carpet& carpet, int64_t chi) {
  if (chi < 1) throw std::invalid_argument("coloring needs chi >= 1");
  Carpet inc = incremental_select(carpet);
  const BallFamilySpec& fam = carpet.family();
  const NormSpec& dn = fam.dist_norm();

  std::vector<std::vector<FamilyBall>> classes(static_cast<size_t>(chi));
  std::vector<std::vector<SepElem>> class_elems(static_cast<size_t>(chi));
  for (const FamilyBall& ball : inc.balls()) {
    SepElem cand = make_elem(ball.center, fam.enclosing_radius(ball.radius), ball.radius,
                             [&fam, ball]() { return fam.points(ball.center, ball.radius); });
    bool placed = false;
    for (size_t c = 0; c < classes.size() && !placed; ++c) {
      bool legal = true;
      for (const SepElem& w : class_elems[c]) {
        // processing order has non-increasing radii, so checking against the
        // newcomer's radius preserves >= minrad for the finished class
        if (!pair_separated(dn, cand, w, ball.radius)) {
          legal = false;
          break;
        }
      }
      if (legal) {
        classes[c].push_back(ball);
        class_elems[c].push_back(std::move(cand));
        placed = true;
      }
    }
    if (!placed) {
      throw CoveringCertificateError(
          "no legal color within chi=" + std::to_string(chi) +
              "; the supplied Besicovitch/doubling certificate is not valid for this carpet",
          ball);
    }
  }
  std::vector<std::vector<FamilyBall>> out;
  for (auto& cls : classes) {
    if (!cls.empty()) out.push_back(std::move(cls));
  }
  return out;
}

std::vector<std::vector<FamilyBall>> color_disjointify(const Carpet& carpet, int64_t C, int64_t D) {
  if (C < 1 || D < 1) throw std::invalid_argument("color_disjointify needs C, D >= 1");
  int64_t chi = C * D * D + 1;
  return greedy_color_classes(carpet, chi);
}

MeasureDisjointResult measure_disjointify(const Carpet& carpet, const DiscreteMeasure& mu,
                                          int64_t chi) {
  auto classes = greedy_color_classes(carpet, chi);
  MeasureDisjointResult best;
  bool first = true;
  for (size_t c = 0; c < classes.size(); ++c) {
    std::vector<Point> covered;
    for (const Point& x : carpet.centers()) {
      for (const FamilyBall& b : classes[c]) {
        if (carpet.family().contains(b.center, b.radius, x)) {
          covered.push_back(x);
          break;
        }
      }
    }
    Rat captured = mu.mass_of(covered);
    if (first || captured > best.captured) {
      best.balls = classes[c];
      best.captured = captured;
      best.covered_centers = std::move(covered);
      best.color_index = static_cast<int>(c);
      first = false;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Frequency transfer check
// ---------------------------------------------------------------------------

FrequencyReport frequency_bound_check(const Carpet& carpet, const std::vector<Point>& A,
                                      const std::vector<Point>& B, const Rat& t, int64_t C,
                                      FreqDirection direction) {
  if (C < 1) throw std::invalid_argument("frequency_bound_check needs C >= 1");
  if (t <= 0) throw std::invalid_argument("frequency_bound_check needs t > 0");
  std::vector<Point> a_set = A, b_set = B;
  sort_unique(a_set);
  sort_unique(b_set);
  if (b_set.empty()) throw std::invalid_argument("frequency_bound_check: B must be nonempty");
  if (!sorted_is_subset(a_set, carpet.centers()) || !sorted_is_subset(b_set, carpet.centers())) {
    throw std::invalid_argument("frequency_bound_check: A and B must be subsets of E");
  }

  FrequencyReport rep;
  rep.direction = direction;
  rep.t = t;
  rep.C = C;
  rep.card_A = static_cast<int64_t>(a_set.size());
  rep.card_B = static_cast<int64_t>(b_set.size());
  rep.hypothesis_holds = true;

  for (size_t i = 0; i < carpet.balls().size(); ++i) {
    const FamilyBall& f = carpet.balls()[i];
    FrequencyReport::PerBall pb;
    for (const Point& x : a_set) {
      if (carpet.family().contains(f.center, f.radius, x)) ++pb.a;
    }
    for (const Point& x : b_set) {
      if (carpet.family().contains(f.center, f.radius, x)) ++pb.b;
    }
    if (direction == FreqDirection::low) {
      // |B ∩ F| = 0 counts as a hypothesis failure
      pb.hyp_ok = pb.b > 0 && Rat(pb.a) < t * Rat(pb.b);
    } else {
      // |B ∩ F| = 0 reads as ratio +infinity, satisfying the hypothesis
      pb.hyp_ok = pb.b == 0 || Rat(pb.a) > t * Rat(pb.b);
    }
    if (!pb.hyp_ok && !rep.first_violation) {
      rep.first_violation = i;
      rep.hypothesis_holds = false;
    }
    if (!pb.hyp_ok) rep.hypothesis_holds = false;
    rep.per_ball.push_back(pb);
  }

  if (rep.hypothesis_holds) {
    Rat lhs = Rat(rep.card_A) / Rat(rep.card_B);
    if (direction == FreqDirection::low) {
      rep.conclusion_holds = lhs < Rat(C) * t;
    } else {
      rep.conclusion_holds = lhs > t / Rat(C);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stack
// ---------------------------------------------------------------------------

Stack::Stack(std::vector<Carpet> levels, StackGrowth growth, Rat base_minrad,
             std::optional<std::vector<Point>> centers)
    : levels_(std::move(levels)), growth_(growth), base_minrad_(std::move(base_minrad)) {
  if (levels_.empty()) {
    if (!centers) throw std::invalid_argument("height-0 stack needs an explicit center set");
    centers_ = *centers;
    sort_unique(centers_);
    return;
  }
  centers_ = levels_.front().centers();
  if (centers) {
    std::vector<Point> want = *centers;
    sort_unique(want);
    if (want != centers_) throw std::invalid_argument("stack centers do not match level carpets");
  }
  for (size_t i = 0; i < levels_.size(); ++i) {
    if (!family_equal(levels_[i].family(), levels_.front().family())) {
      throw std::invalid_argument("stack levels must share one ball family");
    }
    if (levels_[i].centers() != centers_) {
      throw std::invalid_argument("stack level " + std::to_string(i + 1) +
                                  " is not a carpet over the common center set");
    }
  }
  if (levels_.front().minrad() < base_minrad_) {
    throw std::invalid_argument("stack level 1 violates the base minrad constraint");
  }
  for (size_t i = 1; i < levels_.size(); ++i) {
    Rat prev_max = levels_[i - 1].maxrad();
    Rat need = growth_ == StackGrowth::adjacent ? prev_max : prev_max * prev_max;
    if (levels_[i].minrad() < need) {
      throw std::invalid_argument("stack growth constraint violated between levels " +
                                  std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }
}

// ---------------------------------------------------------------------------
// Sphere exhaustion (Vitali-style)
// ---------------------------------------------------------------------------

namespace {

bool in_annulus(const NormSpec& norm, const Point& x, const FamilyBall& ball, const Rat& t) {
  Point diff = point_sub(x, ball.center);
  return norm.cmp(diff, ball.radius + t) <= 0 && norm.cmp(diff, ball.radius - t) > 0;
}

}  // namespace

SphereExhaustionResult sphere_exhaustion(const Stack& stack, const DiscreteMeasure& mu,
                                         const std::vector<Point>& F, const Rat& eps,
                                         const Rat& delta, int64_t chi) {
  if (stack.height() == 0) throw std::invalid_argument("sphere_exhaustion: empty stack");
  if (stack.levels().front().family().kind() != FamilyKind::norm_ball) {
    throw std::invalid_argument("sphere_exhaustion: requires a norm-ball family");
  }
  if (eps <= 0 || eps >= 1 || delta <= 0 || delta >= 1) {
    throw std::invalid_argument("sphere_exhaustion: eps, delta must lie in (0,1)");
  }
  if (chi < 1) throw std::invalid_argument("sphere_exhaustion: chi >= 1 required");
  const NormSpec& norm = *stack.levels().front().family().norm();

  std::vector<Point> f_set = F;
  sort_unique(f_set);
  if (!sorted_is_subset(f_set, stack.centers())) {
    throw std::invalid_argument("sphere_exhaustion: F must consist of stack centers");
  }

  // Required height p = ceil(2*chi / (eps*delta)).
  Int need = rat_ceil(Rat(2 * chi) / (eps * delta));
  if (Int(static_cast<long>(stack.height())) < need) {
    throw std::invalid_argument("sphere_exhaustion: stack height " + std::to_string(stack.height()) +
                                " below required p = " + need.get_str());
  }
  Rat f_mass = mu.mass_of(f_set);
  if (!(f_mass > delta * mu.total())) {
    throw std::invalid_argument("sphere_exhaustion: mu(F) <= delta * mu(X)");
  }
  for (size_t i = 1; i < stack.height(); ++i) {
    if (stack.levels()[i].minrad() < stack.levels()[i - 1].maxrad()) {
      throw std::invalid_argument("sphere_exhaustion: adjacent radius growth violated");
    }
  }
  // Thickness precondition mu(∂₁B) > eps * mu(B_{r+1}) for every stack ball;
  // vacuous for zero-mass balls.
  for (size_t lev = 0; lev < stack.height(); ++lev) {
    for (const FamilyBall& b : stack.levels()[lev].balls()) {
      Rat outer = mu.mass_in_ball(BallTester(norm, b.center, b.radius + 1));
      if (outer == 0) continue;
      Rat inner = mu.mass_in_ball(BallTester(norm, b.center, b.radius - 1));
      if (!(outer - inner > eps * outer)) {
        throw ExhaustionOverrunError(
            "sphere_exhaustion: ball at " + point_to_string(b.center) + " radius " +
                rat_to_string(b.radius) + " in level " + std::to_string(lev + 1) +
                " is not eps-thick",
            "mu(boundary B) > eps * mu(B)");
      }
    }
  }

  const Rat half_f = f_mass / 2;
  std::vector<FamilyBall> V;
  SphereExhaustionResult res;

  auto capture = [&](const Rat& r) {
    std::vector<Point> covered;
    for (const Point& x : f_set) {
      for (const FamilyBall& b : V) {
        if (in_annulus(norm, x, b, 2 * r)) {
          covered.push_back(x);
          break;
        }
      }
    }
    return covered;
  };

  int rounds = 0;
  for (size_t L = stack.height(); L >= 1; --L) {
    Rat r = stack.level(L).maxrad();
    std::vector<Point> covered = capture(r);
    Rat cmass = mu.mass_of(covered);
    if (cmass > half_f) {
      res.k = static_cast<int64_t>(L) + 1;
      res.V = V;
      res.r_used = r;
      res.captured = cmass;
      res.rounds = rounds;
      return res;
    }
    std::vector<Point> G = sorted_difference(f_set, covered);
    std::vector<FamilyBall> g_balls;
    for (const FamilyBall& b : stack.level(L).balls()) {
      if (sorted_contains(G, b.center)) g_balls.push_back(b);
    }
    Carpet carpet_g(stack.levels().front().family_ptr(), std::move(g_balls));
    DiscreteMeasure mu_g = mu.restricted_to(G);
    MeasureDisjointResult mdr = measure_disjointify(carpet_g, mu_g, chi);
    for (const FamilyBall& b : mdr.balls) V.push_back(b);
    ++rounds;
  }

  // k = 1: no level below remains; the base minrad plays maxrad U_0.
  Rat r = stack.base_minrad();
  std::vector<Point> covered = capture(r);
  Rat cmass = mu.mass_of(covered);
  if (cmass > half_f) {
    res.k = 1;
    res.V = V;
    res.r_used = r;
    res.captured = cmass;
    res.rounds = rounds;
    return res;
  }
  throw ExhaustionOverrunError(
      "sphere_exhaustion: " + std::to_string(rounds) +
          " rounds exhausted the stack without capturing half of mu(F); a precondition must have "
          "been violated",
      "accumulated boundary mass would exceed mu(X)");
}

// ---------------------------------------------------------------------------
// Random carpets and the empirical Besicovitch certificate
// ---------------------------------------------------------------------------

Carpet random_carpet(const FamilyRef& family, const CarpetGenParams& params, Rng& rng) {
  if (params.n_balls < 1) throw std::invalid_argument("random_carpet: need at least one ball");
  if (params.r_min < 0 || params.r_max < params.r_min) {
    throw std::invalid_argument("random_carpet: bad radius range");
  }
  std::vector<FamilyBall> balls;
  balls.reserve(static_cast<size_t>(params.n_balls));
  const int d = family->dim();
  for (int i = 0; i < params.n_balls; ++i) {
    Point c(d);
    for (int k = 0; k < d; ++k) c[k] = rng.range(-params.window, params.window);
    int64_t r = rng.range(params.r_min, params.r_max);
    balls.push_back({std::move(c), Rat(r)});
  }
  return Carpet(family, std::move(balls));
}

BesicovitchCertificate certify_besicovitch(const FamilyRef& family, const CarpetGenParams& params,
                                           int64_t trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("certify_besicovitch: need trials >= 1");
  BesicovitchCertificate cert;
  cert.family = family->describe();
  cert.d = family->dim();
  cert.trials = trials;
  cert.seed = seed;
  cert.params = params;
  for (int64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    Carpet carpet = random_carpet(family, params, rng);
    Carpet inc = incremental_select(carpet);
    int64_t m = multiplicity(carpet.family(), inc.balls());
    cert.max_multiplicity = std::max(cert.max_multiplicity, m);
  }
  cert.C = cert.max_multiplicity;
  return cert;
}

}  // namespace besicover
