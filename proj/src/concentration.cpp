#include "besicover/concentration.hpp"

#include <algorithm>
#include <functional>

namespace besicover {

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

BudgetParams::BudgetParams(int64_t k_, int64_t chi_, Rat eps_, Rat delta_)
    : k(k_), chi(chi_), eps(std::move(eps_)), delta(std::move(delta_)) {
  if (k < 0) throw std::invalid_argument("budget k must be nonnegative");
  if (chi < 1) throw std::invalid_argument("budget chi must be positive");
  if (eps <= 0 || eps >= 1 || delta <= 0 || delta >= 1) {
    throw std::invalid_argument("budget eps, delta must lie in (0,1)");
  }
}

Int budget_q(const BudgetParams& p) {
  Rat base = Rat(200) * Rat(p.chi) * Rat(p.chi) / (p.eps * p.eps * p.delta * p.delta * p.delta);
  Int b = rat_ceil(base);
  return int_pow(b, static_cast<unsigned long>(p.k)) *
         int_pow(Int(1000), static_cast<unsigned long>(p.k * p.k));
}

Int budget_Q(const BudgetParams& p) {
  if (p.k == 0) return Int(1);
  Int a = rat_ceil(Rat(2 * p.chi) / (p.eps * p.delta));
  Int b = rat_ceil(Rat(64 * p.chi) / (p.eps * p.delta * p.delta));
  BudgetParams next(p.k - 1, p.chi, p.eps / 2, p.delta / 8);
  return a * (1 + b) * (1 + budget_Q(next));
}

// ---------------------------------------------------------------------------
// Thickness
// ---------------------------------------------------------------------------

Rat thickness_fraction(const DiscreteMeasure& mu, const LatticeBall& ball) {
  if (ball.radius < 1) {
    throw std::invalid_argument("thickness_fraction: unit boundary needs radius >= 1");
  }
  Rat outer = mu.mass_in_ball(BallTester(*ball.norm, ball.center, ball.radius + 1));
  if (outer == 0) {
    throw UndefinedFractionError("thickness_fraction: ball at " + point_to_string(ball.center) +
                                 " carries no mass");
  }
  Rat inner = mu.mass_in_ball(BallTester(*ball.norm, ball.center, ball.radius - 1));
  return (outer - inner) / outer;
}

ThickCenterMassResult thick_center_mass(const DiscreteMeasure& mu, const Stack& stack,
                                        const Rat& eps) {
  if (stack.growth() != StackGrowth::squared) {
    throw std::invalid_argument("thick_center_mass: stack must use squared radius growth");
  }
  if (mu.total() == 0) throw std::invalid_argument("thick_center_mass: empty measure");
  if (stack.height() > 0 && stack.levels().front().family().kind() != FamilyKind::norm_ball) {
    throw std::invalid_argument("thick_center_mass: requires a norm-ball family");
  }

  ThickCenterMassResult res;
  for (const Point& x : stack.centers()) {
    bool all_thick = true;
    for (size_t lev = 0; lev < stack.height() && all_thick; ++lev) {
      const NormSpec& norm = *stack.levels()[lev].family().norm();
      for (const FamilyBall& b : stack.levels()[lev].balls()) {
        if (b.center != x) continue;
        Rat outer = mu.mass_in_ball(BallTester(norm, b.center, b.radius + 1));
        if (outer == 0) continue;  // zero-mass ball: hypothesis vacuous, counts as thick
        Rat inner = mu.mass_in_ball(BallTester(norm, b.center, b.radius - 1));
        if ((outer - inner) < eps * outer) {
          all_thick = false;
          break;
        }
      }
    }
    if (all_thick) res.f_thick.push_back(x);
  }
  res.f_thick_mass = mu.mass_of(res.f_thick);
  res.fraction = res.f_thick_mass / mu.total();
  return res;
}

// ---------------------------------------------------------------------------
// Boundary ratio scan
// ---------------------------------------------------------------------------

BoundaryScanResult boundary_ratio_scan(const DiscreteMeasure& mu, const NormSpec& norm,
                                       std::vector<Point> samples, const std::vector<Rat>& radii,
                                       const Rat& eps, BoundaryKind kind) {
  if (radii.empty()) throw std::invalid_argument("boundary_ratio_scan: empty radius schedule");
  for (size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) {
      throw std::invalid_argument("boundary_ratio_scan: schedule must be strictly decreasing");
    }
  }
  if (radii.back() <= 0) throw std::invalid_argument("boundary_ratio_scan: radii must be positive");
  if (kind == BoundaryKind::unit_shell && radii.back() < 1) {
    throw std::invalid_argument("boundary_ratio_scan: unit-shell boundaries need radii >= 1");
  }
  sort_unique(samples);
  if (samples.empty()) throw std::invalid_argument("boundary_ratio_scan: no sample points");

  BoundaryScanResult res;
  Rat sampled_mass(0), exceed_mass(0);
  for (const Point& x : samples) {
    bool all_ge = true;
    for (const Rat& r : radii) {
      Rat ball_mass = mu.mass_in_ball(BallTester(norm, x, r));
      if (ball_mass == 0) {
        throw std::invalid_argument("boundary_ratio_scan: mu(B_r(x)) = 0 at " + point_to_string(x) +
                                    ", r = " + rat_to_string(r) + " (sample outside support?)");
      }
      Rat boundary_mass(0);
      if (kind == BoundaryKind::exact_sphere) {
        for (const Point& p : exact_sphere_points(x, r, norm)) boundary_mass += mu.mass(p);
      } else {
        boundary_mass = ball_mass - mu.mass_in_ball(BallTester(norm, x, r - 1));
      }
      Rat ratio = boundary_mass / ball_mass;
      if (ratio < eps) all_ge = false;
      res.rows.push_back({x, r, boundary_mass, ball_mass, ratio});
    }
    Rat m = mu.mass(x);
    sampled_mass += m;
    if (all_ge) {
      res.exceeding.push_back(x);
      exceed_mass += m;
    }
  }
  if (sampled_mass == 0) {
    throw std::invalid_argument("boundary_ratio_scan: sampled points carry no mass");
  }
  res.exceed_fraction = exceed_mass / sampled_mass;
  return res;
}

DiscreteMeasure dyadic_uniform_measure(int m, int d) {
  if (m < 0 || d < 1) throw std::invalid_argument("dyadic_uniform_measure: bad parameters");
  int64_t side = (int64_t{1} << m) + 1;
  Int count = int_pow(Int(side), static_cast<unsigned long>(d));
  if (count > point_cap()) throw ResourceCapError("dyadic grid exceeds point cap");
  std::vector<std::pair<Point, Rat>> atoms;
  atoms.reserve(static_cast<size_t>(count.get_ui()));
  Point p(d, 0);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      atoms.emplace_back(p, Rat(1));
      return;
    }
    for (int64_t c = 0; c < side; ++c) {
      p[axis] = c;
      rec(axis + 1);
    }
  };
  rec(0);
  return DiscreteMeasure::from_atoms(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Coarse dimension witnesses
// ---------------------------------------------------------------------------

WitnessCheckResult coarse_dim_witness_check(std::span<const LatticeBall> balls, const Rat& R0) {
  if (balls.empty()) throw std::invalid_argument("coarse_dim_witness_check: empty sequence");
  const NormSpec& norm = *balls.front().norm;
  WitnessCheckResult res;
  for (size_t i = 0; i < balls.size(); ++i) {
    if (*balls[i].norm != norm) {
      res.status = WitnessCheckResult::Status::hypothesis_violated;
      res.violation = "mixed norms";
      return res;
    }
    if (balls[i].radius < R0) {
      res.status = WitnessCheckResult::Status::hypothesis_violated;
      res.violation = "radius below R0 at index " + std::to_string(i);
      return res;
    }
    if (i > 0 && balls[i].radius > balls[i - 1].radius) {
      res.status = WitnessCheckResult::Status::hypothesis_violated;
      res.violation = "radii increase at index " + std::to_string(i);
      return res;
    }
    for (size_t j = 0; j < i; ++j) {
      if (norm.le(point_sub(balls[i].center, balls[j].center), balls[j].radius - 1)) {
        res.status = WitnessCheckResult::Status::hypothesis_violated;
        res.violation = "center " + std::to_string(i) + " lies in the shrunk ball " +
                        std::to_string(j);
        return res;
      }
    }
  }

  // Enumerate the smallest (last) unit boundary; test the rest by comparison.
  const LatticeBall& last = balls.back();
  std::vector<Point> candidates = annulus_points(last.center, last.radius, Rat(1), norm);
  for (const Point& p : candidates) {
    bool in_all = true;
    for (size_t i = 0; i + 1 < balls.size() && in_all; ++i) {
      Point diff = point_sub(p, balls[i].center);
      if (!(norm.cmp(diff, balls[i].radius + 1) <= 0 && norm.cmp(diff, balls[i].radius - 1) > 0)) {
        in_all = false;
      }
    }
    if (in_all) {
      res.status = WitnessCheckResult::Status::nonempty;
      res.witness = p;
      return res;
    }
  }
  res.status = WitnessCheckResult::Status::empty;
  return res;
}

namespace {

// Random lattice point with ‖p - z‖ in (r-1, r+1], by rejection from the box.
std::optional<Point> sample_on_shell(const NormSpec& norm, const Point& z, int64_t r, Rng& rng,
                                     int attempts) {
  const int d = norm.dim();
  for (int a = 0; a < attempts; ++a) {
    Point off(d);
    for (int i = 0; i < d; ++i) {
      int64_t bound = rat_ceil_i64(Rat(r + 1) * norm.axis_bound(i));
      off[i] = rng.range(-bound, bound);
    }
    if (norm.cmp(off, Rat(r + 1)) <= 0 && norm.cmp(off, Rat(r - 1)) > 0) {
      return point_add(z, off);
    }
  }
  return std::nullopt;
}

}  // namespace

ThresholdScan estimate_witness_threshold(const NormSpec& norm, const Rat& R0,
                                         const ThresholdScanParams& params) {
  if (R0 <= 1) throw std::invalid_argument("estimate_witness_threshold: R0 must exceed 1");
  int64_t r_lo = rat_ceil_i64(R0);
  int64_t r_hi = r_lo * params.r_hi_factor;
  ThresholdScan scan;
  NormRef nref = make_norm(norm);
  int64_t max_nonempty_k = 1;

  for (int64_t k = 2; k <= params.k_max; ++k) {
    int64_t nonempty = 0;
    for (int64_t trial = 0; trial < params.trials; ++trial) {
      Rng rng(derive_seed(params.seed, static_cast<uint64_t>(k * 1000003 + trial)));
      // Aim all boundaries at a common target z so intersections are likely.
      Point z(norm.dim(), 0);
      std::vector<LatticeBall> balls;
      std::vector<int64_t> radii;
      for (int64_t i = 0; i < k; ++i) radii.push_back(rng.range(r_lo, r_hi));
      std::sort(radii.rbegin(), radii.rend());
      bool built = true;
      for (int64_t i = 0; i < k && built; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
          auto cand = sample_on_shell(norm, z, radii[i], rng, 50);
          if (!cand) break;
          bool hyp = true;
          for (const LatticeBall& prev : balls) {
            if (norm.le(point_sub(*cand, prev.center), prev.radius - 1)) {
              hyp = false;
              break;
            }
          }
          if (hyp) {
            balls.push_back(LatticeBall{*cand, Rat(radii[i]), nref});
            placed = true;
          }
        }
        if (!placed) built = false;
      }
      if (!built) {
        ++scan.generator_failures;
        continue;
      }
      WitnessCheckResult r = coarse_dim_witness_check(balls, R0);
      if (r.status == WitnessCheckResult::Status::nonempty) {
        ++nonempty;
        max_nonempty_k = std::max(max_nonempty_k, k);
      }
    }
    scan.nonempty_per_k.emplace_back(k, nonempty);
  }
  scan.k_star = max_nonempty_k + 1;
  return scan;
}

// ---------------------------------------------------------------------------
// Packing numbers
// ---------------------------------------------------------------------------

namespace {

int64_t exact_packing_bb(const std::vector<Point>& cand, const NormSpec& norm, const Rat& sep,
                         int64_t greedy_lb) {
  const size_t n = cand.size();
  // conflict adjacency: dist < sep
  std::vector<std::vector<uint32_t>> adj(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (norm.cmp(point_sub(cand[i], cand[j]), sep) < 0) {
        adj[i].push_back(static_cast<uint32_t>(j));
        adj[j].push_back(static_cast<uint32_t>(i));
      }
    }
  }
  int64_t best = greedy_lb;
  std::vector<uint32_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<uint32_t>(i);
  // most-conflicted first: prunes faster
  std::stable_sort(order.begin(), order.end(),
                   [&](uint32_t a, uint32_t b) { return adj[a].size() > adj[b].size(); });
  std::vector<char> banned(n, 0);
  std::function<void(size_t, int64_t)> rec = [&](size_t pos, int64_t chosen) {
    int64_t remaining = 0;
    for (size_t p = pos; p < n; ++p) {
      if (!banned[order[p]]) ++remaining;
    }
    if (chosen + remaining <= best) return;
    if (pos == n) {
      best = std::max(best, chosen);
      return;
    }
    uint32_t v = order[pos];
    if (banned[v]) {
      rec(pos + 1, chosen);
      return;
    }
    // include v
    std::vector<uint32_t> newly;
    for (uint32_t w : adj[v]) {
      if (!banned[w]) {
        banned[w] = 1;
        newly.push_back(w);
      }
    }
    rec(pos + 1, chosen + 1);
    for (uint32_t w : newly) banned[w] = 0;
    // exclude v
    banned[v] = 1;
    rec(pos + 1, chosen);
    banned[v] = 0;
  };
  rec(0, 0);
  return best;
}

}  // namespace

PackingReport packing_number_b2(const NormSpec& norm, const Rat& R0, const Rat& grid_step,
                                int64_t exact_candidate_limit) {
  if (R0 <= 2) throw std::invalid_argument("packing_number_b2: R0 must exceed 2");
  if (grid_step <= 0 || grid_step.get_num() != 1) {
    throw std::invalid_argument("packing_number_b2: grid step must be 1/N");
  }
  Int scale = grid_step.get_den();
  // Scaled picture: ball radius 2/h, separation (1 - 1/R0)/h.
  Rat radius = Rat(2) * Rat(scale);
  Rat sep = (Rat(1) - Rat(1) / R0) * Rat(scale);

  PackingReport rep;
  rep.grid_step = grid_step;
  rep.separation = Rat(1) - Rat(1) / R0;

  NormRef nref = make_norm(norm);
  std::vector<Point> cand = lattice_ball_points(LatticeBall{Point(norm.dim(), 0), radius, nref});
  rep.candidates = static_cast<int64_t>(cand.size());

  std::vector<Point> chosen;
  for (const Point& p : cand) {
    bool ok = true;
    for (const Point& q : chosen) {
      if (norm.cmp(point_sub(p, q), sep) < 0) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back(p);
  }
  rep.greedy = static_cast<int64_t>(chosen.size());

  // Disjoint open half-separation balls within B_{radius + sep/2}.
  Rat half = sep / 2;
  Int half_ball = ball_point_count(norm, half);
  Int on_sphere = Int(static_cast<long>(exact_sphere_points(Point(norm.dim(), 0), half, norm).size()));
  Int open_half = half_ball - on_sphere;
  if (open_half > 0) {
    rep.volume_upper_bound = ball_point_count(norm, radius + half) / open_half;
  } else {
    rep.volume_upper_bound = Int(static_cast<long>(cand.size()));
  }

  if (rep.candidates <= exact_candidate_limit) {
    rep.exact = exact_packing_bb(cand, norm, sep, rep.greedy);
    rep.coarse_warning = (*rep.exact != rep.greedy);
  }
  return rep;
}

CoarseDimReport coarse_dim_bound(const NormSpec& norm, const Rat& R0,
                                 const ThresholdScanParams& scan_params, const Rat& grid_step) {
  CoarseDimReport rep;
  rep.scan = estimate_witness_threshold(norm, R0, scan_params);
  rep.k1 = rep.scan.k_star;
  rep.packing = packing_number_b2(norm, R0, grid_step);
  rep.k = rep.k1 * rep.packing.k2();
  rep.provenance =
      "k1: empirical boundary-intersection threshold (" + std::to_string(scan_params.trials) +
      " trials per size, seed " + std::to_string(scan_params.seed) + "); k2: " +
      (rep.packing.exact ? std::string("exact") : std::string("greedy")) +
      " packing at grid step " + rat_to_string(grid_step);
  return rep;
}

// ---------------------------------------------------------------------------
// Onion fixture
// ---------------------------------------------------------------------------

std::pair<Stack, DiscreteMeasure> build_onion(const NormSpec& norm, const OnionParams& params) {
  if (params.centers.empty()) throw std::invalid_argument("build_onion: no centers");
  if (params.level_radii.empty()) throw std::invalid_argument("build_onion: no levels");
  if (params.eps <= 0 || params.eps >= 1) throw std::invalid_argument("build_onion: eps in (0,1)");
  for (size_t i = 0; i < params.level_radii.size(); ++i) {
    if (params.level_radii[i] < 1) throw std::invalid_argument("build_onion: radii must be >= 1");
    if (i > 0 && params.level_radii[i] < params.level_radii[i - 1] + 2) {
      throw std::invalid_argument("build_onion: radius gaps must be >= 2");
    }
  }
  // Shells of different centers must not interact.
  int64_t r_top = params.level_radii.back();
  for (size_t i = 0; i < params.centers.size(); ++i) {
    for (size_t j = i + 1; j < params.centers.size(); ++j) {
      if (norm.cmp(point_sub(params.centers[i], params.centers[j]), Rat(2 * (r_top + 1) + 1)) <= 0) {
        throw std::invalid_argument("build_onion: centers too close for disjoint onions");
      }
    }
  }

  NormRef nref = make_norm(norm);
  std::vector<std::pair<Point, Rat>> atoms;
  const Rat alpha = params.eps / (Rat(1) - params.eps);
  for (const Point& c : params.centers) {
    atoms.emplace_back(c, params.center_mass);
    Rat inside = params.center_mass;
    for (int64_t r : params.level_radii) {
      std::vector<Point> shell = annulus_points(c, Rat(r), Rat(1), norm);
      if (shell.empty()) throw std::logic_error("build_onion: empty shell");
      // shell mass 2*alpha*inside makes the fraction 2a/(1+2a) > eps, strictly
      Rat shell_mass = 2 * alpha * inside;
      Rat per_atom = shell_mass / Rat(static_cast<long>(shell.size()));
      for (const Point& p : shell) atoms.emplace_back(p, per_atom);
      inside += shell_mass;
    }
  }
  DiscreteMeasure mu = DiscreteMeasure::from_atoms(std::move(atoms));

  auto family = BallFamilySpec::norm_balls(nref);
  std::vector<Carpet> levels;
  for (int64_t r : params.level_radii) {
    std::vector<FamilyBall> balls;
    for (const Point& c : params.centers) balls.push_back({c, Rat(r)});
    levels.emplace_back(family, std::move(balls));
  }
  Stack stack(std::move(levels), params.growth, params.base_minrad);
  return {std::move(stack), std::move(mu)};
}

std::pair<Stack, DiscreteMeasure> build_uniform_thick_stack(const NormSpec& norm,
                                                            const UniformStackParams& params) {
  if (params.centers.empty()) throw std::invalid_argument("uniform stack: no centers");
  if (params.radius < 1 || params.height < 1) {
    throw std::invalid_argument("uniform stack: radius and height must be positive");
  }
  const int d = norm.dim();
  for (const Point& c : params.centers) {
    for (int64_t x : c) {
      if (x < -params.window || x > params.window) {
        throw std::invalid_argument("uniform stack: center outside window");
      }
    }
  }
  int64_t reach = params.window + params.radius + 1;
  std::vector<std::pair<Point, Rat>> atoms;
  Point p(d);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == d) {
      atoms.emplace_back(p, Rat(1));
      return;
    }
    for (int64_t c = -reach; c <= reach; ++c) {
      p[axis] = c;
      rec(axis + 1);
    }
  };
  rec(0);
  for (const Point& c : params.centers) atoms.emplace_back(c, params.center_extra);
  DiscreteMeasure mu = DiscreteMeasure::from_atoms(std::move(atoms));

  NormRef nref = make_norm(norm);
  auto family = BallFamilySpec::norm_balls(nref);
  std::vector<FamilyBall> balls;
  for (const Point& c : params.centers) balls.push_back({c, Rat(params.radius)});
  std::vector<Carpet> levels;
  for (int64_t h = 0; h < params.height; ++h) levels.emplace_back(family, balls);
  Stack stack(std::move(levels), StackGrowth::adjacent, Rat(params.radius));
  return {std::move(stack), std::move(mu)};
}

}  // namespace besicover
