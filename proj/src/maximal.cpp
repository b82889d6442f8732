#include "besicover/maximal.hpp"

#include <algorithm>

namespace besicover {

int64_t count_in_window(const BallFamilySpec& family, const Point& g, int64_t n,
                        const std::vector<Point>& S) {
  const Point zero(family.dim(), 0);
  int64_t c = 0;
  for (const Point& s : S) {
    auto e = family.entry_index(zero, point_sub(g, s));
    if (e && *e <= n) ++c;
  }
  return c;
}

namespace {

int64_t family_coord_bound(const BallFamilySpec& family, int64_t n) {
  if (family.kind() == FamilyKind::one_sided_cube) return n;
  int64_t best = 0;
  for (int i = 0; i < family.dim(); ++i) {
    best = std::max(best, rat_floor_i64(Rat(n) * family.dist_norm().axis_bound(i)));
  }
  return best;
}

// Per-n increments of sum_{u in B_n} f(T^{-u} omega) * mu(T^{-u} omega),
// bucketed at each u's entry index. Dividing by mu(omega) is skipped: it
// cancels in every ratio taken here.
std::vector<Rat> sweep_sums(const Action& a, const Observable& f, const BallFamilySpec& family,
                            int64_t n_max, const Point& omega) {
  const Point zero(family.dim(), 0);
  int64_t bound = family_coord_bound(family, n_max);
  auto h = a.freeness_horizon();
  if (h && bound >= *h) {
    throw HorizonError("window scan reaches beyond the freeness horizon");
  }
  std::vector<Rat> bucket(static_cast<size_t>(n_max) + 1, Rat(0));
  std::vector<Point> shifts;
  for (const auto& [v, val] : f.atoms()) {
    shifts.clear();
    a.preimage_shifts(omega, v, bound, shifts);
    for (const Point& u : shifts) {
      auto e = family.entry_index(zero, u);
      if (e && *e <= n_max) bucket[static_cast<size_t>(*e)] += val * a.mass(v);
    }
  }
  for (size_t i = 1; i < bucket.size(); ++i) bucket[i] += bucket[i - 1];
  return bucket;
}

}  // namespace

MaximalRatioResult maximal_ratio(const Action& a, const Observable& f, const Observable& g,
                                 const BallFamilySpec& family, int64_t n_max, const Point& omega) {
  if (n_max < 0) throw std::invalid_argument("maximal_ratio: n_max must be nonnegative");
  std::vector<Rat> fs = sweep_sums(a, f, family, n_max, omega);
  std::vector<Rat> gs = sweep_sums(a, g, family, n_max, omega);
  bool found = false;
  MaximalRatioResult res;
  for (int64_t n = 0; n <= n_max; ++n) {
    if (gs[static_cast<size_t>(n)] == 0) continue;
    Rat r = fs[static_cast<size_t>(n)] / gs[static_cast<size_t>(n)];
    if (!found || r > res.value) {
      res.value = r;
      res.attained_n = n;
      found = true;
    }
  }
  if (!found) {
    throw ZeroDenominatorError("maximal_ratio: every denominator vanishes at " +
                               point_to_string(omega));
  }
  return res;
}

Rat violation_score(const Action& a, const Observable& f, const Observable& h, const Rat& eps,
                    int64_t n_max, const BallFamilySpec& family) {
  if (!f.nonnegative() || !h.nonnegative()) {
    throw std::invalid_argument("violation_score needs f, h >= 0");
  }
  Rat int_f = a.integral(f);
  if (int_f <= 0) throw std::invalid_argument("violation_score needs integral(f) > 0");
  Rat num(0);
  for (const auto& [omega, hval] : h.atoms()) {
    MaximalRatioResult mr = maximal_ratio(a, f, h, family, n_max, omega);
    if (mr.value > eps) num += hval * a.mass(omega);
  }
  return num / int_f;
}

// ---------------------------------------------------------------------------
// Witness packages
// ---------------------------------------------------------------------------

int64_t WitnessPackage::radius_of(const Point& g) const {
  auto it = std::lower_bound(radius_assignment.begin(), radius_assignment.end(), g,
                             [](const auto& pv, const Point& q) { return pv.first < q; });
  if (it == radius_assignment.end() || it->first != g) {
    throw std::invalid_argument("witness package: no radius assigned at " + point_to_string(g));
  }
  return it->second;
}

int64_t WitnessPackage::max_radius() const {
  int64_t m = 0;
  for (const auto& [p, n] : radius_assignment) m = std::max(m, n);
  return m;
}

WitnessPackage staircase_witness(int64_t K, const Rat& M) {
  if (M <= 0) throw std::invalid_argument("staircase_witness: M must be positive");
  Int need = rat_ceil(2 * M);
  if (Int(static_cast<long>(K)) < need) {
    throw std::invalid_argument("staircase_witness: K = " + std::to_string(K) +
                                " is below ceil(2M) = " + need.get_str() +
                                ", so |U|/|V| < t/M fails");
  }
  WitnessPackage w;
  w.family = BallFamilySpec::one_sided_cubes(2);
  w.t = Rat(1, 2);
  w.declared_M = M;
  w.U = {Point{0, 0}};
  for (int64_t i = 0; i <= K; ++i) w.V.push_back(Point{i, K - i});
  sort_unique(w.V);
  w.radius_assignment.emplace_back(Point{0, 0}, 0);
  for (const Point& g : w.V) w.radius_assignment.emplace_back(g, K);
  std::sort(w.radius_assignment.begin(), w.radius_assignment.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return w;
}

WitnessValidationReport witness_validate(const WitnessPackage& w, const Rat& M) {
  if (M <= 0) throw std::invalid_argument("witness_validate: M must be positive");
  WitnessValidationReport rep;
  if (w.U.empty() || w.V.empty()) {
    rep.first_failure = "U and V must be nonempty";
    return rep;
  }

  std::vector<Point> all = w.U;
  all.insert(all.end(), w.V.begin(), w.V.end());
  sort_unique(all);

  rep.package_inv1 = true;
  for (const Point& g : all) {
    WitnessValidationReport::PerPoint pp;
    pp.g = g;
    pp.n = w.radius_of(g);
    pp.u_count = count_in_window(*w.family, g, pp.n, w.U);
    pp.v_count = count_in_window(*w.family, g, pp.n, w.V);
    // v_count = 0 reads as ratio +infinity
    pp.ok = pp.v_count == 0 || Rat(pp.u_count) > w.t * Rat(pp.v_count);
    if (!pp.ok && rep.package_inv1) {
      rep.package_inv1 = false;
      rep.first_failure = "window ratio at " + point_to_string(g) + " is " +
                          std::to_string(pp.u_count) + "/" + std::to_string(pp.v_count) +
                          " which is not > t = " + rat_to_string(w.t);
    }
    rep.per_point.push_back(std::move(pp));
  }

  rep.ratio_uv = Rat(static_cast<long>(w.U.size())) / Rat(static_cast<long>(w.V.size()));
  rep.bound_tm = w.t / M;
  rep.package_inv2 = rep.ratio_uv < rep.bound_tm;
  if (!rep.package_inv2 && rep.first_failure.empty()) {
    rep.first_failure = "|U|/|V| = " + rat_to_string(rep.ratio_uv) +
                        " is not < t/M = " + rat_to_string(rep.bound_tm);
  }

  // Translation-action consequence with f = 1_U, h = 1_V on counting measure.
  ActionRef act = make_counting_translation(w.family->dim());
  Observable f = Observable::indicator(w.U);
  Observable h = Observable::indicator(w.V);
  int64_t n_max = w.max_radius();
  Rat superlevel(0);
  for (const Point& omega : w.V) {
    MaximalRatioResult mr = maximal_ratio(*act, f, h, *w.family, n_max, omega);
    if (mr.value > w.t) superlevel += 1;  // h = 1 and mu = 1 on atoms of V
  }
  rep.mu_h_superlevel = superlevel;
  rep.card_v = Rat(static_cast<long>(w.V.size()));
  rep.rhs_mu = (M / w.t) * act->integral(f);
  rep.consequence_holds = rep.mu_h_superlevel >= rep.card_v && rep.card_v > rep.rhs_mu;
  if (!rep.consequence_holds && rep.first_failure.empty()) {
    if (rep.mu_h_superlevel < rep.card_v) {
      rep.first_failure = "mu_h{sup R_n > t} = " + rat_to_string(rep.mu_h_superlevel) +
                          " fell below |V| = " + rat_to_string(rep.card_v);
    } else {
      rep.first_failure = "|V| = " + rat_to_string(rep.card_v) +
                          " is not > (M/t)*int f = " + rat_to_string(rep.rhs_mu);
    }
  }

  rep.ok = rep.package_inv1 && rep.package_inv2 && rep.consequence_holds;
  return rep;
}

std::optional<WitnessPackage> witness_search(const FamilyRef& family,
                                             const WitnessSearchParams& params) {
  if (params.v_size < 1 || params.window < 1 || params.trials < 1) {
    throw std::invalid_argument("witness_search: bad parameters");
  }
  const int d = family->dim();
  const Point zero(d, 0);
  for (int64_t trial = 0; trial < params.trials; ++trial) {
    Rng rng(derive_seed(params.seed, static_cast<uint64_t>(trial)));
    WitnessPackage w;
    w.family = family;
    w.t = params.t;
    w.declared_M = params.M;
    w.U = {zero};
    while (static_cast<int64_t>(w.V.size()) < params.v_size) {
      Point p(d);
      for (int i = 0; i < d; ++i) p[i] = rng.range(0, params.window);
      if (p != zero) w.V.push_back(std::move(p));
    }
    sort_unique(w.V);
    if (Rat(static_cast<long>(w.U.size())) / Rat(static_cast<long>(w.V.size())) >=
        params.t / params.M) {
      continue;  // duplicates shrank V below the mass gap
    }
    std::vector<Point> all = w.U;
    all.insert(all.end(), w.V.begin(), w.V.end());
    sort_unique(all);
    bool feasible = true;
    for (const Point& g : all) {
      std::optional<int64_t> pick;
      for (int64_t n = 0; n <= params.n_cap && !pick; ++n) {
        int64_t uc = count_in_window(*family, g, n, w.U);
        int64_t vc = count_in_window(*family, g, n, w.V);
        if (vc == 0 || Rat(uc) > params.t * Rat(vc)) pick = n;
      }
      if (!pick) {
        feasible = false;
        break;
      }
      w.radius_assignment.emplace_back(g, *pick);
    }
    if (!feasible) continue;
    std::sort(w.radius_assignment.begin(), w.radius_assignment.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (witness_validate(w, params.M).ok) return w;
  }
  return std::nullopt;
}

}  // namespace besicover
