#include <doctest.h>

#include "besicover/concentration.hpp"
#include "besicover/covering.hpp"
#include "helpers.hpp"

using namespace besicover;
using namespace besicover::testing;

namespace {

// Oracle separation check: all pairs, all points, no pruning.
bool oracle_separated(const BallFamilySpec& fam, const std::vector<FamilyBall>& balls,
                      const Rat& R) {
  for (size_t i = 0; i < balls.size(); ++i) {
    for (size_t j = i + 1; j < balls.size(); ++j) {
      auto a = fam.points(balls[i].center, balls[i].radius);
      auto b = fam.points(balls[j].center, balls[j].radius);
      for (const Point& x : a) {
        for (const Point& y : b) {
          if (fam.dist_norm().cmp(point_sub(x, y), R) < 0) return false;
        }
      }
    }
  }
  return true;
}

Rat family_min_radius(const std::vector<FamilyBall>& balls) {
  Rat m = balls.front().radius;
  for (const auto& b : balls) m = std::min(m, b.radius);
  return m;
}

std::vector<FamilyBall> staircase_cubes(int64_t K) {
  std::vector<FamilyBall> balls;
  for (int64_t i = 0; i <= K; ++i) balls.push_back({Point{-i, -(K - i)}, Rat(K)});
  return balls;
}

}  // namespace

TEST_CASE("is_incremental basics") {
  auto fam = BallFamilySpec::norm_balls(linf2());
  std::vector<FamilyBall> one = {{{0, 0}, Rat(3)}};
  CHECK(is_incremental(*fam, one));

  std::vector<FamilyBall> concentric = {{{0, 0}, Rat(5)}, {{0, 0}, Rat(3)}};
  CHECK_FALSE(is_incremental(*fam, concentric));

  std::vector<FamilyBall> increasing = {{{0, 0}, Rat(1)}, {{10, 0}, Rat(2)}};
  CHECK_FALSE(is_incremental(*fam, increasing));  // radii must not increase

  CHECK_THROWS_AS(is_incremental(*fam, std::span<const FamilyBall>{}), std::invalid_argument);

  NormRef a = linf2(), b = l1_2();
  std::vector<LatticeBall> mixed = {{{0, 0}, Rat(1), a}, {{5, 5}, Rat(1), b}};
  CHECK_THROWS_AS(is_incremental(mixed), std::invalid_argument);
}

TEST_CASE("staircase one-sided cubes are incremental with multiplicity K+1") {
  for (int64_t K : {4, 16, 64}) {
    auto cubes = BallFamilySpec::one_sided_cubes(2);
    auto balls = staircase_cubes(K);
    CHECK(is_incremental(*cubes, balls));
    // every cube contains the origin
    std::vector<Point> probe = {{0, 0}};
    CHECK(multiplicity(*cubes, balls, &probe) == K + 1);
    // and the default union scan agrees
    CHECK(multiplicity(*cubes, balls) == K + 1);
  }
}

TEST_CASE("incremental_select") {
  auto fam = BallFamilySpec::norm_balls(linf2());

  Carpet single(fam, {{{2, 3}, Rat(4)}});
  Carpet out = incremental_select(single);
  CHECK(out.size() == 1);

  Carpet nested(fam, {{{0, 0}, Rat(1)}, {{0, 0}, Rat(5)}, {{0, 0}, Rat(3)}});
  Carpet sel = incremental_select(nested);
  REQUIRE(sel.size() == 1);
  CHECK(sel.balls()[0].radius == Rat(5));

  // random carpets: output covers E and is incremental (re-checked directly)
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(derive_seed(99, seed));
    Carpet carpet = random_carpet(fam, {50, 20, 1, 8}, rng);
    Carpet inc = incremental_select(carpet);
    CHECK(is_incremental(*fam, inc.balls()));
    for (size_t i = 1; i < inc.balls().size(); ++i) {
      CHECK(inc.balls()[i].radius <= inc.balls()[i - 1].radius);
    }
    for (const Point& x : carpet.centers()) {
      bool covered = false;
      for (const FamilyBall& b : inc.balls()) {
        if (fam->contains(b.center, b.radius, x)) {
          covered = true;
          break;
        }
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("multiplicity basics") {
  auto fam = BallFamilySpec::norm_balls(linf2());
  CHECK(multiplicity(*fam, std::span<const FamilyBall>{}) == 0);

  std::vector<FamilyBall> disjoint = {{{0, 0}, Rat(1)}, {{10, 0}, Rat(1)}, {{0, 10}, Rat(2)}};
  CHECK(multiplicity(*fam, disjoint) == 1);
}

TEST_CASE("is_well_separated") {
  auto fam = BallFamilySpec::norm_balls(linf2());
  std::vector<FamilyBall> one = {{{0, 0}, Rat(2)}};
  CHECK(is_well_separated(*fam, one));

  std::vector<FamilyBall> two = {{{0, 0}, Rat(1)}, {{10, 0}, Rat(1)}};
  CHECK(is_well_separated(*fam, two));  // set distance 8 >= minrad 1

  std::vector<FamilyBall> touching = {{{0, 0}, Rat(2)}, {{5, 0}, Rat(2)}};
  // gap is exactly 1 < minrad 2
  CHECK_FALSE(is_well_separated(*fam, touching));
  CHECK(is_well_separated(*fam, touching, Rat(1)));
  CHECK(oracle_separated(*fam, touching, Rat(1)));
}

TEST_CASE("color_disjointify") {
  auto fam = BallFamilySpec::norm_balls(linf2());

  Carpet far(fam, {{{0, 0}, Rat(1)}, {{20, 0}, Rat(1)}, {{0, 20}, Rat(1)}});
  auto classes = color_disjointify(far, 4, 4);
  CHECK(classes.size() == 1);

  // identical radii, neither center inside the other ball, ball sets overlap
  Carpet overlapping(fam, {{{0, 0}, Rat(2)}, {{3, 0}, Rat(2)}});
  classes = color_disjointify(overlapping, 4, 4);
  CHECK(classes.size() == 2);

  // random carpets with certified constants: all three postconditions, with
  // the separation re-checked by the no-pruning oracle on a subsample
  auto cert = certify_besicovitch(fam, {40, 25, 1, 8}, 300, 2024);
  DoublingCertificate dc = certify_doubling(*fam->norm(), 32);
  int64_t chi = cert.C * dc.D * dc.D + 1;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(derive_seed(77, seed));
    Carpet carpet = random_carpet(fam, {40, 25, 1, 8}, rng);
    auto cls = color_disjointify(carpet, cert.C, dc.D);
    CHECK(static_cast<int64_t>(cls.size()) <= chi);
    std::vector<Point> covered;
    for (const auto& c : cls) {
      CHECK(is_well_separated(*fam, c));
      if (seed < 5) CHECK(oracle_separated(*fam, c, family_min_radius(c)));
      for (const FamilyBall& b : c) {
        for (const Point& x : carpet.centers()) {
          if (fam->contains(b.center, b.radius, x)) covered.push_back(x);
        }
      }
    }
    sort_unique(covered);
    CHECK(sorted_is_subset(carpet.centers(), covered));
  }
}

TEST_CASE("measure_disjointify captures a 1/chi fraction exactly") {
  auto fam = BallFamilySpec::norm_balls(linf2());

  // all mass on one center
  Carpet carpet(fam, {{{0, 0}, Rat(2)}, {{1, 1}, Rat(2)}, {{30, 30}, Rat(1)}});
  DiscreteMeasure one_atom = DiscreteMeasure::from_atoms({{{1, 1}, Rat(7)}});
  auto res = measure_disjointify(carpet, one_atom, 9);
  CHECK(res.captured == Rat(7));

  // uniform mass, two overlapping balls -> two classes, pigeonhole at 1/2
  Carpet pair(fam, {{{0, 0}, Rat(2)}, {{1, 0}, Rat(2)}});
  DiscreteMeasure uni = DiscreteMeasure::uniform_on(pair.centers());
  res = measure_disjointify(pair, uni, 2);
  CHECK(res.captured >= uni.total() / 2);

  // random measures: captured >= mu(E)/chi, exact rational comparison
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(derive_seed(31337, seed));
    Carpet rc = random_carpet(fam, {50, 20, 1, 8}, rng);
    std::vector<std::pair<Point, Rat>> atoms;
    for (const Point& x : rc.centers()) {
      atoms.emplace_back(x, Rat(static_cast<long>(rng.range(1, 100)), 7));
    }
    DiscreteMeasure mu = DiscreteMeasure::from_atoms(std::move(atoms));
    int64_t chi = 65;
    auto r = measure_disjointify(rc, mu, chi);
    CHECK(r.captured >= mu.total() / chi);
    CHECK(is_well_separated(*fam, r.balls));
    CHECK(mu.mass_of(r.covered_centers) == r.captured);
  }
}

TEST_CASE("frequency_bound_check") {
  auto fam = BallFamilySpec::norm_balls(linf2());
  Carpet carpet(fam, {{{0, 0}, Rat(2)}, {{3, 0}, Rat(2)}, {{0, 3}, Rat(1)}});
  std::vector<Point> E = carpet.centers();

  SUBCASE("A = B: low hypothesis needs t > 1, conclusion then holds") {
    auto rep_low_small = frequency_bound_check(carpet, E, E, Rat(1), 4, FreqDirection::low);
    CHECK_FALSE(rep_low_small.hypothesis_holds);  // ratios equal 1, not < 1
    auto rep = frequency_bound_check(carpet, E, E, Rat(3, 2), 4, FreqDirection::low);
    CHECK(rep.hypothesis_holds);
    REQUIRE(rep.conclusion_holds.has_value());
    CHECK(*rep.conclusion_holds);  // 1 < 4 * 3/2
  }

  SUBCASE("A, B must be subsets of E; B nonempty") {
    std::vector<Point> outside = {{100, 100}};
    CHECK_THROWS_AS(frequency_bound_check(carpet, outside, E, Rat(1), 4, FreqDirection::low),
                    std::invalid_argument);
    CHECK_THROWS_AS(frequency_bound_check(carpet, E, {}, Rat(1), 4, FreqDirection::low),
                    std::invalid_argument);
  }

  SUBCASE("staircase witness: high hypothesis holds, conclusion fails for small C") {
    const int64_t K = 4;
    auto cubes = BallFamilySpec::one_sided_cubes(2);
    auto balls = staircase_cubes(K);
    balls.push_back({Point{0, 0}, Rat(0)});  // cube at the origin, E gains {0}
    Carpet sc(cubes, balls);
    std::vector<Point> A = {{0, 0}};
    std::vector<Point> B;
    for (int64_t i = 0; i <= K; ++i) B.push_back({-i, -(K - i)});

    auto fail = frequency_bound_check(sc, A, B, Rat(1, 2), 2, FreqDirection::high);
    CHECK(fail.hypothesis_holds);  // every staircase cube: 1/1 > 1/2; origin cube: 1/0 = +inf
    REQUIRE(fail.conclusion_holds.has_value());
    CHECK_FALSE(*fail.conclusion_holds);  // 1/5 is not > (1/2)/2

    auto pass = frequency_bound_check(sc, A, B, Rat(1, 2), 3, FreqDirection::high);
    CHECK(pass.hypothesis_holds);
    REQUIRE(pass.conclusion_holds.has_value());
    CHECK(*pass.conclusion_holds);  // 1/5 > (1/2)/3
  }

  SUBCASE("random symmetric carpets with certified C: hypothesis implies conclusion") {
    auto cert = certify_besicovitch(fam, {30, 15, 1, 6}, 400, 5);
    for (uint64_t seed = 0; seed < 60; ++seed) {
      Rng rng(derive_seed(123, seed));
      Carpet rc = random_carpet(fam, {30, 15, 1, 6}, rng);
      std::vector<Point> B = rc.centers();
      std::vector<Point> A;
      for (const Point& x : rc.centers()) {
        if (rng.chance(1, 3)) A.push_back(x);
      }
      if (A.empty()) A.push_back(rc.centers().front());

      // choose t just above the worst per-ball ratio so the low hypothesis holds
      Rat worst(0);
      for (const FamilyBall& fb : rc.balls()) {
        int64_t a = 0, b = 0;
        for (const Point& x : A) {
          if (fam->contains(fb.center, fb.radius, x)) ++a;
        }
        for (const Point& x : B) {
          if (fam->contains(fb.center, fb.radius, x)) ++b;
        }
        REQUIRE(b > 0);
        Rat ratio = Rat(a) / Rat(b);
        if (ratio > worst) worst = ratio;
      }
      Rat t = worst + Rat(1, 100);
      auto rep = frequency_bound_check(rc, A, B, t, cert.C, FreqDirection::low);
      CHECK(rep.hypothesis_holds);
      REQUIRE(rep.conclusion_holds.has_value());
      CHECK(*rep.conclusion_holds);
    }
  }
}

TEST_CASE("stack validation") {
  auto fam = BallFamilySpec::norm_balls(linf2());
  std::vector<Point> F = {{0, 0}, {9, 0}};
  auto level = [&](long r) {
    return Carpet(fam, {{{0, 0}, Rat(r)}, {{9, 0}, Rat(r)}});
  };
  CHECK_NOTHROW(Stack({level(2), level(2), level(3)}, StackGrowth::adjacent, Rat(2)));
  CHECK_THROWS_AS(Stack({level(2), level(1)}, StackGrowth::adjacent, Rat(2)),
                  std::invalid_argument);
  CHECK_NOTHROW(Stack({level(2), level(4), level(16)}, StackGrowth::squared, Rat(2)));
  CHECK_THROWS_AS(Stack({level(2), level(3)}, StackGrowth::squared, Rat(2)),
                  std::invalid_argument);
  // height 0 needs explicit centers
  CHECK_THROWS_AS(Stack({}, StackGrowth::adjacent, Rat(2)), std::invalid_argument);
  CHECK_NOTHROW(Stack({}, StackGrowth::adjacent, Rat(2), F));
  // mismatched center sets across levels
  Carpet other(fam, {{{0, 0}, Rat(2)}, {{8, 0}, Rat(2)}});
  CHECK_THROWS_AS(Stack({level(2), other}, StackGrowth::adjacent, Rat(2)),
                  std::invalid_argument);
}

TEST_CASE("sphere_exhaustion on a one-dimensional uniform stack") {
  NormSpec norm = NormSpec::linf(1);
  std::vector<Point> centers;
  for (int64_t x = 0; x <= 20; ++x) centers.push_back({x});
  UniformStackParams up;
  up.centers = centers;
  up.radius = 2;
  up.height = 24;
  up.window = 20;
  up.center_extra = Rat(1, 2);
  auto [stack, mu] = build_uniform_thick_stack(norm, up);

  // every ball carries > 1/2 of its B_{r+1} mass on the unit boundary (the
  // interior case is 6/10.5; edges are 5/9, 10/19, 11/20), and
  // mu(F) = 31.5 > mu(X)/2 = 28.75, so eps = delta = 1/2 with chi = 3 gives
  // required height 2*3/(1/4) = 24 == the stack height.
  Rat eps(1, 2), delta(1, 2);
  int64_t chi = 3;
  REQUIRE(Rat(static_cast<long>(stack.height())) >= Rat(2 * chi) / (eps * delta));
  REQUIRE(mu.mass_of(stack.centers()) > delta * mu.total());

  auto res = sphere_exhaustion(stack, mu, stack.centers(), eps, delta, chi);
  CHECK(res.k >= 1);
  CHECK(res.k <= static_cast<int64_t>(stack.height()) + 1);

  // (b) recount the capture independently: x is captured iff it lies in the
  // 2r-thick annulus of some selected ball
  Rat f_mass = mu.mass_of(stack.centers());
  Rat recount(0);
  for (const Point& x : stack.centers()) {
    bool hit = false;
    for (const FamilyBall& b : res.V) {
      Point diff = point_sub(x, b.center);
      if (norm.cmp(diff, b.radius + 2 * res.r_used) <= 0 &&
          norm.cmp(diff, b.radius - 2 * res.r_used) > 0) {
        hit = true;
        break;
      }
    }
    if (hit) recount += mu.mass(x);
  }
  CHECK(recount == res.captured);
  CHECK(recount > f_mass / 2);

  // (a) the exact spheres of V are well-separated
  CHECK(spheres_well_separated(norm, res.V));
}

TEST_CASE("sphere_exhaustion rejects violated preconditions") {
  NormSpec norm = NormSpec::linf(1);
  std::vector<Point> centers;
  for (int64_t x = 0; x <= 20; ++x) centers.push_back({x});
  UniformStackParams up;
  up.centers = centers;
  up.radius = 2;
  up.height = 24;
  up.window = 20;
  up.center_extra = Rat(1, 2);
  auto [stack, mu] = build_uniform_thick_stack(norm, up);

  // stack too short for these parameters
  CHECK_THROWS_AS(sphere_exhaustion(stack, mu, stack.centers(), Rat(1, 2), Rat(1, 4), 4),
                  std::invalid_argument);
  // mu(F) <= delta mu(X)
  CHECK_THROWS_AS(sphere_exhaustion(stack, mu, stack.centers(), Rat(1, 2), Rat(99, 100), 3),
                  std::invalid_argument);
  // eps too demanding: balls are not 9/10-thick (height fine: ceil(2/(9/20)) = 5)
  CHECK_THROWS_AS(sphere_exhaustion(stack, mu, stack.centers(), Rat(9, 10), Rat(1, 2), 1),
                  ExhaustionOverrunError);
}
