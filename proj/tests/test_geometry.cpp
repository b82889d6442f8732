#include <doctest.h>

#include "besicover/geometry.hpp"
#include "helpers.hpp"

using namespace besicover;
using namespace besicover::testing;

TEST_CASE("norm_eval on the built-in norms") {
  NormSpec linf = NormSpec::linf(2);
  NormSpec l1 = NormSpec::l1(2);
  NormSpec l2 = NormSpec::l2(2);

  auto v = norm_eval(linf, {3, -4});
  CHECK(v.v == Rat(4));
  CHECK_FALSE(v.squared);

  CHECK(norm_eval(l1, {0, 0}).v == 0);

  auto s = norm_eval(l2, {3, 4});
  CHECK(s.v == Rat(25));  // squared value: the norm is 5
  CHECK(s.squared);

  CHECK_THROWS_AS(norm_eval(l1, {1, 2, 3}), DimensionMismatchError);
}

TEST_CASE("norm axioms on sampled vectors") {
  std::vector<NormSpec> norms;
  norms.push_back(NormSpec::l1(2));
  norms.push_back(NormSpec::l2(2));
  norms.push_back(NormSpec::linf(2));
  norms.push_back(NormSpec::weighted_sup({Rat(1), Rat(1, 2)}));
  norms.push_back(NormSpec::polyhedral({{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}}));

  Rng rng(7);
  for (const NormSpec& n : norms) {
    for (int trial = 0; trial < 200; ++trial) {
      Point a{rng.range(-20, 20), rng.range(-20, 20)};
      Point b{rng.range(-20, 20), rng.range(-20, 20)};
      // definiteness and symmetry
      CHECK((n.eval(a).v == 0) == (a == Point{0, 0}));
      CHECK(n.eval(a).v == n.eval(point_neg(a)).v);
      // triangle, via integer-ceiling comparisons exact for each kind:
      // ‖a+b‖ <= ‖a‖ + ‖b‖. For l2 compare squared values of both sides
      // using the exact cross-term bound: (‖a‖+‖b‖)^2 >= ‖a+b‖^2 iff
      // 2‖a‖‖b‖ >= ‖a+b‖^2 − ‖a‖² − ‖b‖², squaring once more when needed.
      auto va = n.eval(a), vb = n.eval(b), vs = n.eval(point_add(a, b));
      if (!va.squared) {
        CHECK(vs.v <= va.v + vb.v);
      } else {
        Rat rhs = vs.v - va.v - vb.v;  // must be <= 2*sqrt(va)*sqrt(vb)
        if (rhs <= 0) {
          CHECK(true);
        } else {
          CHECK(rhs * rhs <= 4 * va.v * vb.v);
        }
      }
    }
  }
}

TEST_CASE("lattice ball points: pinned counts and oracle cross-check") {
  CHECK(lattice_ball_points({{0, 0}, Rat(1), linf2()}).size() == 9);
  CHECK(lattice_ball_points({{0, 0}, Rat(1), l1_2()}).size() == 5);
  // direct enumeration of x^2 + y^2 <= 4
  CHECK(lattice_ball_points({{0, 0}, Rat(2), l2_2()}).size() == 13);

  std::vector<NormSpec> norms;
  norms.push_back(NormSpec::l1(2));
  norms.push_back(NormSpec::l2(2));
  norms.push_back(NormSpec::linf(2));
  norms.push_back(NormSpec::weighted_sup({Rat(1), Rat(1, 2)}));
  norms.push_back(NormSpec::polyhedral({{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}}));
  norms.push_back(NormSpec::l2(3));

  for (const NormSpec& n : norms) {
    NormRef ref = make_norm(n);
    for (const Rat& r : {Rat(0), Rat(1), Rat(5, 2), Rat(4), Rat(13, 3)}) {
      Point c(n.dim(), 0);
      c[0] = 3;
      auto got = lattice_ball_points({c, r, ref});
      auto want = oracle_ball_points(n, c, r);
      CHECK(got == want);
      CHECK(Int(static_cast<long>(got.size())) == ball_point_count(n, r));
    }
  }
}

TEST_CASE("weighted-sup and polyhedral ball shapes") {
  // weights (1, 1/2): box |x| <= r, |y| <= 2r
  NormSpec w = NormSpec::weighted_sup({Rat(1), Rat(1, 2)});
  CHECK(ball_point_count(w, Rat(1)) == 15);  // 3 * 5

  // max(|x+y|, |x-y|) = |x| + |y|: this polyhedral norm is l1
  NormSpec poly = NormSpec::polyhedral({{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}});
  NormSpec l1 = NormSpec::l1(2);
  for (long r = 0; r <= 6; ++r) {
    CHECK(ball_point_count(poly, Rat(r)) == ball_point_count(l1, Rat(r)));
  }

  CHECK_THROWS_AS(NormSpec::polyhedral({{Rat(1), Rat(0)}}), std::invalid_argument);
  CHECK_THROWS_AS(NormSpec::weighted_sup({Rat(1), Rat(0)}), std::invalid_argument);
}

TEST_CASE("thick boundary points") {
  // |B_3| - |B_1| = 49 - 9
  CHECK(thick_boundary_points(ThickSphere({0, 0}, Rat(2), Rat(1), linf2())).size() == 40);
  // |B_2| - |B_0| = 13 - 1
  CHECK(thick_boundary_points(ThickSphere({0, 0}, Rat(1), Rat(1), l1_2())).size() == 12);

  // r = t: the inner ball degenerates to the center alone
  auto pts = thick_boundary_points(ThickSphere({0, 0}, Rat(1), Rat(1), l2_2()));
  auto ball = lattice_ball_points({{0, 0}, Rat(2), l2_2()});
  CHECK(pts.size() == ball.size() - 1);
  CHECK_FALSE(sorted_contains(pts, {0, 0}));

  CHECK_THROWS_AS(ThickSphere({0, 0}, Rat(1), Rat(2), linf2()), std::invalid_argument);
  CHECK_THROWS_AS(ThickSphere({0, 0}, Rat(1), Rat(0), linf2()), std::invalid_argument);
}

TEST_CASE("exact sphere points") {
  NormSpec l2 = NormSpec::l2(2);
  // r = 5 on the integer circle: (±5,0),(0,±5),(±3,±4),(±4,±3)
  CHECK(exact_sphere_points({0, 0}, Rat(5), l2).size() == 12);
  // radius sqrt(3) is never attained
  CHECK(exact_sphere_points({0, 0}, Rat(7, 4), l2).empty());
  NormSpec linf = NormSpec::linf(2);
  CHECK(exact_sphere_points({0, 0}, Rat(3), linf).size() == 24);  // 8r
}

TEST_CASE("doubling ratios") {
  CHECK(doubling_ratio(NormSpec::linf(1), Rat(1)) == Rat(5, 3));
  CHECK(doubling_ratio(NormSpec::linf(2), Rat(2)) == Rat(81, 25));
  CHECK_THROWS_AS(doubling_ratio(NormSpec::linf(1), Rat(1, 2)), std::invalid_argument);

  for (const Rat& r : {Rat(1), Rat(3), Rat(7, 2)}) {
    CHECK(doubling_ratio(NormSpec::l2(2), r) >= 1);
  }
}

TEST_CASE("translation invariance, nesting, boundary partition") {
  Rng rng(11);
  NormRef norms[] = {l1_2(), l2_2(), linf2()};
  for (const NormRef& n : norms) {
    for (int trial = 0; trial < 20; ++trial) {
      Point x{rng.range(-30, 30), rng.range(-30, 30)};
      Rat r(rng.range(0, 5));
      auto at_x = lattice_ball_points({x, r, n});
      auto at_0 = lattice_ball_points({{0, 0}, r, n});
      REQUIRE(at_x.size() == at_0.size());
      for (size_t i = 0; i < at_0.size(); ++i) CHECK(at_x[i] == point_add(x, at_0[i]));

      Rat r2 = r + Rat(rng.range(0, 3));
      auto bigger = lattice_ball_points({x, r2, n});
      CHECK(sorted_is_subset(at_x, bigger));
    }
    // partition: t < t' <= r implies the t-boundary sits inside the t'-one
    auto thin = thick_boundary_points(ThickSphere({3, -2}, Rat(4), Rat(1), n));
    auto thick = thick_boundary_points(ThickSphere({3, -2}, Rat(4), Rat(3), n));
    CHECK(sorted_is_subset(thin, thick));
  }
}

TEST_CASE("doubling certificate: max ratio over r <= 64 stays below 4^d") {
  for (int d = 1; d <= 3; ++d) {
    for (int kind = 0; kind < 3; ++kind) {
      NormSpec n = kind == 0 ? NormSpec::l1(d) : kind == 1 ? NormSpec::l2(d) : NormSpec::linf(d);
      DoublingCertificate cert = certify_doubling(n, 64);
      CAPTURE(n.describe());
      CAPTURE(d);
      CAPTURE(rat_to_string(cert.max_ratio));
      CHECK(cert.max_ratio <= int_pow(Int(4), d));
      CHECK(cert.D >= 1);
      CHECK(cert.max_ratio >= 1);
    }
  }
}

TEST_CASE("resource cap guards enumeration") {
  CapGuard guard;
  set_point_cap(100);
  CHECK_THROWS_AS(lattice_ball_points({{0, 0}, Rat(50), linf2()}), ResourceCapError);
  set_point_cap(1000000);
  CHECK_NOTHROW(lattice_ball_points({{0, 0}, Rat(5), linf2()}));
  CHECK_THROWS_AS(set_point_cap(0), std::invalid_argument);
}

TEST_CASE("ball tester agrees with rational membership far outside the box") {
  NormSpec l2 = NormSpec::l2(2);
  BallTester t(l2, {0, 0}, Rat(7, 2));
  CHECK(t.contains({3, 1}));        // 9+1 = 10 <= 49/4
  CHECK_FALSE(t.contains({3, 2}));  // 13 > 49/4
  CHECK_FALSE(t.contains({1000000, -1000000}));
}
