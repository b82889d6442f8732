#pragma once

#include <optional>
#include <string>
#include <vector>

#include "besicover/covering.hpp"
#include "besicover/dynamics.hpp"

namespace besicover {

// Window convention: the dual ball sum S_n f(g) = sum_{u in B_n} f(g - u)
// scans W_n(g) = g - B_n. Package membership counts use the same window, so
// the combinatorial invariants and the translation-action ratios agree
// number for number.
int64_t count_in_window(const BallFamilySpec& family, const Point& g, int64_t n,
                        const std::vector<Point>& S);

struct MaximalRatioResult {
  Rat value;
  int64_t attained_n = 0;  // least n attaining the supremum
};

// sup_{0 <= n <= n_max} R_n(f, g)(omega) over the family's sets; n with a
// vanishing denominator are skipped, and all-vanishing is reported.
MaximalRatioResult maximal_ratio(const Action& a, const Observable& f, const Observable& g,
                                 const BallFamilySpec& family, int64_t n_max, const Point& omega);

// C(f, h) = mu_h{ sup_{n <= n_max} R_n(f, h) > eps } / integral(f), exact,
// evaluated over supp h (where mu_h lives).
Rat violation_score(const Action& a, const Observable& f, const Observable& h, const Rat& eps,
                    int64_t n_max, const BallFamilySpec& family);

// A finite certificate that the ratio maximal inequality fails at level M:
// every g in U ∪ V sees a U-heavy window while |U|/|V| < t/M.
struct WitnessPackage {
  std::vector<Point> U, V;  // sorted unique
  Rat t;
  std::vector<std::pair<Point, int64_t>> radius_assignment;  // sorted by point, covers U ∪ V
  FamilyRef family;
  Rat declared_M;

  int64_t radius_of(const Point& g) const;
  int64_t max_radius() const;
};

// The one-sided-cube staircase in d = 2: U = {0}, V the diagonal
// {(i, K-i) : 0 <= i <= K}, each V-cube of size K sees exactly one V-point
// and the origin. Requires K >= ceil(2M).
WitnessPackage staircase_witness(int64_t K, const Rat& M);

struct WitnessValidationReport {
  bool ok = false;
  std::string first_failure;
  struct PerPoint {
    Point g;
    int64_t n = 0;
    int64_t u_count = 0;
    int64_t v_count = 0;
    bool ok = false;
  };
  std::vector<PerPoint> per_point;
  Rat ratio_uv;            // |U| / |V|
  Rat bound_tm;            // t / M
  bool package_inv1 = false;
  bool package_inv2 = false;
  Rat mu_h_superlevel;     // counting-translation mass of {sup R_n(1_U, 1_V) > t}
  Rat card_v;
  Rat rhs_mu;              // (M/t) * |U|
  bool consequence_holds = false;
};

// Verifies both package invariants exactly, then replays the translation
// action consequence: with f = 1_U, h = 1_V on counting measure,
// mu_h{sup_n R_n > t} >= |V| > (M/t) * integral(f).
WitnessValidationReport witness_validate(const WitnessPackage& w, const Rat& M);

// Bounded brute-force witness search (research utility). Samples candidate
// V-sets in a window and greedily assigns window sizes; every returned
// package passes witness_validate.
struct WitnessSearchParams {
  int64_t window = 6;
  int64_t v_size = 5;
  int64_t n_cap = 8;
  Rat t = Rat(1, 2);
  Rat M = Rat(1);
  int64_t trials = 2000;
  uint64_t seed = 1;
};

std::optional<WitnessPackage> witness_search(const FamilyRef& family,
                                             const WitnessSearchParams& params);

}  // namespace besicover
