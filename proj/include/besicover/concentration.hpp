#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "besicover/covering.hpp"
#include "besicover/geometry.hpp"
#include "besicover/measure.hpp"
#include "besicover/rng.hpp"

namespace besicover {

struct UndefinedFractionError : std::runtime_error {
  explicit UndefinedFractionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Constant budgets of the concentration theorem, exact in (k, chi, eps, delta).
struct BudgetParams {
  int64_t k = 0;
  int64_t chi = 1;
  Rat eps;
  Rat delta;

  BudgetParams(int64_t k_, int64_t chi_, Rat eps_, Rat delta_);
};

// ceil(200*chi^2 / (eps^2 delta^3))^k * 1000^(k^2); the base is rounded
// outward to an integer before powering, so the result only grows.
Int budget_q(const BudgetParams& p);

// Q(0) = 1; Q(k) = ceil(2chi/(eps*delta)) * (1 + ceil(64chi/(eps*delta^2)))
//               * (1 + Q(k-1, chi, eps/2, delta/8)).
Int budget_Q(const BudgetParams& p);

// Mass fraction of the 1-thickened ball carried by its unit boundary:
// mu(∂₁B) / mu(B_{r+1}), an exact rational in [0,1]. Requires r >= 1 and a
// positive denominator.
Rat thickness_fraction(const DiscreteMeasure& mu, const LatticeBall& ball);

struct ThickCenterMassResult {
  std::vector<Point> f_thick;  // centers whose stack balls are all eps-thick
  Rat fraction;                // mu(F_thick) / mu(X), exact
  Rat f_thick_mass;
};

// Centers all of whose stack balls are eps-thick (zero-mass balls count as
// thick: the hypothesis is vacuous there). Requires squared growth.
ThickCenterMassResult thick_center_mass(const DiscreteMeasure& mu, const Stack& stack,
                                        const Rat& eps);

enum class BoundaryKind {
  exact_sphere,  // { ‖u-x‖ = r }: the thinnest boundary on a scaled grid
  unit_shell     // B_r \ B_{r-1}: one grid step, for unit-lattice measures
};

struct BoundaryScanRow {
  Point x;
  Rat r;
  Rat boundary_mass;
  Rat ball_mass;
  Rat ratio;
};

struct BoundaryScanResult {
  std::vector<BoundaryScanRow> rows;   // samples sorted lexicographically, schedule order
  std::vector<Point> exceeding;        // samples whose whole series stays >= eps
  Rat exceed_fraction;                 // mu(exceeding) / mu(samples)
};

// Per-point series mu(∂B_r(x)) / mu(B_r(x)) over a strictly decreasing radius
// schedule, plus the mass fraction of sampled points whose entire series
// stays >= eps.
BoundaryScanResult boundary_ratio_scan(const DiscreteMeasure& mu, const NormSpec& norm,
                                       std::vector<Point> samples, const std::vector<Rat>& radii,
                                       const Rat& eps, BoundaryKind kind);

// Uniform unit mass on {0,...,2^m}^d, the integer rescaling of the dyadic
// grid 2^{-m} Z^d ∩ [0,1]^d.
DiscreteMeasure dyadic_uniform_measure(int m, int d);

// Intersection emptiness of unit-thick boundaries under the incremental-type
// hypothesis (non-increasing radii >= R0, centers outside earlier shrunk
// balls). Hypothesis violations are reported distinctly.
struct WitnessCheckResult {
  enum class Status { hypothesis_violated, empty, nonempty };
  Status status = Status::empty;
  std::string violation;          // set when hypothesis_violated
  std::optional<Point> witness;   // set when nonempty
};

WitnessCheckResult coarse_dim_witness_check(std::span<const LatticeBall> balls, const Rat& R0);

struct ThresholdScanParams {
  int64_t trials = 200;
  int64_t k_max = 12;
  uint64_t seed = 1;
  int64_t r_hi_factor = 4;  // radii drawn from [R0, r_hi_factor*R0]
};

struct ThresholdScan {
  int64_t k_star = 2;  // least k beyond every observed nonempty intersection
  std::vector<std::pair<int64_t, int64_t>> nonempty_per_k;  // (k, count)
  int64_t generator_failures = 0;
};

// Adversarial randomized scan for the least k at which every sampled
// hypothesis-satisfying configuration has empty boundary intersection.
ThresholdScan estimate_witness_threshold(const NormSpec& norm, const Rat& R0,
                                         const ThresholdScanParams& params);

struct PackingReport {
  int64_t greedy = 0;
  std::optional<int64_t> exact;   // branch-and-bound result when feasible
  Int volume_upper_bound;         // disjoint-ball counting bound
  Rat grid_step;
  Rat separation;
  int64_t candidates = 0;
  bool coarse_warning = false;    // greedy and exact disagree
  int64_t k2() const { return exact ? *exact : greedy; }
};

// Size of a maximal (1 - 1/R0)-separated set in B_2(0), computed on a lattice
// discretization with the given step.
PackingReport packing_number_b2(const NormSpec& norm, const Rat& R0, const Rat& grid_step,
                                int64_t exact_candidate_limit = 400);

struct CoarseDimReport {
  int64_t k = 0;   // k1 * k2
  int64_t k1 = 0;  // empirical witness threshold
  PackingReport packing;
  ThresholdScan scan;
  std::string provenance;
};

CoarseDimReport coarse_dim_bound(const NormSpec& norm, const Rat& R0,
                                 const ThresholdScanParams& scan_params, const Rat& grid_step);

// Onion test fixture: concentric unit-thick shells at the stack radii, shell
// masses tuned so every stack ball is exactly eps-thick with margin. Returns
// the stack and the measure together.
struct OnionParams {
  std::vector<Point> centers;
  std::vector<int64_t> level_radii;  // strictly increasing, gaps >= 2
  StackGrowth growth = StackGrowth::adjacent;
  Rat base_minrad = 0;
  Rat eps;               // in (0,1): every level ball gets fraction > eps
  Rat center_mass = 1;
};

std::pair<Stack, DiscreteMeasure> build_onion(const NormSpec& norm, const OnionParams& params);

// Exhaustion test fixture: `height` identical levels of radius-`radius`
// balls over the given centers, with uniform unit mass on the window
// inflated past every ball plus `center_extra` mass on each center. Every
// ball is boundary-heavy, so the sphere-exhaustion hypotheses are
// satisfiable at nontrivial heights.
struct UniformStackParams {
  std::vector<Point> centers;
  int64_t radius = 2;
  int64_t height = 8;
  int64_t window = 12;        // mass lives on [-window-radius-1, window+radius+1]^d
  Rat center_extra = 10;
};

std::pair<Stack, DiscreteMeasure> build_uniform_thick_stack(const NormSpec& norm,
                                                            const UniformStackParams& params);

}  // namespace besicover
