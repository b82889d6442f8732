#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "besicover/geometry.hpp"
#include "besicover/measure.hpp"
#include "besicover/point.hpp"
#include "besicover/rng.hpp"

namespace besicover {

enum class FamilyKind { norm_ball, one_sided_cube };

// A rule producing nested averaging sets B_n: either the closed balls of a
// norm (symmetric) or the one-sided cubes Q_n = {0,...,n}^d, which are not
// symmetric and fail the Besicovitch property for d >= 2.
class BallFamilySpec {
 public:
  static std::shared_ptr<const BallFamilySpec> norm_balls(NormRef norm);
  static std::shared_ptr<const BallFamilySpec> one_sided_cubes(int d);

  FamilyKind kind() const { return kind_; }
  int dim() const { return d_; }
  bool symmetric() const { return kind_ == FamilyKind::norm_ball; }

  // Metric used for set distances: the norm itself, or l-infinity for cubes.
  const NormSpec& dist_norm() const { return *dist_norm_; }
  const NormSpec* norm() const { return kind_ == FamilyKind::norm_ball ? dist_norm_.get() : nullptr; }
  NormRef norm_ref() const { return kind_ == FamilyKind::norm_ball ? dist_norm_ : nullptr; }

  bool contains(const Point& center, const Rat& radius, const Point& u) const;
  std::vector<Point> points(const Point& center, const Rat& radius) const;

  // Least integer n >= 0 with u in B_n(center); nullopt if no n works.
  std::optional<int64_t> entry_index(const Point& center, const Point& u) const;

  // Radius of a dist_norm ball around `center` enclosing B_radius(center).
  Rat enclosing_radius(const Rat& radius) const { return radius; }

  void validate_radius(const Rat& radius) const;
  std::string describe() const;

 private:
  BallFamilySpec(FamilyKind k, NormRef n, int d) : kind_(k), d_(d), dist_norm_(std::move(n)) {}
  FamilyKind kind_;
  int d_;
  NormRef dist_norm_;
};

using FamilyRef = std::shared_ptr<const BallFamilySpec>;

struct FamilyBall {
  Point center;
  Rat radius;
};

// An ordered family of balls from one family; E is the set of centers.
// Every point of E centers at least one ball and every ball's center lies
// in E, both by construction.
class Carpet {
 public:
  Carpet(FamilyRef family, std::vector<FamilyBall> balls);

  const BallFamilySpec& family() const { return *family_; }
  FamilyRef family_ptr() const { return family_; }
  const std::vector<FamilyBall>& balls() const { return balls_; }
  const std::vector<Point>& centers() const { return centers_; }
  size_t size() const { return balls_.size(); }
  bool empty() const { return balls_.empty(); }
  Rat minrad() const;
  Rat maxrad() const;

 private:
  FamilyRef family_;
  std::vector<FamilyBall> balls_;
  std::vector<Point> centers_;
};

// True iff radii are non-increasing and each center lies outside the union
// of the preceding balls.
bool is_incremental(const BallFamilySpec& family, std::span<const FamilyBall> seq);

// Geometry-ball overload; rejects mixed norms.
bool is_incremental(std::span<const LatticeBall> seq);

// Greedy select-or-discard over the carpet sorted by non-increasing radius
// (ties keep input order). Output covers E and is incremental.
Carpet incremental_select(const Carpet& carpet);

// Max over probe points of how many balls contain the point. Defaults to
// scanning every point of the union (equivalently, the bounding box: points
// outside all balls count zero).
int64_t multiplicity(const BallFamilySpec& family, std::span<const FamilyBall> balls,
                     const std::vector<Point>* probe = nullptr);

// Pairwise set distance >= R (default R = minrad), exact with center-distance
// pruning. Distances are measured between lattice point sets.
bool is_well_separated(const BallFamilySpec& family, std::span<const FamilyBall> balls,
                       const std::optional<Rat>& R = std::nullopt);
bool is_well_separated(std::span<const ThickSphere> spheres, const std::optional<Rat>& R = std::nullopt);

// Sphere family with shared norm given as (center, radius) point-set spheres.
bool spheres_well_separated(const NormSpec& norm, std::span<const FamilyBall> spheres,
                            const std::optional<Rat>& R = std::nullopt);

// Raised by the coloring when no color fits within chi: the supplied C or D
// certificate was not valid for this carpet.
struct CoveringCertificateError : std::runtime_error {
  CoveringCertificateError(std::string msg, FamilyBall ball)
      : std::runtime_error(std::move(msg)), offending(std::move(ball)) {}
  FamilyBall offending;
};

// Greedy first-fit coloring of the incremental selection into at most chi
// well-separated classes; classes returned in color order, empty ones dropped.
std::vector<std::vector<FamilyBall>> greedy_color_classes(const Carpet& carpet, int64_t chi);

// chi = C*D^2 + 1 classes from certified constants.
std::vector<std::vector<FamilyBall>> color_disjointify(const Carpet& carpet, int64_t C, int64_t D);

struct MeasureDisjointResult {
  std::vector<FamilyBall> balls;
  Rat captured;                       // exact mass of covered centers
  std::vector<Point> covered_centers;
  int color_index = 0;
};

// The color class capturing the most mu-mass of E; captured >= mu(E)/chi.
MeasureDisjointResult measure_disjointify(const Carpet& carpet, const DiscreteMeasure& mu, int64_t chi);

enum class FreqDirection { low, high };

// Prop-2.1-style frequency transfer check: verifies the per-ball ratio
// hypothesis on every ball and, when it holds, the global conclusion.
struct FrequencyReport {
  FreqDirection direction = FreqDirection::low;
  Rat t;
  int64_t C = 0;
  bool hypothesis_holds = false;
  std::optional<bool> conclusion_holds;  // set only when hypothesis holds
  int64_t card_A = 0, card_B = 0;
  struct PerBall {
    int64_t a = 0, b = 0;
    bool hyp_ok = false;
  };
  std::vector<PerBall> per_ball;
  std::optional<size_t> first_violation;
};

FrequencyReport frequency_bound_check(const Carpet& carpet, const std::vector<Point>& A,
                                      const std::vector<Point>& B, const Rat& t, int64_t C,
                                      FreqDirection direction);

enum class StackGrowth { adjacent, squared };

// A sequence of carpets over a common center set F with inter-level radius
// growth: adjacent (minrad U_i >= maxrad U_{i-1}) or squared
// (minrad U_i >= (maxrad U_{i-1})^2). base_minrad bounds minrad U_1.
class Stack {
 public:
  Stack(std::vector<Carpet> levels, StackGrowth growth, Rat base_minrad,
        std::optional<std::vector<Point>> centers = std::nullopt);

  const std::vector<Carpet>& levels() const { return levels_; }
  size_t height() const { return levels_.size(); }
  StackGrowth growth() const { return growth_; }
  const Rat& base_minrad() const { return base_minrad_; }
  const std::vector<Point>& centers() const { return centers_; }
  const Carpet& level(size_t i_one_based) const { return levels_.at(i_one_based - 1); }

 private:
  std::vector<Carpet> levels_;
  StackGrowth growth_;
  Rat base_minrad_;
  std::vector<Point> centers_;
};

struct ExhaustionOverrunError : std::runtime_error {
  ExhaustionOverrunError(std::string msg, std::string precondition)
      : std::runtime_error(std::move(msg)), failed_precondition(std::move(precondition)) {}
  std::string failed_precondition;
};

struct SphereExhaustionResult {
  int64_t k = 0;                  // V draws only from levels >= k
  std::vector<FamilyBall> V;      // selected balls (their boundaries capture F)
  Rat r_used;                     // maxrad of level k-1 (base_minrad when k = 1)
  Rat captured;                   // exact mass of F covered by the 2r-thick boundaries
  int rounds = 0;
};

// Recursive exhaustion of thick-sphere mass: accumulates well-separated
// subfamilies via measure_disjointify, drawing levels from the top down,
// until the 2r-thickened boundaries capture more than half of mu(F).
SphereExhaustionResult sphere_exhaustion(const Stack& stack, const DiscreteMeasure& mu,
                                         const std::vector<Point>& F, const Rat& eps,
                                         const Rat& delta, int64_t chi);

struct CarpetGenParams {
  int n_balls = 50;
  int64_t window = 100;  // centers uniform in [-window, window]^d
  int64_t r_min = 1;
  int64_t r_max = 8;
};

Carpet random_carpet(const FamilyRef& family, const CarpetGenParams& params, Rng& rng);

// Empirical Besicovitch certificate: the max multiplicity of incremental
// selections over `trials` random carpets. Honest provenance: a measured
// bound, not a theoretical constant.
struct BesicovitchCertificate {
  std::string family;
  int d = 0;
  int64_t C = 0;  // == max_multiplicity seen
  int64_t max_multiplicity = 0;
  int64_t trials = 0;
  uint64_t seed = 0;
  CarpetGenParams params;
};

BesicovitchCertificate certify_besicovitch(const FamilyRef& family, const CarpetGenParams& params,
                                           int64_t trials, uint64_t seed);

}  // namespace besicover
