#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "besicover/geometry.hpp"
#include "besicover/measure.hpp"
#include "besicover/point.hpp"
#include "besicover/rational.hpp"

namespace besicover {

struct ZeroDenominatorError : std::runtime_error {
  explicit ZeroDenominatorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct HorizonError : std::runtime_error {
  explicit HorizonError(const std::string& msg) : std::runtime_error(msg) {}
};

// Finitely supported rational-valued function on the atom space.
class Observable {
 public:
  Observable() = default;
  static Observable from_pairs(std::vector<std::pair<Point, Rat>> vals);
  static Observable indicator(const std::vector<Point>& pts);

  Rat at(const Point& p) const;
  const std::vector<std::pair<Point, Rat>>& atoms() const { return vals_; }
  bool empty() const { return vals_.empty(); }
  bool nonnegative() const;
  Rat sup_norm() const;  // max |value|
  Observable abs() const;
  Observable scaled(const Rat& c) const;
  Observable minus(const Observable& other) const;

 private:
  std::vector<std::pair<Point, Rat>> vals_;  // sorted, nonzero values only
};

// A free nonsingular Z^d-action on an atomic space whose atoms are lattice
// points, with exact atom masses. The Radon-Nikodym cocycle is the atom
// mass ratio rho(u, w) = mu(T^{-u} w) / mu(w).
class Action {
 public:
  virtual ~Action() = default;
  virtual int dim() const = 0;
  virtual Point apply(const Point& u, const Point& omega) const = 0;  // T^u omega
  virtual Rat mass(const Point& omega) const = 0;                     // > 0
  virtual Rat total_mass() const = 0;  // exact total, or 0 for infinite models
  virtual bool finite_measure() const = 0;
  // Freeness horizon: apply(u, w) = w implies u = 0 whenever ‖u‖_inf < horizon.
  virtual std::optional<int64_t> freeness_horizon() const = 0;
  // True for the plain translation models, where S_n f(w) telescopes to
  // sum over w - B_n of f * mu divided by mu(w).
  virtual bool translation_model() const { return false; }
  virtual std::string describe() const = 0;
  // All u with |u_i| <= coord_bound and T^{-u} omega = v.
  virtual void preimage_shifts(const Point& omega, const Point& v, int64_t coord_bound,
                               std::vector<Point>& out) const = 0;
  // Integral of a finitely supported observable: sum f * mu.
  Rat integral(const Observable& f) const;
};

using ActionRef = std::shared_ptr<const Action>;

// Lattice translation with counting measure (infinite, measure-preserving).
ActionRef make_counting_translation(int d);
// Translation with mu({x}) = lambda^{‖x‖_1}, lambda in (0,1) rational:
// finite, nonsingular, nontrivial cocycle.
ActionRef make_weighted_translation(int d, const Rat& lambda);
// d-fold product cyclic odometer on (Z/2^N)^d with per-axis biased product
// masses over binary digits.
ActionRef make_odometer(int d, int N, std::vector<Rat> biases);

// rho(u, omega) = mu(T^{-u} omega)/mu(omega), exact.
Rat rn_derivative(const Action& a, const Point& u, const Point& omega);

// (T-hat^u f)(omega) = f(T^{-u} omega) * rho(u, omega).
Rat dual_apply(const Action& a, const Point& u, const Observable& f, const Point& omega);

// T-hat^v f as a finitely supported observable.
Observable dual_push(const Action& a, const Point& v, const Observable& f);

// S_n f(omega) = sum_{u in B_n} T-hat^u f(omega), exact.
Rat ball_sum(const Action& a, const Observable& f, const NormSpec& norm, int64_t n,
             const Point& omega);

// sum_{u in B_n} rho(u, omega): the ball sum of f == 1 (enumerates B_n).
Rat ball_sum_ones(const Action& a, const NormSpec& norm, int64_t n, const Point& omega);

// R_n(f,g) = S_n f / S_n g; zero denominators are reported, never NaN.
Rat ratio_average(const Action& a, const Observable& f, const Observable& g, const NormSpec& norm,
                  int64_t n, const Point& omega);

// sum over B_{n+t} \ B_{n-t} of T-hat^u h, over S_n h. Requires t <= n.
Rat shell_ratio(const Action& a, const Observable& h, const NormSpec& norm, int64_t n, int64_t t,
                const Point& omega);

// Exact verification of the coboundary cancellation chain at one (n, omega):
//   |S_n(f - T-hat^v f)| <= shell sum of |f|  (thickness ceil‖v‖)
//   S_n |f| <= ‖f‖_inf * S_n 1
//   |R_n(f - T-hat^v f, 1)| <= shell_ratio(|f|) * ‖f‖_inf   (when defined)
struct CoboundaryReport {
  int64_t n = 0;
  int64_t t = 0;  // ceil ‖v‖, the shell thickness used
  Rat lhs_abs;          // |S_n(f - T-hat^v f)|
  Rat shell_sum_absf;   // shell sum of |f|
  bool cancellation_ok = false;
  Rat ball_sum_absf;
  Rat ball_sum_ones;
  Rat sup_f;
  bool linfty_ok = false;
  std::optional<Rat> ratio_lhs;    // set when S_n 1 != 0
  std::optional<Rat> ratio_bound;  // shell/ball * sup_f, set when S_n |f| != 0
  bool chain_ok = false;
};

CoboundaryReport coboundary_ratio_bound_check(const Action& a, const Observable& f, const Point& v,
                                              const NormSpec& norm, int64_t n, const Point& omega);

// Exact convergence bound for translation models with f, g >= 0:
//   |R_n(f,g)(w) - int f / int g| <= (T_f int g + T_g int f) / (int g (int g - T_g))
// where T_f, T_g are the exact mass tails of f, g outside w - B_n. Valid
// only while T_g < int g (equivalently S_n g(w) > 0).
struct RatioTailBound {
  Rat bound;
  Rat tail_f;
  Rat tail_g;
  bool valid = false;
};

RatioTailBound ratio_tail_bound(const Action& a, const Observable& f, const Observable& g,
                                const NormSpec& norm, int64_t n, const Point& omega);

// Transference measure on B_2n: nu({u}) = T-hat^u f(omega); the f == 1
// overload gives nu({u}) = rho(u, omega).
DiscreteMeasure transfer_measure(const Action& a, const Point& omega, int64_t n,
                                 const NormSpec& norm);
DiscreteMeasure transfer_measure(const Action& a, const Observable& f, const Point& omega,
                                 int64_t n, const NormSpec& norm);

}  // namespace besicover
