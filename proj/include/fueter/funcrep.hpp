#pragma once

/**
 * @file funcrep.hpp
 * @brief Functions H^n -> H (n = 1, 2), the Cauchy-Fueter operators, and a
 *        small zoo of reference functions with closed-form derivatives.
 *
 * A two-variable function is a function of 8 real coordinates; variable v
 * owns coordinates [4v, 4v + 4). Operators act on one variable at a time:
 *
 *   cf_left       dbar f   = d0 f + i d1 f + j d2 f + k d3 f   (units on the left)
 *   cf_right      dbar^R f = d0 f + d1 f i + d2 f j + d3 f k   (units on the right)
 *   cf_left_conj  d f      = d0 f - i d1 f - j d2 f - k d3 f
 *
 * so that cf_left_conj(cf_left f) is the 4-dimensional Laplacian.
 */

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fueter/algebra.hpp"

namespace fueter {

inline constexpr int kMaxVariables = 2;

using PointView = std::span<const Quaternion>;
using Point = std::vector<Quaternion>;

/// Sum of a_alpha x^alpha with real monomials and quaternion coefficients.
/// Zero coefficients are never stored.
class PolyFunction {
 public:
  using Exponents = std::vector<int>;

  explicit PolyFunction(int nvars = 1);

  int nvars() const { return nvars_; }
  const std::map<Exponents, Quaternion>& terms() const { return terms_; }
  int degree() const;

  /// Adds coeff * x^exponents, merging with an existing term.
  void add_term(const Exponents& exponents, const Quaternion& coeff);

  Quaternion evaluate(PointView x) const;
  /// Exact partial derivative with respect to real coordinate `coord`.
  PolyFunction derivative(int coord) const;

  PolyFunction operator+(const PolyFunction& o) const;
  PolyFunction operator-(const PolyFunction& o) const;
  /// Quaternion product of values, in this order: (f*g)(x) = f(x) g(x).
  PolyFunction operator*(const PolyFunction& o) const;
  friend PolyFunction operator*(const Quaternion& c, const PolyFunction& f);
  friend PolyFunction operator*(const PolyFunction& f, const Quaternion& c);

  /// Coordinate x_coord as a polynomial.
  static PolyFunction coordinate(int nvars, int coord);
  static PolyFunction constant(int nvars, const Quaternion& c);

 private:
  void rebuild_cache();

  int nvars_;
  std::map<Exponents, Quaternion> terms_;
  // flattened copy of terms_ for fast evaluation
  std::vector<int> flat_exponents_;
  std::vector<Quaternion> flat_coeffs_;
  int max_exponent_ = 0;
};

/// A function known only pointwise. `partials`, when present, returns the
/// 4 * nvars first partial derivatives in closed form.
struct BlackBoxFunction {
  int nvars = 1;
  std::function<Quaternion(PointView)> evaluator;
  std::function<bool(PointView)> domain;  // empty means all of H^n
  double scale = 1.0;                     // characteristic length, sets FD steps
  std::function<void(PointView, std::span<Quaternion>)> partials;
  std::string name;
};

class QFunction {
 public:
  QFunction(PolyFunction poly);  // NOLINT(google-explicit-constructor)
  QFunction(BlackBoxFunction bb);  // NOLINT(google-explicit-constructor)

  int nvars() const;
  Quaternion operator()(PointView x) const { return evaluate(x); }
  Quaternion evaluate(PointView x) const;
  bool in_domain(PointView x) const;
  double scale() const;
  bool has_exact_partials() const;
  /// Requires has_exact_partials(); out has 4 * nvars entries.
  void exact_partials(PointView x, std::span<Quaternion> out) const;
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  const PolyFunction* as_poly() const { return std::get_if<PolyFunction>(&rep_); }
  const BlackBoxFunction* as_black_box() const { return std::get_if<BlackBoxFunction>(&rep_); }

 private:
  std::variant<PolyFunction, BlackBoxFunction> rep_;
  std::vector<PolyFunction> poly_partials_;
  std::string name_;
};

/// Wraps a polynomial as a black box (no closed-form partials), so every
/// operator goes through finite differences.
QFunction as_black_box(const PolyFunction& poly, double scale = 1.0);

/// Restricts f to the points where `allowed` holds (in addition to f's own domain).
QFunction restrict_domain(const QFunction& f, std::function<bool(PointView)> allowed,
                          std::string name = {});

enum class DiffMethod { Auto, Exact, FiniteDifference };

struct DiffOptions {
  DiffMethod method = DiffMethod::Auto;
  double step_scale = 1e-4;  // FD step h = step_scale * f.scale()
};

/// First partial derivative in real coordinate `coord`. Auto prefers exact
/// derivatives and falls back to a 4th-order central stencil.
Quaternion partial(const QFunction& f, int coord, PointView x, const DiffOptions& opt = {});

Quaternion cf_left(const QFunction& f, int var, PointView x, const DiffOptions& opt = {});
Quaternion cf_right(const QFunction& f, int var, PointView x, const DiffOptions& opt = {});
Quaternion cf_left_conj(const QFunction& f, int var, PointView x, const DiffOptions& opt = {});
/// Componentwise 4-dimensional Laplacian in variable `var`.
Quaternion laplacian(const QFunction& f, int var, PointView x, const DiffOptions& opt = {});

/// x -> cf_left(f, var, x) as a function in its own right (exact for
/// polynomials, black box otherwise).
QFunction cf_left_function(const QFunction& f, int var, const DiffOptions& opt = {});

/// One ball or spherical shell per variable.
struct SampleRegion {
  struct Shell {
    Quaternion center{};
    double r_min = 0.0;
    double r_max = 1.0;
  };
  std::vector<Shell> shells;

  static SampleRegion ball(double radius, int nvars = 1);
  static SampleRegion annulus(double r_min, double r_max, int nvars = 1);
  bool contains(PointView x) const;
};

/// Deterministic sample points (uniform in volume) for a fixed seed.
std::vector<Point> sample_region(const SampleRegion& region, std::size_t count, std::uint64_t seed);

struct RegularityReport {
  double max_residual = 0.0;
  Point worst_point;
  std::size_t samples = 0;
  double tol = 0.0;
  bool passed = true;
};

/// Max over samples and variables of |cf_left f|; pass iff <= tol.
RegularityReport is_regular(const QFunction& f, std::span<const Point> samples, double tol,
                            const DiffOptions& opt = {});

// Cauchy-Fueter kernel G(u) = conj(u) / |u|^4 and its closed-form partials.
Quaternion cauchy_kernel(const Quaternion& u);
/// d/du_l G(u) = conj(e_l)/|u|^4 - 4 u_l conj(u)/|u|^6.
Quaternion cauchy_kernel_partial(const Quaternion& u, int l);

struct ZooParams {
  Quaternion center{};
  Quaternion value{1.0};
  int index = 1;
  double p_weight = 1.0;
  double q_weight = 1.0;
};

/**
 * Named reference functions:
 *  - constant(value)                        regular, one variable
 *  - identity                               f(p) = p, not regular (dbar f = -2)
 *  - fueter_variable(index in 1..3)         f(p) = x_i - e_i x0, regular
 *  - kernel(center)                         G(p - c), regular on |p| < |c|
 *  - product_regular(index)                 F_i(p) F_i(q), jointly regular
 *  - bounded_strip_regular(center, weights) G(a p + b q - c) with default
 *                                           c = 3: regular and bounded on B_1 x B_1
 *
 * Throws UnknownName for anything else.
 */
QFunction zoo(std::string_view name, const ZooParams& params = {});
std::vector<std::string> zoo_names();

}  // namespace fueter
