#pragma once

/**
 * @file series.hpp
 * @brief Taylor tables in one quaternionic variable, finite-order radius
 *        estimates and the coefficient growth bounds for regular functions.
 *
 * A TaylorSeries expands f in the variable `variable` around base_point, the
 * other variable (if any) held fixed:
 *
 *   f(..., c + h, ...) = sum_alpha a_alpha h^alpha,   a_alpha = d^alpha f / alpha!.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fueter/algebra.hpp"
#include "fueter/cauchy.hpp"
#include "fueter/funcrep.hpp"

namespace fueter {

inline constexpr int kFdOrderCap = 12;
inline constexpr double kRadiusSlack = 0.15;
inline constexpr double kSqrt2Minus1 = 0.41421356237309504880;

struct TaylorSeries {
  int nvars = 1;
  int variable = 0;
  Point base_point{Quaternion{}};
  int order = 0;
  MultiIndexSet indices{0};
  std::vector<Quaternion> coeffs;  // aligned with indices
  std::optional<double> radius_estimate;

  const Quaternion& center() const { return base_point[static_cast<std::size_t>(variable)]; }
  /// a_alpha, or zero when |alpha| > order.
  Quaternion coeff(const MultiIndex& alpha) const;
  /// max over |alpha| = k of |a_alpha|.
  double shell_max(int k) const;
};

/// Builds an all-zero table of the given shape.
TaylorSeries make_series(int nvars, int variable, Point base_point, int order);

enum class TaylorMethod { Auto, Exact, FiniteDifference, Integral };

struct TaylorOptions {
  TaylorMethod method = TaylorMethod::Auto;
  int variable = 0;
  // finite differences: tensor Chebyshev stencil with fd_points + 1 nodes per
  // axis on [c - w, c + w], w = fd_half_width (0 means 0.3 * f.scale())
  int fd_points = 20;
  double fd_half_width = 0.0;
  // integral route: sphere of radius integral_radius (0 means 0.5 * f.scale())
  double integral_radius = 0.0;
  int integral_resolution = 32;
  int integral_cap = kDefaultTaylorCap;
};

/**
 * Coefficient table through order N.
 *  - Exact (polynomials only): symbolic derivatives.
 *  - FiniteDifference: monomial coefficients of the tensor Chebyshev
 *    interpolant; N <= 12 (OrderTooHigh), every stencil point must lie in the
 *    domain (OutOfDomain).
 *  - Integral: kernel moments on a sphere around the centre.
 * Auto picks Exact for polynomials and FiniteDifference otherwise.
 */
TaylorSeries taylor_coeffs(const QFunction& f, PointView base_point, int order, const TaylorOptions& opt = {});

/// Monomial-coefficient weights W (order+1 rows, points+1 columns) of the
/// 1-D Chebyshev interpolant on [-w, w]: c_k = sum_j W[k][j] f(x_j), together
/// with the nodes x_j.
void chebyshev_derivative_weights(int points, int order, double half_width, std::vector<double>& nodes,
                                  std::vector<double>& weights);

/// (max over shells k in [shell_min, N] of shell_max(k)^{1/k})^{-1}; +inf when
/// those shells vanish. InsufficientOrder when N < shell_min + 4.
double radius_estimate(const TaylorSeries& s, int shell_min = 4);

struct RadiusReport {
  double estimate = 0.0;
  double bound = 0.0;  // (sqrt2 - 1) R (1 - slack)
  double radius = 0.0;
  int order = 0;
  bool passed = false;
};

/// Expands f at `center` (variable opt.variable) and compares the estimate
/// with the guaranteed radius (sqrt2 - 1) R.
RadiusReport check_radius_lower_bound(const QFunction& f, PointView center, double R, int order,
                                      const TaylorOptions& opt = {}, double slack = kRadiusSlack);

struct GrowthReport {
  double c_fit = 0.0;      // smallest C with |a_alpha| <= C M (2 / ((sqrt2-1)R))^{|alpha|}
  double growth = 0.0;     // exp(slope) of log shell_max against k
  double growth_limit = 0.0;  // 2 / ((sqrt2-1) R) * 1.1
  double c_limit = 1e3;
  bool passed = false;
};

/// Bound check for |a_alpha| <= 2^{|alpha|} C M / ((sqrt2-1) R)^{|alpha|}.
/// InsufficientOrder when the table has order < 2.
GrowthReport coeff_growth_check(const TaylorSeries& s, double M, double R);

/// Partial sum through n = N of
///   conj(p) (1 - conj(p0 p^{-1})) / |p|^4 * sum_n n sum_k C(n-1, k) (-|w|^2)^k (2 Re w)^{n-1-k}
/// with w = p^{-1} p0. OutsideConvergenceRegion unless |w|^2 + 2 |Re w| < 1.
Quaternion kernel_series_partial_sum(const Quaternion& p, const Quaternion& p0, int N);

struct SeriesValue {
  Quaternion value;
  bool outside_cube = false;  // point beyond the half-side radius_estimate
  bool diverging = false;     // shell contributions still growing at the end
  std::vector<double> shell_norms;
};

/// Shell-by-shell sum of a_alpha (x - c)^alpha, increasing |alpha|.
SeriesValue evaluate(const TaylorSeries& s, const Quaternion& x);

}  // namespace fueter
