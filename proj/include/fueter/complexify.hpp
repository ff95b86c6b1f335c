#pragma once

/**
 * @file complexify.hpp
 * @brief Extension of regular functions on B_1 to complex points of C (x) H
 *        through the integral formula, membership in Gamma, and the
 *        log-coefficient functions u_alpha with their disc averages.
 *
 * With x in C^4 and xi on the unit sphere the complexified kernel is
 *
 *   K(xi, x) = bq_conj(xi - x) / (sum_l (xi_l - x_l)^2)^2,
 *
 * and g~(x) = 1/(2 pi^2) sum_nodes K(xi, x) * D(xi) * g(xi). Gamma is the set
 * where the denominator never vanishes on the sphere; here it is tested on
 * the quadrature nodes only.
 */

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fueter/algebra.hpp"
#include "fueter/cauchy.hpp"
#include "fueter/funcrep.hpp"

namespace fueter {

inline constexpr double kGammaFloor = 1e-6;
inline constexpr double kLogClamp = -1e3;

struct GammaReport {
  double margin = 0.0;  // min over nodes of |sum_l (xi_l - x_l)^2|
  bool inside = false;  // margin >= floor
};

GammaReport gamma_membership(const Biquaternion& x, const SphereGrid& grid, double floor = kGammaFloor);

/// Node values of one or more real functions on a shared sphere, extended to
/// complex points by the complexified kernel.
class ComplexifiedFunction {
 public:
  ComplexifiedFunction(std::shared_ptr<const SphereGrid> grid, std::vector<Quaternion> values,
                       double floor = kGammaFloor);

  /// Throws OutsideGamma when x fails gamma_membership.
  Biquaternion operator()(const Biquaternion& x) const;
  const SphereGrid& grid() const { return *grid_; }
  const std::vector<Quaternion>& values() const { return values_; }

 private:
  std::shared_ptr<const SphereGrid> grid_;
  std::vector<Quaternion> values_;
  double floor_;
};

/// g must be a one-variable function defined on the grid sphere.
ComplexifiedFunction complexify(const QFunction& g, const SphereGrid& grid, double floor = kGammaFloor);

/// Polynomial with the same coefficient table, evaluated at complex coordinates.
class BiquaternionPolynomial {
 public:
  explicit BiquaternionPolynomial(PolyFunction poly) : poly_(std::move(poly)) {}
  Biquaternion operator()(std::span<const Biquaternion> x) const;
  int nvars() const { return poly_.nvars(); }

 private:
  PolyFunction poly_;
};

BiquaternionPolynomial complexify_poly(const PolyFunction& g);

/**
 * The q-Taylor coefficients g_alpha(p) of a two-variable f at q0, sampled at
 * the nodes of a p-sphere and complexified in p. All alpha share one kernel
 * evaluation per complex point.
 */
class CoefficientSlices {
 public:
  CoefficientSlices(const QFunction& f, const SphereGrid& p_grid, const SphereGrid& q_grid, int order,
                    double floor = kGammaFloor);

  const MultiIndexSet& indices() const { return indices_; }
  const SphereGrid& p_grid() const { return *p_grid_; }
  const Quaternion& q0() const { return q0_; }
  /// g_alpha at p-node n (real data).
  const Quaternion& value(std::size_t alpha, std::size_t node) const {
    return values_[node * indices_.size() + alpha];
  }
  /// One complexified function per alpha (copies the node values).
  ComplexifiedFunction function(std::size_t alpha) const;
  /// All g~_alpha(x) in indices() order. Throws OutsideGamma.
  std::vector<Biquaternion> evaluate_all(const Biquaternion& x) const;

 private:
  std::shared_ptr<const SphereGrid> p_grid_;
  MultiIndexSet indices_;
  Quaternion q0_;
  std::vector<Quaternion> values_;  // node-major
  double floor_;
};

/// (1/|alpha|) log |value| with the Euclidean norm on R^8; -inf at zeros.
double u_alpha_value(const Biquaternion& value, int alpha_order);
/// u_alpha of a complexified g~_alpha at x.
double u_alpha(const ComplexifiedFunction& g_alpha, const Biquaternion& x, int alpha_order);

struct DiscAverage {
  double average = 0.0;
  std::size_t clamped = 0;  // samples equal to -inf, replaced by the clamp
};

/// Trapezoid average (1/2 pi) sum F(theta_j) dtheta at n equispaced angles.
DiscAverage disc_average(const std::function<double(double)>& F, int n_theta, double clamp = kLogClamp);

/// Point tau -> (tau, 0, 0, 0) of the complex disc used with the slices.
Biquaternion disc_point(double radius, double theta);

/// CSV rows alpha, theta, value for every alpha of `slices` with order in
/// [1, max_order] on the circle of the given radius.
void write_u_alpha_csv(const CoefficientSlices& slices, int max_order, double radius, int n_theta,
                       std::ostream& out);

}  // namespace fueter
