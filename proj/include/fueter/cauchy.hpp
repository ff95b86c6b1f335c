#pragma once

/**
 * @file cauchy.hpp
 * @brief Product quadrature on 3-spheres and the Cauchy-Fueter integral
 *        formula in one and two quaternionic variables.
 *
 * A SphereGrid on the sphere |p - c| = R uses hyperspherical angles
 *
 *   p - c = R (cos t1, sin t1 cos t2, sin t1 sin t2 cos phi, sin t1 sin t2 sin phi)
 *
 * with area density R^3 sin^2 t1 sin t2, Gauss-Legendre rules in t1 and t2 and
 * the trapezoid rule in phi. The oriented 3-form D(p) pulled back to the
 * sphere is the outward unit normal (as a quaternion) times the area element,
 * which is what `normal_form` stores per node.
 *
 * The reproducing formula is
 *
 *   f(p0) = 1/(2 pi^2) sum_nodes G(p - p0) * D(p) * f(p),   G(u) = conj(u)/|u|^4,
 *
 * with the three factors multiplied in exactly that order.
 */

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "fueter/algebra.hpp"
#include "fueter/funcrep.hpp"

namespace fueter {

inline constexpr int kMinResolution = 8;
inline constexpr int kMaxResolution = 512;
inline constexpr int kDefaultTaylorCap = 12;

struct SphereGrid {
  Quaternion center{};
  double radius = 1.0;
  int resolution = 0;
  std::vector<Quaternion> nodes;
  std::vector<double> weights;
  std::vector<Quaternion> normal_form;

  std::size_t size() const { return nodes.size(); }
};

/// (resolution, resolution, 2 resolution) product grid. Throws BadResolution
/// for resolution outside [8, 512].
SphereGrid sphere_grid(const Quaternion& center, double radius, int resolution);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// CSV with header node_x0..node_x3, weight, normal_x0..normal_x3.
void write_grid_csv(const SphereGrid& grid, std::ostream& out);

using SliceFunction = std::function<Quaternion(const Quaternion&)>;

/// One-variable integral formula. Throws PointOnOrOutsideSphere unless
/// |p0 - center| < radius, and EvaluationFailure when f cannot be evaluated
/// at a node.
Quaternion cf_integral(const QFunction& f, const SphereGrid& grid, const Quaternion& p0);
Quaternion cf_integral(const SliceFunction& f, const SphereGrid& grid, const Quaternion& p0);

/// Same sum with the sign of D(p) flipped; used to pin the orientation.
Quaternion cf_integral_reversed(const SliceFunction& f, const SphereGrid& grid, const Quaternion& p0);

/// Two-variable formula summed over all node pairs at once, factor order
/// G_p * D(p) * G_q * D(q) * f(p, q).
Quaternion cf_integral2(const QFunction& f, const SphereGrid& grid_p, const SphereGrid& grid_q,
                        const Quaternion& p0, const Quaternion& q0);

/// The same quantity as cf_integral over p of the q-slice integrals.
Quaternion cf_integral2_nested(const QFunction& f, const SphereGrid& grid_p, const SphereGrid& grid_q,
                               const Quaternion& p0, const Quaternion& q0);

/**
 * Taylor coefficients a_alpha = d^alpha f(c) / alpha! at the grid centre from
 * node values, by expanding the kernel G(xi - c - h) in powers of h under the
 * integral. With u0 = xi - c and s(h) = |u0 - h|^{-4} = R^{-4} g(h),
 *
 *   t1 = -2 <u0, h> / R^2,   t2 = |h|^2 / R^2,
 *   g_0 = 1,   k g_k = -(k + 1) t1 g_{k-1} - (k + 2) t2 g_{k-2}
 *
 * gives every homogeneous part g_k of (1 + t1 + t2)^{-2}, and the kernel
 * coefficient is T_alpha = conj(u0) s_alpha - sum_l conj(e_l) s_{alpha - e_l}.
 *
 * The s-table depends only on the grid, so one KernelMoments object serves
 * any number of functions on the same sphere.
 */
class KernelMoments {
 public:
  KernelMoments(const SphereGrid& grid, int max_order);

  int max_order() const { return indices_.max_order(); }
  const MultiIndexSet& indices() const { return indices_; }
  const SphereGrid& grid() const { return *grid_; }

  /// Coefficient table (in indices() order) for node values f(xi_n).
  std::vector<Quaternion> coefficients(std::span<const Quaternion> values) const;
  /// Same table with f(centre) subtracted from every node value first. The
  /// higher moments of a constant vanish exactly but not under quadrature, so
  /// this removes the dominant error on small spheres.
  std::vector<Quaternion> coefficients(std::span<const Quaternion> values, const Quaternion& centre_value) const;

  /// Kernel Taylor coefficients T_alpha at one node (for testing).
  std::vector<Quaternion> kernel_coefficients(std::size_t node) const;

 private:
  void fill_s(std::size_t node, double* s) const;

  std::shared_ptr<const SphereGrid> grid_;
  MultiIndexSet indices_;
  std::vector<double> s_cache_;  // nodes x indices, only when small enough
};

/// Node values of a one-variable function (EvaluationFailure on failure).
std::vector<Quaternion> node_values(const SliceFunction& f, const SphereGrid& grid);
std::vector<Quaternion> node_values(const QFunction& f, const SphereGrid& grid);

/// a_alpha of f at the grid centre; OrderTooHigh when |alpha| > cap.
Quaternion taylor_from_integral(const QFunction& f, const SphereGrid& grid, const MultiIndex& alpha,
                                int cap = kDefaultTaylorCap);

/// Whole table through order N (indices in MultiIndexSet(N) order).
std::vector<Quaternion> taylor_table_from_integral(const QFunction& f, const SphereGrid& grid, int order,
                                                   int cap = kDefaultTaylorCap);

}  // namespace fueter
