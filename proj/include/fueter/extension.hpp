#pragma once

/**
 * @file extension.hpp
 * @brief Propagation of regular extension across a boundary piece.
 *
 * Setting: Omega = {rho < 0} in H^2 with gamma = B_1 x {0} on its boundary,
 * U a neighbourhood of (1, 0), f regular on Omega u U. The construction
 *
 *  1. picks eps with radius_certificate(eps, delta) > eps (1 + margin);
 *  2. expands f in q around q = -eps on spheres inside the strip
 *     B_1 x B_{eps(1 - eps')}(-eps), which lies in Omega;
 *  3. checks the disc-average (submean / Fatou) chain on the complexified
 *     coefficient functions along tau -> (tau, 0, 0, 0, -eps, 0, 0, 0);
 *  4. sums the q-series on the cube of half-side r_cert around -eps, which
 *     reaches past the boundary q = 0 into y0 > 0.
 *
 * All access to f goes through a guard that refuses points outside Omega u U.
 */

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fueter/cauchy.hpp"
#include "fueter/funcrep.hpp"
#include "fueter/series.hpp"

namespace fueter {

struct DomainDescriptor {
  std::function<double(PointView)> rho;
  /// d rho / d(x0..x3, y0..y3)
  std::function<std::array<double, 8>(PointView)> gradient;
  /// Extra bound on Omega (beyond rho < 0); empty means none.
  std::function<bool(PointView)> bounds;
  Quaternion u_center_p{1.0};
  Quaternion u_center_q{};
  double u_radius = 0.7;
  std::string name = "custom";

  bool in_omega(PointView x) const;
  bool in_u(PointView x) const;
  bool allowed(PointView x) const { return in_omega(x) || in_u(x); }
};

/// rho = y0 (1 + kappa |p|^2) - c |q~|^2 on |p| < 1.25, |q| < 0.6 where
/// q~ = (y1, y2, y3); U = B_{u_radius}(1) x B_{u_radius}(0).
DomainDescriptor model_domain(double kappa = 0.1, double c = 1.0, double u_radius = 0.7);

struct NormalFormReport {
  double max_rho_on_gamma = 0.0;   // max |rho(p, 0)| over the sample
  double max_tangential = 0.0;     // max |grad rho(p, 0)| off the y0 slot
  double epsilon_prime = 0.0;      // max |sigma(p)| / |p|
  std::size_t samples = 0;
  bool certified = false;          // rho(p,0) = 0 to 1e-10, tangential part 0, eps' <= 0.2
};

/// Checks rho(p, 0) = 0 and grad rho(p, 0) = (0, 1 + sigma(p)) on seeded samples of B_1.
NormalFormReport fit_normal_form(const DomainDescriptor& d, std::size_t samples = 256, std::uint64_t seed = 7);

struct GuardStats {
  std::atomic<std::size_t> queries{0};
  std::atomic<std::size_t> violations{0};
};

/// f restricted to Omega u U. Every evaluation is counted; one outside the
/// allowed set is counted as a violation and throws DomainViolation.
QFunction guarded(const QFunction& f, const DomainDescriptor& d, std::shared_ptr<GuardStats> stats);

/// eps (sqrt2 - 1) (delta / eps)^{delta / 2 pi}.
double radius_certificate(double eps, double delta);

/// Largest eps with radius_certificate(eps, delta) > eps (1 + margin), by
/// bisection on log eps. NoFeasibleEpsilon when that eps underflows.
double choose_epsilon(double delta, double margin = 0.1);
/// Closed form delta ((sqrt2 - 1) / (1 + margin))^{2 pi / delta}.
double epsilon_threshold(double delta, double margin = 0.1);

/// Finite-order r_q(p0, q0) proxy: radius_estimate of the q-table of f(p0, .) at q0.
/// opt.variable is forced to 1.
double rq_estimate(const QFunction& f, const Quaternion& p0, const Quaternion& q0, int order,
                   const TaylorOptions& opt = {});

struct StripOptions {
  Quaternion q_center{};
  double shrink = 0.9;   // q-sphere radius = shrink * strip radius
  int resolution = 12;
  int shell_min = 4;
};

/**
 * F(p, q) = sum_alpha g_alpha(p) (q - q_center)^alpha with g_alpha(p) the
 * q-Taylor coefficients of f at (p, q_center), computed from f on the sphere
 * of radius shrink * strip_radius. Tables are computed on demand.
 */
class StripExtension {
 public:
  StripExtension(QFunction f, double strip_radius, double r_target, int order, const StripOptions& opt);

  Quaternion operator()(const Quaternion& p, const Quaternion& q) const;
  TaylorSeries table(const Quaternion& p) const;
  /// q in the open cube of half-side r_target around q_center.
  bool in_cube(const Quaternion& q) const;

  double strip_radius() const { return strip_radius_; }
  double sphere_radius() const { return grid_.radius; }
  double r_target() const { return r_target_; }
  int order() const { return order_; }
  const Quaternion& q_center() const { return opt_.q_center; }
  const SphereGrid& q_grid() const { return grid_; }
  const QFunction& source() const { return f_; }

 private:
  QFunction f_;
  double strip_radius_;
  double r_target_;
  int order_;
  StripOptions opt_;
  SphereGrid grid_;
  std::shared_ptr<const KernelMoments> moments_;
};

struct StripCheck {
  std::size_t samples = 0;
  double min_rq = 0.0;          // worst radius estimate over the p sample
  Quaternion worst_p;
};

/// Builds the extension after checking rq >= r_target at every p in p_sample
/// (RadiusNotCertified otherwise).
StripExtension strip_extend(const QFunction& f, double strip_radius, double r_target, int order,
                            std::span<const Quaternion> p_sample, const StripOptions& opt = {},
                            StripCheck* check = nullptr);

/// Product grid with `per_axis` points per coordinate on [-r, r]^4, clipped to |p| <= r.
std::vector<Quaternion> p_sample_grid(double radius, int per_axis);

struct FatouReport {
  int order = 0;
  double disc_radius = 0.0;
  int n_theta = 0;
  std::size_t alphas = 0;
  std::size_t submean_violations = 0;
  double worst_submean_gap = 0.0;     // max over alpha of u(0) - average
  double proxy_center = 0.0;          // max over high shells of u_alpha(0)
  double proxy_average = 0.0;         // disc average of the same proxy
  bool chain_holds = false;           // proxy_center <= proxy_average + 1e-2
  std::size_t resolved_alphas = 0;    // above the quadrature noise floor
  std::size_t termwise_violations = 0;
  double bound_far = 0.0;             // -log((sqrt2 - 1) eps)
  double bound_u = 0.0;               // -log((sqrt2 - 1) delta), or NaN without U
  double averaged_bound = 0.0;
  double log_inverse_certificate = 0.0;  // -log r_cert
  bool bound_reproduces = false;
  double u_side_rq = 0.0;             // rq at (0.95, -eps) from U data
  double u_side_required = 0.0;
  bool u_side_ok = false;
  bool has_u = false;
};

struct ProbeRow {
  Point point;
  std::optional<Quaternion> F_value;
  Quaternion truth_value;
  std::optional<double> abs_error;
  bool certified = false;
};

struct PipelineOptions {
  int order = 10;
  double margin = 1.0;
  double shrink = 0.9;
  int q_resolution = 12;
  double p_sample_radius = 0.3;
  int p_sample_per_axis = 9;
  double disc_radius = 0.95;
  int n_theta = 256;
  int fatou_order = 8;
  int fatou_p_resolution = 10;
  int fatou_q_resolution = 8;
  std::size_t strip_points = 100;
  std::uint64_t seed = 1;
  double probe_tolerance = 1e-4;
  double strip_tolerance = 1e-6;
  std::vector<Point> extra_probes;
};

struct ExtensionResult {
  double epsilon = 0.0;
  double delta = 0.0;
  double delta_effective = 0.0;
  double margin = 0.0;
  double epsilon_prime = 0.0;
  double shrink = 0.0;
  double r_cert = 0.0;
  bool certified = false;  // r_cert > eps: the cube crosses q = 0
  int order = 0;
  double strip_radius = 0.0;
  double sphere_radius = 0.0;
  double strip_residual = 0.0;
  std::size_t strip_points = 0;
  StripCheck p_check;
  double rq_origin = 0.0;  // measured rq at (0, -eps)
  bool certificate_consistent = false;
  NormalFormReport normal_form;
  FatouReport fatou;
  std::vector<ProbeRow> probes;
  double max_probe_error = 0.0;
  std::size_t accepted_probes = 0;
  std::size_t guard_queries = 0;
  std::size_t guard_violations = 0;
  bool passed = false;
  std::shared_ptr<const StripExtension> extension;
};

/// Runs the construction for f_truth restricted to Omega u U and validates the
/// extension against f_truth at probe points beyond the boundary.
ExtensionResult hanges_treves_pipeline(const QFunction& f_truth, const DomainDescriptor& domain, double delta,
                                       const PipelineOptions& opt = {});

/// Disc-average diagnostics on their own (used by the pipeline).
/// u_point is the real p at which the U-side radius is measured.
FatouReport fatou_check(const QFunction& f, double eps, double delta, double strip_radius, double r_cert,
                        const PipelineOptions& opt, bool has_u, const Quaternion& u_point = Quaternion(0.95));

}  // namespace fueter
