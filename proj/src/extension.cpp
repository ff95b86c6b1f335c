#include "fueter/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fueter/complexify.hpp"
#include "fueter/error.hpp"
#include "fueter/random.hpp"

namespace fueter {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double tilde_norm2(const Quaternion& q) { return q.x1 * q.x1 + q.x2 * q.x2 + q.x3 * q.x3; }

}  // namespace

// ---------------------------------------------------------------- domain

bool DomainDescriptor::in_omega(PointView x) const {
  if (x.size() != 2 || !rho) return false;
  if (bounds && !bounds(x)) return false;
  return rho(x) < 0.0;
}

bool DomainDescriptor::in_u(PointView x) const {
  if (x.size() != 2 || !(u_radius > 0.0)) return false;
  return norm(x[0] - u_center_p) < u_radius && norm(x[1] - u_center_q) < u_radius;
}

DomainDescriptor model_domain(double kappa, double c, double u_radius) {
  if (!(kappa >= 0.0) || !(c >= 0.0) || !(u_radius >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "model domain parameters must be non-negative");
  }
  DomainDescriptor d;
  d.rho = [kappa, c](PointView x) {
    return x[1].x0 * (1.0 + kappa * norm2(x[0])) - c * tilde_norm2(x[1]);
  };
  d.gradient = [kappa, c](PointView x) {
    std::array<double, 8> g{};
    for (int l = 0; l < 4; ++l) g[static_cast<std::size_t>(l)] = 2.0 * kappa * x[1].x0 * x[0][l];
    g[4] = 1.0 + kappa * norm2(x[0]);
    for (int l = 1; l < 4; ++l) g[static_cast<std::size_t>(4 + l)] = -2.0 * c * x[1][l];
    return g;
  };
  d.bounds = [](PointView x) { return norm(x[0]) < 1.25 && norm(x[1]) < 0.6; };
  d.u_radius = u_radius;
  d.name = "model";
  return d;
}

NormalFormReport fit_normal_form(const DomainDescriptor& d, std::size_t samples, std::uint64_t seed) {
  if (!d.rho || !d.gradient) throw Error(ErrorKind::BadSpec, "domain descriptor needs rho and its gradient");
  NormalFormReport r;
  r.samples = samples;
  const auto pts = sample_region(SampleRegion::ball(1.0), samples, seed);
  for (const auto& pp : pts) {
    const Quaternion x[2] = {pp[0], Quaternion{}};
    r.max_rho_on_gamma = std::max(r.max_rho_on_gamma, std::abs(d.rho(x)));
    const auto g = d.gradient(x);
    for (std::size_t i = 0; i < 8; ++i) {
      if (i != 4) r.max_tangential = std::max(r.max_tangential, std::abs(g[i]));
    }
    const double np = norm(pp[0]);
    if (np > 1e-12) r.epsilon_prime = std::max(r.epsilon_prime, std::abs(g[4] - 1.0) / np);
  }
  r.certified = r.max_rho_on_gamma <= 1e-10 && r.max_tangential <= 1e-10 && r.epsilon_prime <= 0.2;
  return r;
}

QFunction guarded(const QFunction& f, const DomainDescriptor& d, std::shared_ptr<GuardStats> stats) {
  if (f.nvars() != 2) throw Error(ErrorKind::InvalidArgument, "the guard wraps two-variable functions");
  if (!stats) throw Error(ErrorKind::InvalidArgument, "guard needs a statistics object");
  BlackBoxFunction bb;
  bb.nvars = 2;
  bb.evaluator = [f, d, stats](PointView x) {
    stats->queries.fetch_add(1, std::memory_order_relaxed);
    if (!d.allowed(x)) {
      stats->violations.fetch_add(1, std::memory_order_relaxed);
      throw Error(ErrorKind::DomainViolation, "query outside Omega u U at q = (" + std::to_string(x[1].x0) + ", " +
                                                  std::to_string(x[1].x1) + ", " + std::to_string(x[1].x2) +
                                                  ", " + std::to_string(x[1].x3) + ")");
    }
    return f.evaluate(x);
  };
  if (f.has_exact_partials()) {
    bb.partials = [f, d, stats](PointView x, std::span<Quaternion> out) {
      if (!d.allowed(x)) {
        stats->violations.fetch_add(1, std::memory_order_relaxed);
        throw Error(ErrorKind::DomainViolation, "derivative query outside Omega u U");
      }
      f.exact_partials(x, out);
    };
  }
  bb.scale = f.scale();
  bb.name = "guarded(" + f.name() + ")";
  return QFunction(std::move(bb));
}

// ---------------------------------------------------------------- certificate

double radius_certificate(double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps and delta must be positive");
  return eps * kSqrt2Minus1 * std::pow(delta / eps, delta / kTwoPi);
}

double epsilon_threshold(double delta, double margin) {
  if (!(delta > 0.0) || !(margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need delta > 0, margin >= 0");
  return delta * std::pow(kSqrt2Minus1 / (1.0 + margin), kTwoPi / delta);
}

double choose_epsilon(double delta, double margin) {
  if (!(delta > 0.0) || !(margin >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need delta > 0, margin >= 0");
  const auto feasible = [&](double log_eps) {
    const double eps = std::exp(log_eps);
    return radius_certificate(eps, delta) > eps * (1.0 + margin);
  };
  double lo = std::log(std::numeric_limits<double>::min());
  double hi = std::log(delta);
  if (!feasible(lo)) {
    throw Error(ErrorKind::NoFeasibleEpsilon,
                "no representable eps satisfies the certificate inequality for delta = " + std::to_string(delta));
  }
  if (feasible(hi)) return delta;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return std::exp(lo);
}

double rq_estimate(const QFunction& f, const Quaternion& p0, const Quaternion& q0, int order,
                   const TaylorOptions& opt) {
  if (f.nvars() != 2) throw Error(ErrorKind::InvalidArgument, "rq needs a two-variable function");
  TaylorOptions o = opt;
  o.variable = 1;
  const Point base{p0, q0};
  return radius_estimate(taylor_coeffs(f, base, order, o));
}

// ---------------------------------------------------------------- strip extension

StripExtension::StripExtension(QFunction f, double strip_radius, double r_target, int order,
                               const StripOptions& opt)
    : f_(std::move(f)), strip_radius_(strip_radius), r_target_(r_target), order_(order), opt_(opt) {
  if (f_.nvars() != 2) throw Error(ErrorKind::InvalidArgument, "strip extension needs a two-variable function");
  if (!(strip_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "strip radius must be positive");
  if (!(opt.shrink > 0.0 && opt.shrink <= 1.0)) throw Error(ErrorKind::InvalidArgument, "shrink must lie in (0, 1]");
  if (order > kDefaultTaylorCap) {
    throw Error(ErrorKind::OrderTooHigh, "order " + std::to_string(order) + " exceeds cap " +
                                             std::to_string(kDefaultTaylorCap));
  }
  grid_ = sphere_grid(opt.q_center, opt.shrink * strip_radius, opt.resolution);
  moments_ = std::make_shared<KernelMoments>(grid_, order);
}

TaylorSeries StripExtension::table(const Quaternion& p) const {
  TaylorSeries s = make_series(2, 1, Point{p, opt_.q_center}, order_);
  const QFunction& f = f_;
  const SliceFunction slice = [&f, p](const Quaternion& q) {
    const Quaternion pt[2] = {p, q};
    if (!f.in_domain(pt)) throw Error(ErrorKind::OutOfDomain, f.name() + " is not defined on the strip sphere");
    return f.evaluate(pt);
  };
  s.coeffs = moments_->coefficients(node_values(slice, grid_), slice(opt_.q_center));
  if (order_ >= opt_.shell_min + 4) s.radius_estimate = radius_estimate(s, opt_.shell_min);
  return s;
}

bool StripExtension::in_cube(const Quaternion& q) const {
  const Quaternion d = q - opt_.q_center;
  return std::max({std::abs(d.x0), std::abs(d.x1), std::abs(d.x2), std::abs(d.x3)}) < r_target_;
}

Quaternion StripExtension::operator()(const Quaternion& p, const Quaternion& q) const {
  if (!in_cube(q)) {
    throw Error(ErrorKind::OutsideConvergenceRegion, "q outside the certified cube of half-side " +
                                                         std::to_string(r_target_));
  }
  return evaluate(table(p), q).value;
}

StripExtension strip_extend(const QFunction& f, double strip_radius, double r_target, int order,
                            std::span<const Quaternion> p_sample, const StripOptions& opt, StripCheck* check) {
  if (!(r_target > 0.0)) throw Error(ErrorKind::InvalidArgument, "target radius must be positive");
  StripExtension ext(f, strip_radius, r_target, order, opt);
  StripCheck c;
  c.samples = p_sample.size();
  c.min_rq = std::numeric_limits<double>::infinity();
  for (const auto& p : p_sample) {
    const TaylorSeries s = ext.table(p);
    const double rq = s.radius_estimate ? *s.radius_estimate : radius_estimate(s, opt.shell_min);
    if (rq < c.min_rq) {
      c.min_rq = rq;
      c.worst_p = p;
    }
  }
  if (check) *check = c;
  if (c.min_rq < r_target) {
    throw Error(ErrorKind::RadiusNotCertified, "q-radius estimate " + std::to_string(c.min_rq) +
                                                   " below the target " + std::to_string(r_target));
  }
  return ext;
}

std::vector<Quaternion> p_sample_grid(double radius, int per_axis) {
  if (!(radius > 0.0) || per_axis < 1) throw Error(ErrorKind::InvalidArgument, "bad p-sample parameters");
  std::vector<double> axis(static_cast<std::size_t>(per_axis));
  for (int i = 0; i < per_axis; ++i) {
    axis[static_cast<std::size_t>(i)] = per_axis == 1 ? 0.0 : -radius + 2.0 * radius * i / (per_axis - 1);
  }
  std::vector<Quaternion> out;
  for (double a : axis) {
    for (double b : axis) {
      for (double c : axis) {
        for (double d : axis) {
          const Quaternion p(a, b, c, d);
          if (norm(p) <= radius * (1.0 + 1e-12)) out.push_back(p);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- disc averages

FatouReport fatou_check(const QFunction& f, double eps, double delta, double strip_radius, double r_cert,
                        const PipelineOptions& opt, bool has_u, const Quaternion& u_point) {
  FatouReport r;
  r.order = opt.fatou_order;
  r.disc_radius = opt.disc_radius;
  r.n_theta = opt.n_theta;
  r.has_u = has_u;
  const int shell_min = 4;
  const Quaternion q0(-eps);
  const double sphere = opt.shrink * strip_radius;
  const SphereGrid p_grid = sphere_grid(Quaternion{}, 1.0, opt.fatou_p_resolution);
  // a coarser table alongside: alpha counts as resolved only where the two agree
  const SphereGrid q_grid = sphere_grid(q0, sphere, opt.fatou_q_resolution + 4);
  const SphereGrid q_coarse = sphere_grid(q0, sphere, opt.fatou_q_resolution);
  const CoefficientSlices slices(f, p_grid, q_grid, opt.fatou_order);
  const CoefficientSlices coarse(f, p_grid, q_coarse, opt.fatou_order);
  const auto& idx = slices.indices();

  std::vector<double> scaled(idx.size(), 0.0);
  std::vector<double> drift(idx.size(), 0.0);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    double m = 0.0;
    double d = 0.0;
    for (std::size_t n = 0; n < p_grid.size(); ++n) {
      m = std::max(m, norm(slices.value(a, n)));
      d = std::max(d, norm(slices.value(a, n) - coarse.value(a, n)));
    }
    const double rk = std::pow(sphere, idx[a].order());
    scaled[a] = m * rk;
    drift[a] = d * rk;
  }
  const double top = *std::max_element(scaled.begin(), scaled.end());
  std::vector<bool> resolved(idx.size(), false);
  for (std::size_t a = 1; a < idx.size(); ++a) {
    resolved[a] = scaled[a] >= 1e-12 * top && drift[a] <= 1e-3 * scaled[a];
  }

  const std::size_t nt = static_cast<std::size_t>(opt.n_theta);
  std::vector<std::vector<double>> u(nt);  // u[j][alpha]
  auto u_row = [&](const Biquaternion& x) {
    const auto vals = slices.evaluate_all(x);
    std::vector<double> row(idx.size(), 0.0);
    for (std::size_t a = 1; a < idx.size(); ++a) row[a] = u_alpha_value(vals[a], idx[a].order());
    return row;
  };
  const std::vector<double> centre = u_row(Biquaternion{});
  for (std::size_t j = 0; j < nt; ++j) u[j] = u_row(disc_point(opt.disc_radius, kTwoPi * j / opt.n_theta));
  auto index_of_theta = [&](double theta) {
    return static_cast<std::size_t>(std::llround(theta * opt.n_theta / kTwoPi)) % nt;
  };

  // submean, alpha by alpha
  r.worst_submean_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 1; a < idx.size(); ++a) {
    ++r.alphas;
    if (resolved[a]) ++r.resolved_alphas;
    const auto avg = disc_average([&](double th) { return u[index_of_theta(th)][a]; }, opt.n_theta);
    const double c = std::max(centre[a], kLogClamp);
    const double gap = c - avg.average;
    r.worst_submean_gap = std::max(r.worst_submean_gap, gap);
    if (gap > 1e-3) ++r.submean_violations;
  }

  // limsup proxies over the high shells
  auto proxy = [&](const std::vector<double>& row) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 1; a < idx.size(); ++a) {
      if (idx[a].order() >= shell_min) m = std::max(m, row[a]);
    }
    return std::max(m, kLogClamp);
  };
  r.proxy_center = proxy(centre);
  r.proxy_average = disc_average([&](double th) { return proxy(u[index_of_theta(th)]); }, opt.n_theta).average;
  r.chain_holds = r.proxy_center <= r.proxy_average + 1e-2;

  r.bound_far = -std::log(kSqrt2Minus1 * eps);
  if (has_u) {
    r.bound_u = -std::log(kSqrt2Minus1 * delta);
    r.averaged_bound = ((kTwoPi - delta) * r.bound_far + delta * r.bound_u) / kTwoPi;
  } else {
    r.bound_u = std::numeric_limits<double>::quiet_NaN();
    r.averaged_bound = r.bound_far;
  }
  r.log_inverse_certificate = -std::log(r_cert);
  r.bound_reproduces =
      std::abs(r.averaged_bound - r.log_inverse_certificate) <= 1e-9 * std::max(1.0, std::abs(r.averaged_bound));

  // termwise bounds on the resolved high-shell alphas; the U bound applies on
  // the arc |theta| <= delta / 2
  for (std::size_t j = 0; j < nt; ++j) {
    double theta = kTwoPi * j / opt.n_theta;
    if (theta > std::numbers::pi) theta -= kTwoPi;
    const bool near = has_u && std::abs(theta) <= delta / 2.0;
    const double bound = near ? r.bound_u : r.bound_far;
    for (std::size_t a = 1; a < idx.size(); ++a) {
      if (resolved[a] && idx[a].order() >= shell_min && u[j][a] > bound) ++r.termwise_violations;
    }
  }

  if (has_u) {
    TaylorOptions o;
    o.method = TaylorMethod::Integral;
    o.integral_radius = opt.shrink * 2.0 * delta;
    o.integral_resolution = opt.q_resolution;
    r.u_side_rq = rq_estimate(f, u_point, q0, opt.order, o);
    r.u_side_required = kSqrt2Minus1 * 2.0 * delta * (1.0 - kRadiusSlack);
    r.u_side_ok = r.u_side_rq >= r.u_side_required;
  }
  return r;
}

// ---------------------------------------------------------------- pipeline

ExtensionResult hanges_treves_pipeline(const QFunction& f_truth, const DomainDescriptor& domain, double delta,
                                       const PipelineOptions& opt) {
  if (f_truth.nvars() != 2) throw Error(ErrorKind::InvalidArgument, "the pipeline needs a two-variable function");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  ExtensionResult r;
  r.delta = delta;
  r.margin = opt.margin;
  r.shrink = opt.shrink;
  r.order = opt.order;
  r.normal_form = fit_normal_form(domain);
  r.epsilon_prime = r.normal_form.epsilon_prime;
  if (!(r.epsilon_prime < 1.0)) throw Error(ErrorKind::BadSpec, "domain gradient is not in normal form");

  const bool has_u = domain.u_radius > 0.0;
  // U must hold two balls of radius 2 delta around (1, -eps)
  r.delta_effective = has_u ? std::min(delta, 0.999 * domain.u_radius / 2.0) : 0.0;
  r.epsilon = choose_epsilon(has_u ? r.delta_effective : delta, opt.margin);
  r.r_cert = has_u ? radius_certificate(r.epsilon, r.delta_effective) : kSqrt2Minus1 * r.epsilon;
  r.certified = r.r_cert > r.epsilon;
  r.strip_radius = r.epsilon * (1.0 - r.epsilon_prime);

  auto stats = std::make_shared<GuardStats>();
  const QFunction f = guarded(f_truth, domain, stats);
  const Quaternion q_center(-r.epsilon);

  r.fatou = fatou_check(f, r.epsilon, r.delta_effective, r.strip_radius, r.r_cert, opt, has_u,
                        Quaternion(opt.disc_radius));

  StripOptions so;
  so.q_center = q_center;
  so.shrink = opt.shrink;
  so.resolution = opt.q_resolution;
  const auto p_sample = p_sample_grid(opt.p_sample_radius, opt.p_sample_per_axis);
  auto ext = std::make_shared<StripExtension>(
      strip_extend(f, r.strip_radius, r.r_cert, opt.order, p_sample, so, &r.p_check));
  r.sphere_radius = ext->sphere_radius();
  r.extension = ext;

  const TaylorSeries origin = ext->table(Quaternion{});
  r.rq_origin = origin.radius_estimate.value_or(std::numeric_limits<double>::infinity());
  r.certificate_consistent = r.rq_origin >= r.r_cert * (1.0 - 0.2);

  // strip agreement on seeded points of B_1 x B_{strip}(-eps)
  Rng rng(opt.seed);
  auto ball_point = [&](double radius) {
    for (;;) {
      const Quaternion d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                         rng.uniform(-1.0, 1.0));
      if (norm2(d) <= 1.0) return d * radius;
    }
  };
  r.strip_points = opt.strip_points;
  for (std::size_t i = 0; i < opt.strip_points; ++i) {
    const Quaternion p = ball_point(0.999);
    const Quaternion q = q_center + ball_point(r.strip_radius);
    const Quaternion pt[2] = {p, q};
    const Quaternion direct = f.evaluate(pt);
    r.strip_residual = std::max(r.strip_residual, norm(evaluate(ext->table(p), q).value - direct));
  }

  // probes beyond the boundary: y0 > 0, on rays through gamma
  std::vector<Point> probes;
  const std::array<Quaternion, 4> ps{Quaternion{}, Quaternion(0.0, 0.2), Quaternion(0.1, 0.0, 0.15, 0.0),
                                     Quaternion(0.1, 0.1, 0.1, 0.1)};
  for (const auto& p : ps) {
    for (double frac : {0.125, 0.25, 0.5}) probes.push_back(Point{p, Quaternion(frac * r.r_cert)});
  }
  for (const auto& extra : opt.extra_probes) probes.push_back(extra);
  for (const auto& pt : probes) {
    if (pt.size() != 2) throw Error(ErrorKind::InvalidArgument, "probe points need two components");
    ProbeRow row;
    row.point = pt;
    row.truth_value = f_truth.evaluate(pt);
    row.certified = r.certified && norm(pt[0]) <= opt.p_sample_radius * (1.0 + 1e-12) && ext->in_cube(pt[1]);
    if (row.certified) {
      row.F_value = (*ext)(pt[0], pt[1]);
      row.abs_error = norm(*row.F_value - row.truth_value);
      r.max_probe_error = std::max(r.max_probe_error, *row.abs_error);
      ++r.accepted_probes;
    }
    r.probes.push_back(std::move(row));
  }

  r.guard_queries = stats->queries.load();
  r.guard_violations = stats->violations.load();
  r.passed = r.certified && r.accepted_probes > 0 && r.max_probe_error <= opt.probe_tolerance &&
             r.strip_residual <= opt.strip_tolerance && r.guard_violations == 0 && r.certificate_consistent &&
             r.fatou.submean_violations == 0 && r.fatou.chain_holds && r.fatou.termwise_violations == 0 &&
             r.fatou.bound_reproduces && (!has_u || r.fatou.u_side_ok);
  return r;
}

}  // namespace fueter
