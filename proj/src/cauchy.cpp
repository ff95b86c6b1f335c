#include "fueter/cauchy.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "fueter/error.hpp"
#include "fueter/parallel.hpp"

namespace fueter {

namespace {

constexpr double kTwoPiSquared = 2.0 * std::numbers::pi * std::numbers::pi;
// s-tables up to this many doubles are kept between calls
constexpr std::size_t kMomentCacheLimit = std::size_t{1} << 23;

void check_inside(const SphereGrid& grid, const Quaternion& p0) {
  const double d = norm(p0 - grid.center);
  if (!(d < grid.radius * (1.0 - 1e-12))) {
    throw Error(ErrorKind::PointOnOrOutsideSphere,
                "point at distance " + std::to_string(d) + " from the centre of a sphere of radius " +
                    std::to_string(grid.radius));
  }
}

Quaternion guarded_eval(const SliceFunction& f, const Quaternion& x) {
  try {
    return f(x);
  } catch (const Error& e) {
    // a domain-guard trip keeps its own kind
    if (e.kind() == ErrorKind::DomainViolation) throw;
    throw Error(ErrorKind::EvaluationFailure, e.what());
  }
}

SliceFunction slice_of(const QFunction& f) {
  if (f.nvars() != 1) throw Error(ErrorKind::InvalidArgument, "one-variable function expected");
  return [&f](const Quaternion& x) {
    const Quaternion pt[1] = {x};
    if (!f.in_domain(pt)) {
      throw Error(ErrorKind::EvaluationFailure, f.name() + " is not defined at a quadrature node");
    }
    return f.evaluate(pt);
  };
}

// Per-node weights G(xi - p0) * D(xi), the left factor of every integral.
std::vector<Quaternion> left_weights(const SphereGrid& grid, const Quaternion& p0, double sign) {
  std::vector<Quaternion> w(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    w[n] = cauchy_kernel(grid.nodes[n] - p0) * grid.normal_form[n] * sign;
  }
  return w;
}

Quaternion integral_with_sign(const SliceFunction& f, const SphereGrid& grid, const Quaternion& p0,
                              double sign) {
  check_inside(grid, p0);
  const auto w = left_weights(grid, p0, sign);
  const Quaternion s = parallel_sum(grid.size(), [&](std::size_t n) {
    return w[n] * guarded_eval(f, grid.nodes[n]);
  });
  return s / kTwoPiSquared;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::BadResolution, "Gauss-Legendre rule needs at least one node");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

SphereGrid sphere_grid(const Quaternion& center, double radius, int resolution) {
  if (resolution < kMinResolution || resolution > kMaxResolution) {
    throw Error(ErrorKind::BadResolution, "resolution " + std::to_string(resolution) + " outside [" +
                                              std::to_string(kMinResolution) + ", " +
                                              std::to_string(kMaxResolution) + "]");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive and finite");
  }
  std::vector<double> t, wt;
  gauss_legendre(resolution, t, wt);
  const double half_pi = std::numbers::pi / 2.0;
  const int nphi = 2 * resolution;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  const double r3 = radius * radius * radius;

  SphereGrid g;
  g.center = center;
  g.radius = radius;
  g.resolution = resolution;
  const std::size_t total = static_cast<std::size_t>(resolution) * resolution * nphi;
  g.nodes.reserve(total);
  g.weights.reserve(total);
  g.normal_form.reserve(total);
  for (int a = 0; a < resolution; ++a) {
    const double t1 = half_pi * (t[static_cast<std::size_t>(a)] + 1.0);
    const double w1 = half_pi * wt[static_cast<std::size_t>(a)];
    const double s1 = std::sin(t1);
    for (int b = 0; b < resolution; ++b) {
      const double t2 = half_pi * (t[static_cast<std::size_t>(b)] + 1.0);
      const double w2 = half_pi * wt[static_cast<std::size_t>(b)];
      const double s2 = std::sin(t2);
      for (int c = 0; c < nphi; ++c) {
        const double phi = dphi * c;
        const Quaternion dir(std::cos(t1), s1 * std::cos(t2), s1 * s2 * std::cos(phi), s1 * s2 * std::sin(phi));
        const double w = r3 * s1 * s1 * s2 * w1 * w2 * dphi;
        g.nodes.push_back(center + dir * radius);
        g.weights.push_back(w);
        g.normal_form.push_back(dir * w);
      }
    }
  }
  return g;
}

void write_grid_csv(const SphereGrid& grid, std::ostream& out) {
  out << "node_x0,node_x1,node_x2,node_x3,weight,normal_x0,normal_x1,normal_x2,normal_x3\n";
  const auto old_precision = out.precision(17);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto& p = grid.nodes[n];
    const auto& d = grid.normal_form[n];
    out << p.x0 << ',' << p.x1 << ',' << p.x2 << ',' << p.x3 << ',' << grid.weights[n] << ',' << d.x0 << ','
        << d.x1 << ',' << d.x2 << ',' << d.x3 << '\n';
  }
  out.precision(old_precision);
}

Quaternion cf_integral(const SliceFunction& f, const SphereGrid& grid, const Quaternion& p0) {
  return integral_with_sign(f, grid, p0, 1.0);
}

Quaternion cf_integral(const QFunction& f, const SphereGrid& grid, const Quaternion& p0) {
  return integral_with_sign(slice_of(f), grid, p0, 1.0);
}

Quaternion cf_integral_reversed(const SliceFunction& f, const SphereGrid& grid, const Quaternion& p0) {
  return integral_with_sign(f, grid, p0, -1.0);
}

namespace {

Quaternion eval_pair(const QFunction& f, const Quaternion& p, const Quaternion& q) {
  const Quaternion pt[2] = {p, q};
  if (!f.in_domain(pt)) {
    throw Error(ErrorKind::EvaluationFailure, f.name() + " is not defined at a pair of quadrature nodes");
  }
  try {
    return f.evaluate(pt);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DomainViolation) throw;
    throw Error(ErrorKind::EvaluationFailure, e.what());
  }
}

void check_two_variable(const QFunction& f) {
  if (f.nvars() != 2) throw Error(ErrorKind::InvalidArgument, "two-variable function expected");
}

}  // namespace

Quaternion cf_integral2(const QFunction& f, const SphereGrid& grid_p, const SphereGrid& grid_q,
                        const Quaternion& p0, const Quaternion& q0) {
  check_two_variable(f);
  check_inside(grid_p, p0);
  check_inside(grid_q, q0);
  const auto wp = left_weights(grid_p, p0, 1.0);
  const auto wq = left_weights(grid_q, q0, 1.0);
  const std::size_t m = grid_q.size();
  const Quaternion s = parallel_sum_of<Quaternion>(grid_p.size() * m, [&](std::size_t idx) {
    const std::size_t n = idx / m;
    const std::size_t k = idx % m;
    return wp[n] * wq[k] * eval_pair(f, grid_p.nodes[n], grid_q.nodes[k]);
  });
  return s / (kTwoPiSquared * kTwoPiSquared);
}

Quaternion cf_integral2_nested(const QFunction& f, const SphereGrid& grid_p, const SphereGrid& grid_q,
                               const Quaternion& p0, const Quaternion& q0) {
  check_two_variable(f);
  check_inside(grid_q, q0);
  const auto wq = left_weights(grid_q, q0, 1.0);
  // the outer integrand is itself a q-integral, summed serially so that the
  // outer reduction owns the parallelism
  const SliceFunction outer = [&](const Quaternion& p) {
    std::vector<Quaternion> terms(grid_q.size());
    for (std::size_t k = 0; k < grid_q.size(); ++k) terms[k] = wq[k] * eval_pair(f, p, grid_q.nodes[k]);
    std::vector<Quaternion> blocks;
    for (std::size_t b = 0; b < terms.size(); b += kReductionBlock) {
      const std::size_t len = std::min(kReductionBlock, terms.size() - b);
      blocks.push_back(pairwise_sum(std::span<const Quaternion>(terms.data() + b, len)));
    }
    return pairwise_sum(blocks) / kTwoPiSquared;
  };
  return cf_integral(outer, grid_p, p0);
}

// ---------------------------------------------------------------- kernel moments

KernelMoments::KernelMoments(const SphereGrid& grid, int max_order)
    : grid_(std::make_shared<SphereGrid>(grid)), indices_(max_order) {
  if (grid.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty sphere grid");
  const std::size_t need = grid.size() * indices_.size();
  if (need <= kMomentCacheLimit) {
    s_cache_.resize(need);
    parallel_for(grid.size(), [&](std::size_t n) { fill_s(n, &s_cache_[n * indices_.size()]); });
  }
}

void KernelMoments::fill_s(std::size_t node, double* s) const {
  const Quaternion u0 = grid_->nodes[node] - grid_->center;
  const double r2 = norm2(u0);
  const std::array<double, 4> c1{-2.0 * u0.x0 / r2, -2.0 * u0.x1 / r2, -2.0 * u0.x2 / r2, -2.0 * u0.x3 / r2};
  const double c2 = 1.0 / r2;
  s[0] = 1.0;
  for (int k = 1; k <= indices_.max_order(); ++k) {
    const auto [begin, end] = indices_.shell(k);
    for (std::size_t i = begin; i < end; ++i) {
      double lin = 0.0;
      double quad = 0.0;
      for (int l = 0; l < 4; ++l) {
        const int m1 = indices_.minus_unit(i, l);
        if (m1 >= 0) lin += c1[static_cast<std::size_t>(l)] * s[m1];
        const int m2 = indices_.minus_two_units(i, l);
        if (m2 >= 0) quad += s[m2];
      }
      s[i] = (-(k + 1) * lin - (k + 2) * c2 * quad) / k;
    }
  }
  const double inv_r4 = 1.0 / (r2 * r2);
  for (std::size_t i = 0; i < indices_.size(); ++i) s[i] *= inv_r4;
}

std::vector<Quaternion> KernelMoments::kernel_coefficients(std::size_t node) const {
  std::vector<double> s(indices_.size());
  fill_s(node, s.data());
  const Quaternion cu0 = conj(grid_->nodes[node] - grid_->center);
  std::vector<Quaternion> t(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    Quaternion v = cu0 * s[i];
    for (int l = 0; l < 4; ++l) {
      const int m1 = indices_.minus_unit(i, l);
      if (m1 >= 0) v -= conj(Quaternion::unit(l)) * s[static_cast<std::size_t>(m1)];
    }
    t[i] = v;
  }
  return t;
}

std::vector<Quaternion> KernelMoments::coefficients(std::span<const Quaternion> values) const {
  const std::size_t nodes = grid_->size();
  if (values.size() != nodes) throw Error(ErrorKind::InvalidArgument, "one value per node expected");
  const std::size_t width = indices_.size();
  const std::size_t blocks = (nodes + kReductionBlock - 1) / kReductionBlock;
  // per block: P (s_alpha W) then Q (s_alpha conj(u0) W), 4 doubles each
  std::vector<double> partial(blocks * width * 8, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    std::vector<double> local_s(s_cache_.empty() ? width : 0);
    double* acc = &partial[b * width * 8];
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(nodes, begin + kReductionBlock);
    for (std::size_t n = begin; n < end; ++n) {
      const double* s = nullptr;
      if (s_cache_.empty()) {
        fill_s(n, local_s.data());
        s = local_s.data();
      } else {
        s = &s_cache_[n * width];
      }
      const Quaternion w = grid_->normal_form[n] * values[n];
      const Quaternion a = conj(grid_->nodes[n] - grid_->center) * w;
      const double wa[8] = {w.x0, w.x1, w.x2, w.x3, a.x0, a.x1, a.x2, a.x3};
      for (std::size_t i = 0; i < width; ++i) {
        double* row = acc + i * 8;
        const double si = s[i];
        for (int c = 0; c < 8; ++c) row[c] += si * wa[c];
      }
    }
  });
  // combine blocks pairwise, per entry
  std::vector<double> total(width * 8, 0.0);
  std::vector<double> column(blocks);
  for (std::size_t e = 0; e < width * 8; ++e) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = partial[b * width * 8 + e];
    total[e] = pairwise_sum(std::span<const double>(column));
  }
  std::vector<Quaternion> out(width);
  for (std::size_t i = 0; i < width; ++i) {
    const double* row = &total[i * 8];
    Quaternion v(row[4], row[5], row[6], row[7]);
    for (int l = 0; l < 4; ++l) {
      const int m1 = indices_.minus_unit(i, l);
      if (m1 < 0) continue;
      const double* pr = &total[static_cast<std::size_t>(m1) * 8];
      v -= conj(Quaternion::unit(l)) * Quaternion(pr[0], pr[1], pr[2], pr[3]);
    }
    out[i] = v / kTwoPiSquared;
  }
  return out;
}

std::vector<Quaternion> KernelMoments::coefficients(std::span<const Quaternion> values,
                                                    const Quaternion& centre_value) const {
  std::vector<Quaternion> shifted(values.begin(), values.end());
  for (auto& v : shifted) v -= centre_value;
  auto out = coefficients(shifted);
  out[0] += centre_value;
  return out;
}

std::vector<Quaternion> node_values(const SliceFunction& f, const SphereGrid& grid) {
  std::vector<Quaternion> v(grid.size());
  parallel_for(grid.size(), [&](std::size_t n) { v[n] = guarded_eval(f, grid.nodes[n]); });
  return v;
}

std::vector<Quaternion> node_values(const QFunction& f, const SphereGrid& grid) {
  return node_values(slice_of(f), grid);
}

std::vector<Quaternion> taylor_table_from_integral(const QFunction& f, const SphereGrid& grid, int order,
                                                   int cap) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative Taylor order");
  if (order > cap) {
    throw Error(ErrorKind::OrderTooHigh, "order " + std::to_string(order) + " exceeds cap " + std::to_string(cap));
  }
  const KernelMoments moments(grid, order);
  return moments.coefficients(node_values(f, grid));
}

Quaternion taylor_from_integral(const QFunction& f, const SphereGrid& grid, const MultiIndex& alpha, int cap) {
  for (int l = 0; l < 4; ++l) {
    if (alpha[l] < 0) throw Error(ErrorKind::InvalidArgument, "negative multi-index entry");
  }
  const auto table = taylor_table_from_integral(f, grid, alpha.order(), cap);
  return table[static_cast<std::size_t>(MultiIndexSet(alpha.order()).index_of(alpha))];
}

}  // namespace fueter
