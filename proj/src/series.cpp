#include "fueter/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fueter/error.hpp"
#include "fueter/parallel.hpp"

namespace fueter {

Quaternion TaylorSeries::coeff(const MultiIndex& alpha) const {
  const int i = indices.index_of(alpha);
  return i < 0 ? Quaternion{} : coeffs[static_cast<std::size_t>(i)];
}

double TaylorSeries::shell_max(int k) const {
  const auto [begin, end] = indices.shell(k);
  double m = 0.0;
  for (std::size_t i = begin; i < end; ++i) m = std::max(m, norm(coeffs[i]));
  return m;
}

TaylorSeries make_series(int nvars, int variable, Point base_point, int order) {
  if (nvars < 1 || nvars > kMaxVariables) throw Error(ErrorKind::InvalidArgument, "nvars must be 1 or 2");
  if (variable < 0 || variable >= nvars) throw Error(ErrorKind::InvalidArgument, "variable index out of range");
  if (static_cast<int>(base_point.size()) != nvars) {
    throw Error(ErrorKind::InvalidArgument, "base point has the wrong number of components");
  }
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative Taylor order");
  TaylorSeries s;
  s.nvars = nvars;
  s.variable = variable;
  s.base_point = std::move(base_point);
  s.order = order;
  s.indices = MultiIndexSet(order);
  s.coeffs.assign(s.indices.size(), Quaternion{});
  return s;
}

// ---------------------------------------------------------------- coefficient routes

void chebyshev_derivative_weights(int points, int order, double half_width, std::vector<double>& nodes,
                                  std::vector<double>& weights) {
  if (points < order) throw Error(ErrorKind::InvalidArgument, "Chebyshev stencil degree below Taylor order");
  if (!(half_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "stencil half-width must be positive");
  const int m = points + 1;
  // monomial coefficients of T_0 .. T_points
  std::vector<std::vector<double>> mono(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  mono[0][0] = 1.0;
  if (m > 1) mono[1][1] = 1.0;
  for (int n = 2; n < m; ++n) {
    for (int k = 0; k < m; ++k) {
      double v = -mono[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(k)];
      if (k > 0) v += 2.0 * mono[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)];
      mono[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = v;
    }
  }
  nodes.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<double> theta(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    theta[static_cast<std::size_t>(j)] = (j + 0.5) * std::numbers::pi / m;
    nodes[static_cast<std::size_t>(j)] = half_width * std::cos(theta[static_cast<std::size_t>(j)]);
  }
  weights.assign(static_cast<std::size_t>((order + 1) * m), 0.0);
  for (int k = 0; k <= order; ++k) {
    const double hk = std::pow(half_width, k);
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int n = k; n < m; ++n) {
        const double mk = mono[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
        if (mk == 0.0) continue;
        const double cn = (n == 0 ? 1.0 : 2.0) / m * std::cos(n * theta[static_cast<std::size_t>(j)]);
        acc += mk * cn;
      }
      weights[static_cast<std::size_t>(k * m + j)] = acc / hk;
    }
  }
}

namespace {

Point with_variable(PointView base, int variable, const Quaternion& x) {
  Point p(base.begin(), base.end());
  p[static_cast<std::size_t>(variable)] = x;
  return p;
}

void exact_table(const PolyFunction& poly, TaylorSeries& s) {
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    const MultiIndex& alpha = s.indices[i];
    PolyFunction d = poly;
    for (int l = 0; l < 4; ++l) {
      for (int e = 0; e < alpha[l]; ++e) d = d.derivative(4 * s.variable + l);
    }
    s.coeffs[i] = d.evaluate(s.base_point) / static_cast<double>(alpha.factorial());
  }
}

void fd_table(const QFunction& f, TaylorSeries& s, const TaylorOptions& opt) {
  if (s.order > kFdOrderCap) {
    throw Error(ErrorKind::OrderTooHigh, "finite-difference Taylor order " + std::to_string(s.order) +
                                             " exceeds " + std::to_string(kFdOrderCap));
  }
  const double w = opt.fd_half_width > 0.0 ? opt.fd_half_width : 0.3 * f.scale();
  std::vector<double> x, W;
  chebyshev_derivative_weights(opt.fd_points, s.order, w, x, W);
  const std::size_t m = x.size();
  const std::size_t K = static_cast<std::size_t>(s.order) + 1;
  const Quaternion c = s.center();

  // values on the m^4 tensor grid, layout [j0][j1][j2][j3][component]
  const std::size_t total = m * m * m * m;
  std::vector<double> values(total * 4);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t r = idx;
    const std::size_t j3 = r % m;
    r /= m;
    const std::size_t j2 = r % m;
    r /= m;
    const std::size_t j1 = r % m;
    const std::size_t j0 = r / m;
    const Point p = with_variable(s.base_point, s.variable, c + Quaternion(x[j0], x[j1], x[j2], x[j3]));
    if (!f.in_domain(p)) {
      throw Error(ErrorKind::OutOfDomain, "Chebyshev stencil of half-width " + std::to_string(w) +
                                              " leaves the domain of " + f.name());
    }
    const Quaternion v = f.evaluate(p);
    for (int l = 0; l < 4; ++l) values[idx * 4 + static_cast<std::size_t>(l)] = v[l];
  });

  // contract one axis at a time: dims (d0, d1, d2, d3) shrink from m to K
  std::array<std::size_t, 4> dims{m, m, m, m};
  std::vector<double> cur = std::move(values);
  for (int axis = 0; axis < 4; ++axis) {
    std::array<std::size_t, 4> nd = dims;
    nd[static_cast<std::size_t>(axis)] = K;
    std::size_t outer = 1;
    for (int a = 0; a < axis; ++a) outer *= dims[static_cast<std::size_t>(a)];
    std::size_t inner = 4;
    for (int a = axis + 1; a < 4; ++a) inner *= dims[static_cast<std::size_t>(a)];
    const std::size_t len = dims[static_cast<std::size_t>(axis)];
    std::vector<double> next(outer * K * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t k = 0; k < K; ++k) {
        double* dst = &next[(o * K + k) * inner];
        for (std::size_t j = 0; j < len; ++j) {
          const double wk = W[k * m + j];
          const double* src = &cur[(o * len + j) * inner];
          for (std::size_t t = 0; t < inner; ++t) dst[t] += wk * src[t];
        }
      }
    }
    cur = std::move(next);
    dims = nd;
  }
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    const MultiIndex& a = s.indices[i];
    const std::size_t base =
        ((((static_cast<std::size_t>(a[0]) * K + static_cast<std::size_t>(a[1])) * K + static_cast<std::size_t>(a[2])) * K +
          static_cast<std::size_t>(a[3])) *
         4);
    s.coeffs[i] = Quaternion(cur[base], cur[base + 1], cur[base + 2], cur[base + 3]);
  }
}

void integral_table(const QFunction& f, TaylorSeries& s, const TaylorOptions& opt) {
  if (s.order > opt.integral_cap) {
    throw Error(ErrorKind::OrderTooHigh, "integral Taylor order " + std::to_string(s.order) + " exceeds cap " +
                                             std::to_string(opt.integral_cap));
  }
  const double radius = opt.integral_radius > 0.0 ? opt.integral_radius : 0.5 * f.scale();
  const SphereGrid grid = sphere_grid(s.center(), radius, opt.integral_resolution);
  const Point base = s.base_point;
  const int var = s.variable;
  const SliceFunction slice = [&f, &base, var](const Quaternion& x) {
    const Point p = with_variable(base, var, x);
    if (!f.in_domain(p)) throw Error(ErrorKind::OutOfDomain, f.name() + " is not defined on the Taylor sphere");
    return f.evaluate(p);
  };
  const KernelMoments moments(grid, s.order);
  s.coeffs = moments.coefficients(node_values(slice, grid));
}

}  // namespace

TaylorSeries taylor_coeffs(const QFunction& f, PointView base_point, int order, const TaylorOptions& opt) {
  TaylorSeries s = make_series(f.nvars(), opt.variable, Point(base_point.begin(), base_point.end()), order);
  TaylorMethod method = opt.method;
  if (method == TaylorMethod::Auto) method = f.as_poly() ? TaylorMethod::Exact : TaylorMethod::FiniteDifference;
  switch (method) {
    case TaylorMethod::Exact:
      if (f.as_poly() == nullptr) throw Error(ErrorKind::InvalidArgument, "exact Taylor table needs a polynomial");
      exact_table(*f.as_poly(), s);
      break;
    case TaylorMethod::FiniteDifference: fd_table(f, s, opt); break;
    case TaylorMethod::Integral: integral_table(f, s, opt); break;
    case TaylorMethod::Auto: break;
  }
  if (order >= 8) s.radius_estimate = radius_estimate(s);
  return s;
}

// ---------------------------------------------------------------- radius and growth

double radius_estimate(const TaylorSeries& s, int shell_min) {
  if (shell_min < 1) throw Error(ErrorKind::InvalidArgument, "shell_min must be at least 1");
  if (s.order < shell_min + 4) {
    throw Error(ErrorKind::InsufficientOrder, "order " + std::to_string(s.order) + " below shell_min + 4 = " +
                                                  std::to_string(shell_min + 4));
  }
  double worst = 0.0;
  for (int k = shell_min; k <= s.order; ++k) {
    const double m = s.shell_max(k);
    if (m > 0.0) worst = std::max(worst, std::pow(m, 1.0 / k));
  }
  return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

RadiusReport check_radius_lower_bound(const QFunction& f, PointView center, double R, int order,
                                      const TaylorOptions& opt, double slack) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  const TaylorSeries s = taylor_coeffs(f, center, order, opt);
  RadiusReport r;
  r.estimate = radius_estimate(s);
  r.radius = R;
  r.order = order;
  r.bound = kSqrt2Minus1 * R * (1.0 - slack);
  r.passed = r.estimate >= r.bound;
  return r;
}

GrowthReport coeff_growth_check(const TaylorSeries& s, double M, double R) {
  if (!(M > 0.0) || !(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "M and R must be positive");
  if (s.order < 2) throw Error(ErrorKind::InsufficientOrder, "growth check needs order >= 2");
  GrowthReport g;
  const double rho = kSqrt2Minus1 * R / 2.0;
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    const double v = norm(s.coeffs[i]) * std::pow(rho, s.indices[i].order()) / M;
    g.c_fit = std::max(g.c_fit, v);
  }
  // least squares of log shell_max(k) on k over the nonzero shells k >= 1
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  int count = 0;
  for (int k = 1; k <= s.order; ++k) {
    const double m = s.shell_max(k);
    if (!(m > 0.0)) continue;
    const double y = std::log(m);
    sk += k;
    sy += y;
    skk += static_cast<double>(k) * k;
    sky += k * y;
    ++count;
  }
  if (count >= 2) {
    const double slope = (count * sky - sk * sy) / (count * skk - sk * sk);
    g.growth = std::exp(slope);
  }
  g.growth_limit = 2.0 / (kSqrt2Minus1 * R) * 1.1;
  g.passed = g.c_fit <= g.c_limit && g.growth <= g.growth_limit;
  return g;
}

// ---------------------------------------------------------------- kernel series

Quaternion kernel_series_partial_sum(const Quaternion& p, const Quaternion& p0, int N) {
  if (N < 1 || N > 1000) throw Error(ErrorKind::InvalidArgument, "series order must lie in [1, 1000]");
  const Quaternion pinv = inverse(p);
  const Quaternion w = pinv * p0;
  const double w2 = norm2(w);
  const double re = w.x0;
  if (!(w2 + 2.0 * std::abs(re) < 1.0)) {
    throw Error(ErrorKind::OutsideConvergenceRegion,
                "|w|^2 + 2|Re w| = " + std::to_string(w2 + 2.0 * std::abs(re)) + " is not below 1");
  }
  const double a = -w2;
  const double b = 2.0 * re;
  double total = 0.0;
  std::vector<double> binom{1.0};  // row n - 1 of Pascal's triangle
  for (int n = 1; n <= N; ++n) {
    if (n > 1) {
      std::vector<double> row(static_cast<std::size_t>(n), 1.0);
      for (int k = 1; k < n - 1; ++k) {
        row[static_cast<std::size_t>(k)] = binom[static_cast<std::size_t>(k - 1)] + binom[static_cast<std::size_t>(k)];
      }
      binom = std::move(row);
    }
    double inner = 0.0;
    for (int k = 0; k < n; ++k) {
      inner += binom[static_cast<std::size_t>(k)] * std::pow(a, k) * std::pow(b, n - 1 - k);
    }
    total += n * inner;
  }
  const double p2 = norm2(p);
  return conj(p) * (Quaternion{1.0} - conj(p0 * pinv)) * (total / (p2 * p2));
}

SeriesValue evaluate(const TaylorSeries& s, const Quaternion& x) {
  const Quaternion h = x - s.center();
  SeriesValue out;
  out.shell_norms.assign(static_cast<std::size_t>(s.order) + 1, 0.0);
  for (int k = 0; k <= s.order; ++k) {
    const auto [begin, end] = s.indices.shell(k);
    Quaternion shell;
    for (std::size_t i = begin; i < end; ++i) shell += s.coeffs[i] * s.indices[i].monomial(h);
    out.shell_norms[static_cast<std::size_t>(k)] = norm(shell);
    out.value += shell;
  }
  if (s.radius_estimate) {
    const double side = std::max({std::abs(h.x0), std::abs(h.x1), std::abs(h.x2), std::abs(h.x3)});
    out.outside_cube = side > *s.radius_estimate;
  }
  if (s.order >= 2) {
    const auto& sn = out.shell_norms;
    const std::size_t n = sn.size() - 1;
    out.diverging = sn[n] > sn[n - 1] && sn[n - 1] > sn[n - 2] && sn[n] > 1e-14 * norm(out.value);
  }
  return out;
}

}  // namespace fueter
