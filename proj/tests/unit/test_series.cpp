#include <cmath>
#include <limits>

#include "fueter/error.hpp"
#include "fueter/series.hpp"
#include "helpers.hpp"

using namespace fueter;
using testing::close;

namespace {

QFunction kernel_at(const Quaternion& c) {
  ZooParams zp;
  zp.center = c;
  return zoo("kernel", zp);
}

Quaternion kernel_oracle(const Quaternion& u) {
  const double r2 = u.x0 * u.x0 + u.x1 * u.x1 + u.x2 * u.x2 + u.x3 * u.x3;
  return Quaternion(u.x0, -u.x1, -u.x2, -u.x3) / (r2 * r2);
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("exact Taylor table of a polynomial round-trips") {
  PolyFunction p(1);
  p.add_term({2, 1, 0, 0}, Quaternion(1, 0, 2, 0));
  p.add_term({0, 0, 0, 3}, Quaternion(0, -1));
  p.add_term({1, 0, 0, 0}, Quaternion(0.5));
  const QFunction f(p);
  const Point c{Quaternion(0.2, -0.1, 0.3, 0.0)};
  const auto s = taylor_coeffs(f, c, 4);
  Rng rng(61);
  for (int n = 0; n < 20; ++n) {
    const Quaternion x = c[0] + testing::random_quaternion(rng, 0.3);
    const Point pt{x};
    const auto v = evaluate(s, x);
    CHECK(close(v.value, f.evaluate(pt), 1e-13));
  }
  // a_(2,1,0,0) at the origin is the coefficient itself
  const auto s0 = taylor_coeffs(f, Point{Quaternion{}}, 4);
  CHECK(close(s0.coeff(MultiIndex(2, 1, 0, 0)), Quaternion(1, 0, 2, 0), 1e-15));
  CHECK(close(s0.coeff(MultiIndex(9, 0, 0, 0)), Quaternion{}, 0.0));
  CHECK(radius_estimate(taylor_coeffs(f, c, 8)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("finite-difference table matches the kernel expansion") {
  // along x0 the kernel at c = 2 is -(1/8) C(k+2, 2) / 2^k
  const auto k = kernel_at(Quaternion(2.0));
  TaylorOptions fd;
  fd.method = TaylorMethod::FiniteDifference;
  const auto s = taylor_coeffs(k, Point{Quaternion{}}, 8, fd);
  for (int n = 0; n <= 8; ++n) {
    const double want = -0.125 * (n + 2) * (n + 1) / 2.0 / std::pow(2.0, n);
    CHECK(std::abs(s.coeff(MultiIndex(n, 0, 0, 0)).x0 - want) <= 1e-6 * std::max(1.0, std::abs(want)));
  }
  // the Taylor sum reproduces the kernel inside the cube
  const Quaternion x(0.1, 0.05, -0.05, 0.02);
  const Point pt{x};
  CHECK(close(evaluate(s, x).value, kernel_oracle(x - Quaternion(2.0)), 1e-6));
  CHECK(close(k.evaluate(pt), kernel_oracle(x - Quaternion(2.0)), 1e-15));
}

TEST_CASE("integral and finite-difference routes agree") {
  const auto k = kernel_at(Quaternion(0.0, 2.0, 0.0, 0.0));
  TaylorOptions fd, in;
  fd.method = TaylorMethod::FiniteDifference;
  in.method = TaylorMethod::Integral;
  const auto a = taylor_coeffs(k, Point{Quaternion{}}, 6, fd);
  const auto b = taylor_coeffs(k, Point{Quaternion{}}, 6, in);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    CHECK(max_abs_diff(a.coeffs[i], b.coeffs[i]) <= 1e-6);
  }
}

TEST_CASE("order limits") {
  const auto k = kernel_at(Quaternion(2.0));
  TaylorOptions fd;
  fd.method = TaylorMethod::FiniteDifference;
  CHECK(kind_of([&] { taylor_coeffs(k, Point{Quaternion{}}, 13, fd); }) == ErrorKind::OrderTooHigh);
  TaylorOptions exact;
  exact.method = TaylorMethod::Exact;
  CHECK_THROWS_AS(taylor_coeffs(k, Point{Quaternion{}}, 4, exact), Error);
  const auto s = taylor_coeffs(k, Point{Quaternion{}}, 6);
  CHECK(kind_of([&] { radius_estimate(s); }) == ErrorKind::InsufficientOrder);
}

TEST_CASE("finite differences need the stencil inside the domain") {
  const auto k = kernel_at(Quaternion(2.0));
  TaylorOptions fd;
  fd.method = TaylorMethod::FiniteDifference;
  fd.fd_half_width = 0.5;
  CHECK(kind_of([&] { taylor_coeffs(k, Point{Quaternion(1.8)}, 4, fd); }) == ErrorKind::OutOfDomain);
}

TEST_CASE("Chebyshev derivative weights recover monomials") {
  std::vector<double> nodes, w;
  const int pts = 12, order = 6;
  chebyshev_derivative_weights(pts, order, 0.4, nodes, w);
  REQUIRE(nodes.size() == static_cast<std::size_t>(pts + 1));
  for (int d = 0; d <= order; ++d) {
    for (int k = 0; k <= order; ++k) {
      double c = 0.0;
      for (int j = 0; j <= pts; ++j) c += w[static_cast<std::size_t>(k * (pts + 1) + j)] * std::pow(nodes[j], d);
      CHECK(std::abs(c - (k == d ? 1.0 : 0.0)) <= 1e-9);
    }
  }
}

TEST_CASE("radius estimate on bounded regular functions") {
  for (double R : {1.0, 2.0}) {
    const auto k = kernel_at(Quaternion(0.0, 0.0, 0.0, R));
    const Point c{Quaternion{}};
    const auto r = check_radius_lower_bound(k, c, R, 10);
    CHECK(r.passed);
    CHECK(r.bound == doctest::Approx(kSqrt2Minus1 * R * 0.85));
    CHECK(r.estimate >= r.bound);
  }
  const auto r2 = check_radius_lower_bound(kernel_at(Quaternion(2.0)), Point{Quaternion{}}, 2.0, 10);
  CHECK(r2.estimate == doctest::Approx(0.9635).epsilon(2e-3));
}

TEST_CASE("coefficient growth on the kernel example") {
  const auto k = kernel_at(Quaternion(2.0));
  const auto s = taylor_coeffs(k, Point{Quaternion{}}, 10);
  // sup over B_1 of |G(p - 2)| is 1
  const auto g = coeff_growth_check(s, 1.0, 1.0);
  CHECK(g.passed);
  CHECK(g.growth <= g.growth_limit);
  CHECK(g.growth_limit == doctest::Approx(2.0 / kSqrt2Minus1 * 1.1));
  CHECK(g.c_fit <= g.c_limit);
}

TEST_CASE("kernel series partial sums") {
  const Quaternion p(1.0);
  const Quaternion p0(0.3);
  CHECK(close(kernel_series_partial_sum(p, p0, 200), kernel_oracle(p - p0), 1e-6));
  // off the real axis, still inside the region
  const Quaternion q(0.0, 1.0, 0.0, 0.0), q0(0.1, 0.0, 0.2, 0.0);
  CHECK(close(kernel_series_partial_sum(q, q0, 200), kernel_oracle(q - q0), 1e-6));
  CHECK(kind_of([&] { kernel_series_partial_sum(p, Quaternion(0.42), 200); }) ==
        ErrorKind::OutsideConvergenceRegion);
  // errors shrink with N
  const double e10 = norm(kernel_series_partial_sum(p, p0, 10) - kernel_oracle(p - p0));
  const double e40 = norm(kernel_series_partial_sum(p, p0, 40) - kernel_oracle(p - p0));
  CHECK(e40 < e10);
}

TEST_CASE("evaluate flags") {
  const auto k = kernel_at(Quaternion(2.0));
  auto s = taylor_coeffs(k, Point{Quaternion{}}, 10);
  s.radius_estimate = radius_estimate(s);
  CHECK_FALSE(evaluate(s, Quaternion(0.1)).outside_cube);
  const auto far = evaluate(s, Quaternion(1.9, 0.0, 0.0, 0.0));
  CHECK(far.outside_cube);
  CHECK(far.shell_norms.size() == 11);
}
