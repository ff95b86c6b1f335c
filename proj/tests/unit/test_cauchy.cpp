#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fueter/cauchy.hpp"
#include "fueter/error.hpp"
#include "helpers.hpp"

using namespace fueter;
using testing::close;

namespace {

constexpr double kPi = std::numbers::pi;

QFunction kernel_at(const Quaternion& c) {
  ZooParams zp;
  zp.center = c;
  return zoo("kernel", zp);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("sphere grid invariants") {
  for (int res : {8, 16, 24}) {
    for (double R : {0.5, 1.0, 2.5}) {
      const Quaternion c(0.1, -0.2, 0.3, 0.4);
      const auto g = sphere_grid(c, R, res);
      CHECK(g.size() == static_cast<std::size_t>(2 * res * res * res));
      double wsum = 0.0;
      for (std::size_t n = 0; n < g.size(); ++n) {
        const Quaternion u = g.nodes[n] - c;
        CHECK(std::abs(norm(u) - R) <= 1e-12 * R);
        CHECK(g.weights[n] > 0.0);
        CHECK(max_abs_diff(g.normal_form[n], u / R * g.weights[n]) <= 1e-15 * R * R * R);
        wsum += g.weights[n];
      }
      CHECK(std::abs(wsum - 2.0 * kPi * kPi * R * R * R) <= 1e-10 * 2.0 * kPi * kPi * R * R * R);
    }
  }
  CHECK_THROWS_AS(sphere_grid(Quaternion{}, 1.0, 7), Error);
  CHECK_THROWS_AS(sphere_grid(Quaternion{}, 0.0, 8), Error);
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  std::vector<double> x, w;
  gauss_legendre(6, x, w);
  for (int d = 0; d <= 11; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-14));
  }
}

TEST_CASE("orientation of D") {
  const auto g = sphere_grid(Quaternion{}, 1.0, 16);
  const SliceFunction one = [](const Quaternion&) { return Quaternion(1.0); };
  CHECK(close(cf_integral(one, g, Quaternion{}), Quaternion(1.0), 1e-12));
  CHECK(close(cf_integral_reversed(one, g, Quaternion{}), Quaternion(-1.0), 1e-12));
}

TEST_CASE("reconstruction of the kernel and Fueter variables") {
  const auto g = sphere_grid(Quaternion{}, 1.0, 32);
  const auto k = kernel_at(Quaternion(0.0, 2.0, 0.0, 0.0));
  const auto pts = sample_region(SampleRegion::ball(0.7), 10, 3);
  for (const auto& p : pts) {
    const Quaternion u = p[0] - Quaternion(0.0, 2.0, 0.0, 0.0);
    const Quaternion truth = conj(u) / (norm2(u) * norm2(u));
    CHECK(close(cf_integral(k, g, p[0]), truth, 1e-6));
    for (int i = 1; i <= 3; ++i) {
      ZooParams zp;
      zp.index = i;
      const Quaternion fv = Quaternion::unit(i) * (-p[0].x0) + Quaternion(p[0][i]);
      CHECK(close(cf_integral(zoo("fueter_variable", zp), g, p[0]), fv, 1e-6));
    }
  }
  // example point 0.3 on the real axis
  ZooParams z1;
  z1.index = 1;
  CHECK(close(cf_integral(zoo("fueter_variable", z1), g, Quaternion(0.3)), Quaternion(0.0, -0.3), 1e-6));
}

TEST_CASE("error falls with resolution") {
  const auto k = kernel_at(Quaternion(2.0));
  const Quaternion p0(0.4, 0.2, -0.1, 0.3);
  const Quaternion pt[1] = {p0};
  const Quaternion truth = k.evaluate(pt);
  double prev = 1e300;
  for (int res : {8, 12, 16, 24}) {
    const double e = norm(cf_integral(k, sphere_grid(Quaternion{}, 1.0, res), p0) - truth);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev <= 1e-8);
}

TEST_CASE("constant at the centre at the coarsest resolution") {
  const auto g = sphere_grid(Quaternion{}, 1.0, 8);
  CHECK(close(cf_integral(zoo("constant"), g, Quaternion{}), Quaternion(1.0), 1e-8));
}

TEST_CASE("points on or outside the sphere are rejected") {
  const auto g = sphere_grid(Quaternion{}, 1.0, 8);
  for (const Quaternion p : {Quaternion(1.0), Quaternion(0.0, 0.0, 1.5)}) {
    try {
      cf_integral(zoo("constant"), g, p);
      FAIL("no exception");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::PointOnOrOutsideSphere);
    }
  }
}

TEST_CASE("evaluation failures surface") {
  const auto g = sphere_grid(Quaternion{}, 1.0, 8);
  // kernel singular inside the sphere
  try {
    cf_integral(kernel_at(Quaternion(0.5)), g, Quaternion{});
    FAIL("no exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EvaluationFailure);
  }
}

TEST_CASE("identity is not reproduced") {
  const auto g = sphere_grid(Quaternion{}, 1.0, 32);
  double worst = 0.0;
  for (const auto& p : sample_region(SampleRegion::ball(0.7), 20, 4)) {
    const Quaternion pt[1] = {p[0]};
    worst = std::max(worst, norm(cf_integral(zoo("identity"), g, p[0]) - zoo("identity").evaluate(pt)));
  }
  CHECK(worst >= 0.1);
}

TEST_CASE("discrete Fubini") {
  const auto gp = sphere_grid(Quaternion{}, 1.0, 8);
  const auto gq = sphere_grid(Quaternion(0.1), 0.8, 8);
  ZooParams zp;
  zp.index = 3;
  for (const auto& f : {zoo("product_regular", zp), zoo("bounded_strip_regular")}) {
    const Quaternion p0(0.2, 0.1, 0.0, -0.1), q0(0.0, 0.2, 0.2, 0.0);
    const Quaternion a = cf_integral2(f, gp, gq, p0, q0);
    const Quaternion b = cf_integral2_nested(f, gp, gq, p0, q0);
    CHECK(max_abs_diff(a, b) <= 1e-10 * std::max(1.0, norm(a)));
  }
}

TEST_CASE("Taylor coefficients from the integral: kernel on the real axis") {
  // along x0, G(x0 - 2) = (x0 - 2)^-3 = -1/8 sum C(k+2, 2) (x0/2)^k
  const auto k = kernel_at(Quaternion(2.0));
  const auto g = sphere_grid(Quaternion{}, 1.0, 32);
  const auto table = taylor_table_from_integral(k, g, 10);
  const MultiIndexSet idx(10);
  for (int n = 0; n <= 10; ++n) {
    const Quaternion a = table[static_cast<std::size_t>(idx.index_of(MultiIndex(n, 0, 0, 0)))];
    const double want = -binomial(n + 2, 2) / (8.0 * std::pow(2.0, n));
    CHECK(std::abs(a.x0 - want) <= 1e-9);
    CHECK(std::abs(a.x1) + std::abs(a.x2) + std::abs(a.x3) <= 1e-9);
  }
  CHECK_THROWS_AS(taylor_from_integral(k, g, MultiIndex(13, 0, 0, 0)), Error);
}

TEST_CASE("kernel moments: centre subtraction changes nothing in exact arithmetic") {
  const auto k = kernel_at(Quaternion(0.0, 0.0, 2.0, 0.0));
  const auto g = sphere_grid(Quaternion(0.1), 0.5, 24);
  const KernelMoments m(g, 6);
  const auto values = node_values(k, g);
  const Quaternion c[1] = {Quaternion(0.1)};
  const auto plain = m.coefficients(values);
  const auto shifted = m.coefficients(values, k.evaluate(c));
  for (std::size_t i = 0; i < plain.size(); ++i) {
    CHECK(max_abs_diff(plain[i], shifted[i]) <= 1e-10 * std::pow(2.0 / 0.5, m.indices()[i].order()));
  }
}

TEST_CASE("grid csv") {
  std::ostringstream out;
  write_grid_csv(sphere_grid(Quaternion{}, 1.0, 8), out);
  const std::string s = out.str();
  CHECK(s.rfind("node_x0,node_x1,node_x2,node_x3,weight,normal_x0,normal_x1,normal_x2,normal_x3\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 1024);
}
