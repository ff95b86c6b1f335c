#include <cmath>

#include "fueter/algebra.hpp"
#include "fueter/error.hpp"
#include "helpers.hpp"

using namespace fueter;
using testing::random_quaternion;

namespace {

// Left-multiplication matrix of p acting on (x0, x1, x2, x3).
Quaternion matrix_product(const Quaternion& p, const Quaternion& q) {
  const double m[4][4] = {{p.x0, -p.x1, -p.x2, -p.x3},
                          {p.x1, p.x0, -p.x3, p.x2},
                          {p.x2, p.x3, p.x0, -p.x1},
                          {p.x3, -p.x2, p.x1, p.x0}};
  double out[4] = {0, 0, 0, 0};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r] += m[r][c] * q[c];
  }
  return {out[0], out[1], out[2], out[3]};
}

}  // namespace

TEST_CASE("unit table") {
  const Quaternion one(1), i(0, 1), j(0, 0, 1), k(0, 0, 0, 1);
  CHECK(i * i == -one);
  CHECK(j * j == -one);
  CHECK(k * k == -one);
  CHECK(i * j == k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(j * i == -k);
  CHECK(i * j * k == -one);
}

TEST_CASE("product matches the matrix form") {
  Rng rng(11);
  for (int n = 0; n < 1000; ++n) {
    const auto p = random_quaternion(rng, 3.0);
    const auto q = random_quaternion(rng, 3.0);
    CHECK(max_abs_diff(p * q, matrix_product(p, q)) <= 1e-14);
  }
}

TEST_CASE("norm, conjugation and inverse") {
  Rng rng(12);
  for (int n = 0; n < 2000; ++n) {
    const auto p = random_quaternion(rng);
    const auto q = random_quaternion(rng);
    CHECK(std::abs(norm(p * q) - norm(p) * norm(q)) <= 1e-14);
    CHECK(max_abs_diff(conj(p * q), conj(q) * conj(p)) <= 1e-15);
    CHECK(max_abs_diff(p * conj(p), Quaternion(norm2(p))) <= 1e-15);
    CHECK(max_abs_diff(p * inverse(p), Quaternion(1.0)) <= 1e-12 / std::min(1.0, norm2(p)));
  }
}

TEST_CASE("inverse of zero throws") {
  CHECK_THROWS_AS(inverse(Quaternion{}), Error);
  try {
    inverse(Quaternion{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDivisor);
  }
}

TEST_CASE("biquaternions") {
  Rng rng(13);
  for (int n = 0; n < 200; ++n) {
    const auto a = random_quaternion(rng);
    const auto b = random_quaternion(rng);
    // real biquaternions multiply like quaternions
    const Biquaternion p = Biquaternion(a) * Biquaternion(b);
    CHECK(max_abs_diff(p.real_part(), a * b) <= 1e-15);
    CHECK(norm(p.imag_part()) == 0.0);
    // the quadratic norm of a real point is |a|^2
    CHECK(std::abs(bq_quadratic_norm(Biquaternion(a)) - Complex(norm2(a))) <= 1e-15);
    // bq_conj(x) x = quadratic norm
    const Biquaternion x{Complex(a.x0, b.x0), Complex(a.x1, b.x1), Complex(a.x2, b.x2), Complex(a.x3, b.x3)};
    const Biquaternion xx = bq_conj(x) * x;
    CHECK(std::abs(xx.c0 - bq_quadratic_norm(x)) <= 1e-14);
    CHECK(std::abs(xx.c1) + std::abs(xx.c2) + std::abs(xx.c3) <= 1e-14);
    CHECK(bq_euclidean_norm(x) == doctest::Approx(std::sqrt(norm2(a) + norm2(b))).epsilon(1e-14));
  }
}

TEST_CASE("multi-index sets") {
  for (int N : {0, 1, 4, 10}) {
    const MultiIndexSet s(N);
    // C(N + 4, 4)
    const std::size_t expected = static_cast<std::size_t>((N + 1) * (N + 2) * (N + 3) * (N + 4) / 24);
    CHECK(s.size() == expected);
    CHECK(MultiIndexSet::count_up_to(N) == expected);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.index_of(s[i]) == static_cast<int>(i));
      if (i > 0) CHECK(s[i - 1].order() <= s[i].order());
      for (int l = 0; l < 4; ++l) {
        const int m = s.minus_unit(i, l);
        if (s[i][l] == 0) {
          CHECK(m == -1);
        } else {
          REQUIRE(m >= 0);
          CHECK(s[static_cast<std::size_t>(m)][l] == s[i][l] - 1);
          CHECK(s[static_cast<std::size_t>(m)].order() == s[i].order() - 1);
        }
      }
    }
    for (int k = 0; k <= N; ++k) {
      const auto [b, e] = s.shell(k);
      CHECK(e - b == static_cast<std::size_t>((k + 1) * (k + 2) * (k + 3) / 6));
    }
  }
  CHECK(MultiIndexSet(3).index_of(MultiIndex(4, 0, 0, 0)) == -1);
  CHECK(factorial(10) == 3628800u);
  CHECK(MultiIndex(2, 0, 3, 1).factorial() == 12u);
  CHECK(MultiIndex(2, 0, 1, 0).monomial(Quaternion(3, 5, 7, 11)) == doctest::Approx(63.0));
}
