#pragma once

/**
 * @file algebra.hpp
 * @brief Quaternions, biquaternions (C tensor H) and multi-index bookkeeping.
 *
 * A quaternion p = x0 + x1 i + x2 j + x3 k is stored in coordinate order
 * (x0, x1, x2, x3); x0 is always the real part. Multiplication follows
 *   i^2 = j^2 = k^2 = -1,  ij = -ji = k,  jk = -kj = i,  ki = -ik = j.
 *
 * Biquaternions use the same unit table with std::complex coefficients. The
 * complex unit commutes with i, j, k, so a biquaternion is a point of C^4.
 */

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace fueter {

inline constexpr double kZeroDivisorFloor = 1e-300;

struct Quaternion {
  double x0{0.0}, x1{0.0}, x2{0.0}, x3{0.0};

  constexpr Quaternion() = default;
  constexpr Quaternion(double a0, double a1 = 0.0, double a2 = 0.0, double a3 = 0.0)
      : x0{a0}, x1{a1}, x2{a2}, x3{a3} {}

  static constexpr Quaternion unit(int l) {
    Quaternion e;
    e[l] = 1.0;
    return e;
  }

  constexpr double& operator[](int l) {
    switch (l) {
      case 0: return x0;
      case 1: return x1;
      case 2: return x2;
      default: return x3;
    }
  }
  constexpr double operator[](int l) const {
    switch (l) {
      case 0: return x0;
      case 1: return x1;
      case 2: return x2;
      default: return x3;
    }
  }

  constexpr bool operator==(const Quaternion&) const = default;

  constexpr Quaternion operator+(const Quaternion& o) const {
    return {x0 + o.x0, x1 + o.x1, x2 + o.x2, x3 + o.x3};
  }
  constexpr Quaternion operator-(const Quaternion& o) const {
    return {x0 - o.x0, x1 - o.x1, x2 - o.x2, x3 - o.x3};
  }
  constexpr Quaternion operator-() const { return {-x0, -x1, -x2, -x3}; }

  // Hamilton product
  constexpr Quaternion operator*(const Quaternion& o) const {
    return {x0 * o.x0 - x1 * o.x1 - x2 * o.x2 - x3 * o.x3,
            x0 * o.x1 + x1 * o.x0 + x2 * o.x3 - x3 * o.x2,
            x0 * o.x2 - x1 * o.x3 + x2 * o.x0 + x3 * o.x1,
            x0 * o.x3 + x1 * o.x2 - x2 * o.x1 + x3 * o.x0};
  }
  constexpr Quaternion operator*(double s) const { return {x0 * s, x1 * s, x2 * s, x3 * s}; }
  constexpr Quaternion operator/(double s) const { return {x0 / s, x1 / s, x2 / s, x3 / s}; }

  constexpr Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
  constexpr Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }
  constexpr Quaternion& operator*=(double s) { return *this = *this * s; }

  constexpr double real() const { return x0; }
};

constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

constexpr Quaternion mul(const Quaternion& p, const Quaternion& q) { return p * q; }
constexpr Quaternion conj(const Quaternion& p) { return {p.x0, -p.x1, -p.x2, -p.x3}; }
constexpr double norm2(const Quaternion& p) {
  return p.x0 * p.x0 + p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3;
}
double norm(const Quaternion& p);
constexpr double dot(const Quaternion& p, const Quaternion& q) {
  return p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3;
}

/// conj(p) / |p|^2; throws ZeroDivisor when |p|^2 < floor.
Quaternion inverse(const Quaternion& p, double floor = kZeroDivisorFloor);

/// Largest absolute coordinate difference.
double max_abs_diff(const Quaternion& a, const Quaternion& b);

using Complex = std::complex<double>;

struct Biquaternion {
  Complex c0{}, c1{}, c2{}, c3{};

  constexpr Biquaternion() = default;
  constexpr Biquaternion(Complex a0, Complex a1 = {}, Complex a2 = {}, Complex a3 = {})
      : c0{a0}, c1{a1}, c2{a2}, c3{a3} {}
  constexpr explicit Biquaternion(const Quaternion& q) : c0{q.x0}, c1{q.x1}, c2{q.x2}, c3{q.x3} {}

  Complex& operator[](int l);
  const Complex& operator[](int l) const;

  bool operator==(const Biquaternion&) const = default;

  Biquaternion operator+(const Biquaternion& o) const {
    return {c0 + o.c0, c1 + o.c1, c2 + o.c2, c3 + o.c3};
  }
  Biquaternion operator-(const Biquaternion& o) const {
    return {c0 - o.c0, c1 - o.c1, c2 - o.c2, c3 - o.c3};
  }
  Biquaternion operator-() const { return {-c0, -c1, -c2, -c3}; }
  Biquaternion operator*(const Biquaternion& o) const;
  Biquaternion operator*(Complex s) const { return {c0 * s, c1 * s, c2 * s, c3 * s}; }
  Biquaternion operator/(Complex s) const { return {c0 / s, c1 / s, c2 / s, c3 / s}; }
  Biquaternion& operator+=(const Biquaternion& o) { return *this = *this + o; }

  /// Real parts / imaginary parts as quaternions.
  Quaternion real_part() const { return {c0.real(), c1.real(), c2.real(), c3.real()}; }
  Quaternion imag_part() const { return {c0.imag(), c1.imag(), c2.imag(), c3.imag()}; }
};

inline Biquaternion operator*(Complex s, const Biquaternion& b) { return b * s; }

inline Biquaternion bq_mul(const Biquaternion& a, const Biquaternion& b) { return a * b; }
/// Quaternionic conjugation (negates the i, j, k coefficients; no complex conjugation).
Biquaternion bq_conj(const Biquaternion& a);
/// Sum of squared coordinates c0^2 + c1^2 + c2^2 + c3^2 (complex, not Hermitian).
Complex bq_quadratic_norm(const Biquaternion& x);
/// Euclidean norm on the 8 real components.
double bq_euclidean_norm(const Biquaternion& x);

/// Exponent tuple over the four real coordinates of one quaternionic variable.
struct MultiIndex {
  std::array<int, 4> a{0, 0, 0, 0};

  constexpr MultiIndex() = default;
  constexpr MultiIndex(int a0, int a1, int a2, int a3) : a{a0, a1, a2, a3} {}

  constexpr int order() const { return a[0] + a[1] + a[2] + a[3]; }
  constexpr int operator[](int l) const { return a[static_cast<std::size_t>(l)]; }
  constexpr bool operator==(const MultiIndex&) const = default;
  constexpr auto operator<=>(const MultiIndex&) const = default;

  /// a0! a1! a2! a3! in exact integer arithmetic (orders up to 20).
  std::uint64_t factorial() const;
  /// x^alpha for the real coordinates of q.
  double monomial(const Quaternion& q) const;
};

std::uint64_t factorial(int n);

/**
 * All multi-indices with |alpha| <= N, listed shell by shell (increasing
 * order, lexicographically decreasing inside a shell). Offers O(1) lookup and
 * the predecessor tables used by the kernel-moment recurrences.
 */
class MultiIndexSet {
 public:
  explicit MultiIndexSet(int max_order);

  int max_order() const { return max_order_; }
  std::size_t size() const { return list_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return list_[i]; }
  const std::vector<MultiIndex>& indices() const { return list_; }

  /// Position of alpha, or -1 when |alpha| > max_order or any exponent is negative.
  int index_of(const MultiIndex& alpha) const;
  /// Half-open range [begin, end) of positions with |alpha| == k.
  std::pair<std::size_t, std::size_t> shell(int k) const;
  /// Position of alpha - e_l (or -1).
  int minus_unit(std::size_t i, int l) const { return minus1_[i][static_cast<std::size_t>(l)]; }
  /// Position of alpha - 2 e_l (or -1).
  int minus_two_units(std::size_t i, int l) const { return minus2_[i][static_cast<std::size_t>(l)]; }

  static std::size_t count_up_to(int max_order);

 private:
  int max_order_;
  std::vector<MultiIndex> list_;
  std::vector<std::size_t> shell_start_;
  std::vector<int> dense_;
  std::vector<std::array<int, 4>> minus1_;
  std::vector<std::array<int, 4>> minus2_;
};

}  // namespace fueter
