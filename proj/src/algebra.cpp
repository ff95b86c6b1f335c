#include "fueter/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fueter/error.hpp"

namespace fueter {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroDivisor: return "ZeroDivisor";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::PointOnOrOutsideSphere: return "PointOnOrOutsideSphere";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
    case ErrorKind::OutsideConvergenceRegion: return "OutsideConvergenceRegion";
    case ErrorKind::OutsideGamma: return "OutsideGamma";
    case ErrorKind::RadiusNotCertified: return "RadiusNotCertified";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NoFeasibleEpsilon: return "NoFeasibleEpsilon";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double norm(const Quaternion& p) { return std::sqrt(norm2(p)); }

Quaternion inverse(const Quaternion& p, double floor) {
  const double n2 = norm2(p);
  if (!(n2 >= floor)) {
    throw Error(ErrorKind::ZeroDivisor, "quaternion norm^2 " + std::to_string(n2) + " below floor");
  }
  return conj(p) / n2;
}

double max_abs_diff(const Quaternion& a, const Quaternion& b) {
  return std::max({std::abs(a.x0 - b.x0), std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2),
                   std::abs(a.x3 - b.x3)});
}

Complex& Biquaternion::operator[](int l) {
  switch (l) {
    case 0: return c0;
    case 1: return c1;
    case 2: return c2;
    default: return c3;
  }
}

const Complex& Biquaternion::operator[](int l) const {
  switch (l) {
    case 0: return c0;
    case 1: return c1;
    case 2: return c2;
    default: return c3;
  }
}

Biquaternion Biquaternion::operator*(const Biquaternion& o) const {
  return {c0 * o.c0 - c1 * o.c1 - c2 * o.c2 - c3 * o.c3,
          c0 * o.c1 + c1 * o.c0 + c2 * o.c3 - c3 * o.c2,
          c0 * o.c2 - c1 * o.c3 + c2 * o.c0 + c3 * o.c1,
          c0 * o.c3 + c1 * o.c2 - c2 * o.c1 + c3 * o.c0};
}

Biquaternion bq_conj(const Biquaternion& a) { return {a.c0, -a.c1, -a.c2, -a.c3}; }

Complex bq_quadratic_norm(const Biquaternion& x) {
  return x.c0 * x.c0 + x.c1 * x.c1 + x.c2 * x.c2 + x.c3 * x.c3;
}

double bq_euclidean_norm(const Biquaternion& x) {
  return std::sqrt(std::norm(x.c0) + std::norm(x.c1) + std::norm(x.c2) + std::norm(x.c3));
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) {
    throw Error(ErrorKind::OrderTooHigh, "factorial argument " + std::to_string(n) + " outside [0, 20]");
  }
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t MultiIndex::factorial() const {
  return fueter::factorial(a[0]) * fueter::factorial(a[1]) * fueter::factorial(a[2]) *
         fueter::factorial(a[3]);
}

double MultiIndex::monomial(const Quaternion& q) const {
  double r = 1.0;
  for (int l = 0; l < 4; ++l) {
    for (int e = 0; e < a[static_cast<std::size_t>(l)]; ++e) r *= q[l];
  }
  return r;
}

std::size_t MultiIndexSet::count_up_to(int max_order) {
  // C(N + 4, 4)
  const auto n = static_cast<std::size_t>(max_order);
  return (n + 1) * (n + 2) * (n + 3) * (n + 4) / 24;
}

MultiIndexSet::MultiIndexSet(int max_order) : max_order_(max_order) {
  if (max_order < 0) throw Error(ErrorKind::InvalidArgument, "negative multi-index order");
  const int side = max_order + 1;
  dense_.assign(static_cast<std::size_t>(side) * side * side * side, -1);
  list_.reserve(count_up_to(max_order));
  for (int k = 0; k <= max_order; ++k) {
    shell_start_.push_back(list_.size());
    for (int a0 = k; a0 >= 0; --a0) {
      for (int a1 = k - a0; a1 >= 0; --a1) {
        for (int a2 = k - a0 - a1; a2 >= 0; --a2) {
          const int a3 = k - a0 - a1 - a2;
          MultiIndex m(a0, a1, a2, a3);
          dense_[static_cast<std::size_t>(((a0 * side + a1) * side + a2) * side + a3)] =
              static_cast<int>(list_.size());
          list_.push_back(m);
        }
      }
    }
  }
  shell_start_.push_back(list_.size());

  minus1_.resize(list_.size());
  minus2_.resize(list_.size());
  for (std::size_t i = 0; i < list_.size(); ++i) {
    for (int l = 0; l < 4; ++l) {
      MultiIndex m1 = list_[i];
      m1.a[static_cast<std::size_t>(l)] -= 1;
      MultiIndex m2 = list_[i];
      m2.a[static_cast<std::size_t>(l)] -= 2;
      minus1_[i][static_cast<std::size_t>(l)] = index_of(m1);
      minus2_[i][static_cast<std::size_t>(l)] = index_of(m2);
    }
  }
}

int MultiIndexSet::index_of(const MultiIndex& alpha) const {
  const int side = max_order_ + 1;
  for (int l = 0; l < 4; ++l) {
    if (alpha[l] < 0) return -1;
  }
  if (alpha.order() > max_order_) return -1;
  return dense_[static_cast<std::size_t>(((alpha[0] * side + alpha[1]) * side + alpha[2]) * side +
                                         alpha[3])];
}

std::pair<std::size_t, std::size_t> MultiIndexSet::shell(int k) const {
  if (k < 0 || k > max_order_) return {0, 0};
  return {shell_start_[static_cast<std::size_t>(k)], shell_start_[static_cast<std::size_t>(k) + 1]};
}

}  // namespace fueter
