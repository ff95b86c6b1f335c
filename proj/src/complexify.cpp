#include "fueter/complexify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "fueter/error.hpp"
#include "fueter/parallel.hpp"

namespace fueter {

namespace {

constexpr double kTwoPiSquared = 2.0 * std::numbers::pi * std::numbers::pi;

Complex quadratic_offset(const Quaternion& xi, const Biquaternion& x) {
  return bq_quadratic_norm(Biquaternion(xi) - x);
}

[[noreturn]] void outside_gamma(double margin, double floor) {
  throw Error(ErrorKind::OutsideGamma, "kernel denominator margin " + std::to_string(margin) + " below floor " +
                                           std::to_string(floor));
}

// K(xi, x) * D(xi) split into real and imaginary quaternion parts, so that
// multiplying by a real quaternion value costs two Hamilton products.
struct SplitWeight {
  Quaternion re, im;
};

SplitWeight kernel_weight(const Quaternion& xi, const Quaternion& normal, const Biquaternion& x, Complex q) {
  const Biquaternion k = bq_conj(Biquaternion(xi) - x) / (q * q);
  const Biquaternion w = k * Biquaternion(normal);
  return {w.real_part(), w.imag_part()};
}

std::vector<SplitWeight> node_weights(const SphereGrid& grid, const Biquaternion& x, double floor) {
  std::vector<SplitWeight> w(grid.size());
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Complex q = quadratic_offset(grid.nodes[n], x);
    margin = std::min(margin, std::abs(q));
    if (std::abs(q) < floor) continue;
    w[n] = kernel_weight(grid.nodes[n], grid.normal_form[n], x, q);
  }
  if (!(margin >= floor)) outside_gamma(margin, floor);
  return w;
}

Biquaternion join(const Quaternion& re, const Quaternion& im) {
  return {Complex(re.x0, im.x0), Complex(re.x1, im.x1), Complex(re.x2, im.x2), Complex(re.x3, im.x3)};
}

}  // namespace

GammaReport gamma_membership(const Biquaternion& x, const SphereGrid& grid, double floor) {
  GammaReport r;
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto& xi : grid.nodes) r.margin = std::min(r.margin, std::abs(quadratic_offset(xi, x)));
  r.inside = r.margin >= floor;
  return r;
}

ComplexifiedFunction::ComplexifiedFunction(std::shared_ptr<const SphereGrid> grid, std::vector<Quaternion> values,
                                           double floor)
    : grid_(std::move(grid)), values_(std::move(values)), floor_(floor) {
  if (!grid_ || values_.size() != grid_->size()) {
    throw Error(ErrorKind::InvalidArgument, "one value per grid node expected");
  }
}

Biquaternion ComplexifiedFunction::operator()(const Biquaternion& x) const {
  const auto w = node_weights(*grid_, x, floor_);
  struct Pair {
    Quaternion re, im;
    Pair& operator+=(const Pair& o) {
      re += o.re;
      im += o.im;
      return *this;
    }
    Pair operator+(const Pair& o) const { return {re + o.re, im + o.im}; }
  };
  const Pair s = parallel_sum_of<Pair>(grid_->size(), [&](std::size_t n) {
    return Pair{w[n].re * values_[n], w[n].im * values_[n]};
  });
  return join(s.re / kTwoPiSquared, s.im / kTwoPiSquared);
}

ComplexifiedFunction complexify(const QFunction& g, const SphereGrid& grid, double floor) {
  return ComplexifiedFunction(std::make_shared<SphereGrid>(grid), node_values(g, grid), floor);
}

Biquaternion BiquaternionPolynomial::operator()(std::span<const Biquaternion> x) const {
  if (static_cast<int>(x.size()) != poly_.nvars()) {
    throw Error(ErrorKind::InvalidArgument, "point has the wrong number of components");
  }
  Biquaternion acc;
  for (const auto& [e, c] : poly_.terms()) {
    Complex m(1.0, 0.0);
    for (std::size_t k = 0; k < e.size(); ++k) {
      const Complex xc = x[k / 4][static_cast<int>(k % 4)];
      for (int r = 0; r < e[k]; ++r) m *= xc;
    }
    acc += Biquaternion(c) * m;
  }
  return acc;
}

BiquaternionPolynomial complexify_poly(const PolyFunction& g) { return BiquaternionPolynomial(g); }

// ---------------------------------------------------------------- coefficient slices

CoefficientSlices::CoefficientSlices(const QFunction& f, const SphereGrid& p_grid, const SphereGrid& q_grid,
                                     int order, double floor)
    : p_grid_(std::make_shared<SphereGrid>(p_grid)), indices_(order), q0_(q_grid.center), floor_(floor) {
  if (f.nvars() != 2) throw Error(ErrorKind::InvalidArgument, "coefficient slices need a two-variable function");
  const KernelMoments moments(q_grid, order);
  values_.resize(p_grid.size() * indices_.size());
  for (std::size_t n = 0; n < p_grid.size(); ++n) {
    const Quaternion p = p_grid.nodes[n];
    const SliceFunction slice = [&f, p](const Quaternion& q) {
      const Quaternion pt[2] = {p, q};
      if (!f.in_domain(pt)) throw Error(ErrorKind::EvaluationFailure, f.name() + " undefined on the slice sphere");
      return f.evaluate(pt);
    };
    const auto table = moments.coefficients(node_values(slice, q_grid), slice(q_grid.center));
    std::copy(table.begin(), table.end(), values_.begin() + static_cast<std::ptrdiff_t>(n * indices_.size()));
  }
}

ComplexifiedFunction CoefficientSlices::function(std::size_t alpha) const {
  std::vector<Quaternion> v(p_grid_->size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = value(alpha, n);
  return ComplexifiedFunction(p_grid_, std::move(v), floor_);
}

std::vector<Biquaternion> CoefficientSlices::evaluate_all(const Biquaternion& x) const {
  const auto w = node_weights(*p_grid_, x, floor_);
  const std::size_t nodes = p_grid_->size();
  const std::size_t width = indices_.size();
  const std::size_t blocks = (nodes + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks * width * 8, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    double* acc = &partial[b * width * 8];
    const std::size_t end = std::min(nodes, (b + 1) * kReductionBlock);
    for (std::size_t n = b * kReductionBlock; n < end; ++n) {
      const Quaternion* row = &values_[n * width];
      for (std::size_t a = 0; a < width; ++a) {
        const Quaternion re = w[n].re * row[a];
        const Quaternion im = w[n].im * row[a];
        double* dst = acc + a * 8;
        dst[0] += re.x0;
        dst[1] += re.x1;
        dst[2] += re.x2;
        dst[3] += re.x3;
        dst[4] += im.x0;
        dst[5] += im.x1;
        dst[6] += im.x2;
        dst[7] += im.x3;
      }
    }
  });
  std::vector<double> column(blocks);
  std::vector<Biquaternion> out(width);
  for (std::size_t a = 0; a < width; ++a) {
    double t[8];
    for (int c = 0; c < 8; ++c) {
      for (std::size_t b = 0; b < blocks; ++b) column[b] = partial[(b * width + a) * 8 + static_cast<std::size_t>(c)];
      t[c] = pairwise_sum(std::span<const double>(column)) / kTwoPiSquared;
    }
    out[a] = join(Quaternion(t[0], t[1], t[2], t[3]), Quaternion(t[4], t[5], t[6], t[7]));
  }
  return out;
}

// ---------------------------------------------------------------- u_alpha and averages

double u_alpha_value(const Biquaternion& value, int alpha_order) {
  if (alpha_order < 1) throw Error(ErrorKind::InvalidArgument, "u_alpha needs |alpha| >= 1");
  const double n = bq_euclidean_norm(value);
  if (n == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(n) / alpha_order;
}

double u_alpha(const ComplexifiedFunction& g_alpha, const Biquaternion& x, int alpha_order) {
  return u_alpha_value(g_alpha(x), alpha_order);
}

DiscAverage disc_average(const std::function<double(double)>& F, int n_theta, double clamp) {
  if (n_theta < 1) throw Error(ErrorKind::InvalidArgument, "disc average needs at least one angle");
  std::vector<double> samples(static_cast<std::size_t>(n_theta));
  DiscAverage out;
  for (int j = 0; j < n_theta; ++j) {
    double v = 0.0;
    try {
      v = F(2.0 * std::numbers::pi * j / n_theta);
    } catch (const Error& e) {
      throw Error(ErrorKind::EvaluationFailure, e.what());
    }
    if (std::isnan(v)) throw Error(ErrorKind::EvaluationFailure, "disc integrand returned NaN");
    if (v < clamp) {
      if (std::isinf(v)) ++out.clamped;
      v = clamp;
    }
    samples[static_cast<std::size_t>(j)] = v;
  }
  out.average = pairwise_sum(std::span<const double>(samples)) / n_theta;
  return out;
}

Biquaternion disc_point(double radius, double theta) {
  return Biquaternion(std::polar(radius, theta));
}

void write_u_alpha_csv(const CoefficientSlices& slices, int max_order, double radius, int n_theta,
                       std::ostream& out) {
  out << "alpha,theta,value\n";
  const auto old_precision = out.precision(17);
  const auto& idx = slices.indices();
  for (int j = 0; j < n_theta; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n_theta;
    const auto vals = slices.evaluate_all(disc_point(radius, theta));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const int k = idx[a].order();
      if (k < 1 || k > max_order) continue;
      out << idx[a][0] << '-' << idx[a][1] << '-' << idx[a][2] << '-' << idx[a][3] << ',' << theta << ','
          << u_alpha_value(vals[a], k) << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace fueter
