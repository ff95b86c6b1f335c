#include "fueter/funcrep.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fueter/error.hpp"
#include "fueter/parallel.hpp"
#include "fueter/random.hpp"

namespace fueter {

namespace {

void check_nvars(int nvars) {
  if (nvars < 1 || nvars > kMaxVariables) {
    throw Error(ErrorKind::InvalidArgument, "nvars must be 1 or 2, got " + std::to_string(nvars));
  }
}

void check_point(int nvars, PointView x) {
  if (static_cast<int>(x.size()) != nvars) {
    throw Error(ErrorKind::InvalidArgument, "point has " + std::to_string(x.size()) +
                                                " quaternion components, function expects " +
                                                std::to_string(nvars));
  }
}

void check_var(const QFunction& f, int var) {
  if (var < 0 || var >= f.nvars()) {
    throw Error(ErrorKind::InvalidArgument, "variable index " + std::to_string(var) + " out of range");
  }
}

Point shifted(PointView x, int coord, double delta) {
  Point y(x.begin(), x.end());
  y[static_cast<std::size_t>(coord / 4)][coord % 4] += delta;
  return y;
}

std::string point_string(PointView x) {
  std::string s = "(";
  for (std::size_t v = 0; v < x.size(); ++v) {
    for (int l = 0; l < 4; ++l) {
      if (v + static_cast<std::size_t>(l) > 0) s += ", ";
      s += std::to_string(x[v][l]);
    }
  }
  return s + ")";
}

}  // namespace

// ---------------------------------------------------------------- PolyFunction

PolyFunction::PolyFunction(int nvars) : nvars_(nvars) { check_nvars(nvars); }

int PolyFunction::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : e) s += v;
    d = std::max(d, s);
  }
  return d;
}

void PolyFunction::add_term(const Exponents& exponents, const Quaternion& coeff) {
  if (static_cast<int>(exponents.size()) != 4 * nvars_) {
    throw Error(ErrorKind::InvalidArgument, "exponent vector must have " + std::to_string(4 * nvars_) +
                                                " entries");
  }
  for (int e : exponents) {
    if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  }
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    if (coeff == Quaternion{}) return;
    terms_.emplace(exponents, coeff);
  } else {
    it->second += coeff;
    if (it->second == Quaternion{}) terms_.erase(it);
  }
  rebuild_cache();
}

void PolyFunction::rebuild_cache() {
  const std::size_t width = static_cast<std::size_t>(4 * nvars_);
  flat_exponents_.clear();
  flat_coeffs_.clear();
  flat_exponents_.reserve(terms_.size() * width);
  flat_coeffs_.reserve(terms_.size());
  max_exponent_ = 0;
  for (const auto& [e, c] : terms_) {
    for (int v : e) {
      flat_exponents_.push_back(v);
      max_exponent_ = std::max(max_exponent_, v);
    }
    flat_coeffs_.push_back(c);
  }
}

Quaternion PolyFunction::evaluate(PointView x) const {
  check_point(nvars_, x);
  const int width = 4 * nvars_;
  const int side = max_exponent_ + 1;
  // small tables stay on the stack; this sits in the innermost quadrature loops
  std::array<double, 256> stack_powers;
  std::vector<double> heap_powers;
  double* powers = stack_powers.data();
  if (width * side > static_cast<int>(stack_powers.size())) {
    heap_powers.resize(static_cast<std::size_t>(width * side));
    powers = heap_powers.data();
  }
  for (int c = 0; c < width; ++c) {
    const double xc = x[static_cast<std::size_t>(c / 4)][c % 4];
    double* row = &powers[static_cast<std::size_t>(c * side)];
    row[0] = 1.0;
    for (int k = 1; k < side; ++k) row[k] = row[k - 1] * xc;
  }
  Quaternion acc;
  for (std::size_t t = 0; t < flat_coeffs_.size(); ++t) {
    const int* e = &flat_exponents_[t * static_cast<std::size_t>(width)];
    double m = 1.0;
    for (int c = 0; c < width; ++c) m *= powers[static_cast<std::size_t>(c * side + e[c])];
    acc += flat_coeffs_[t] * m;
  }
  return acc;
}

PolyFunction PolyFunction::derivative(int coord) const {
  if (coord < 0 || coord >= 4 * nvars_) {
    throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
  }
  PolyFunction d(nvars_);
  for (const auto& [e, c] : terms_) {
    const int k = e[static_cast<std::size_t>(coord)];
    if (k == 0) continue;
    Exponents e2 = e;
    e2[static_cast<std::size_t>(coord)] -= 1;
    d.add_term(e2, c * static_cast<double>(k));
  }
  return d;
}

PolyFunction PolyFunction::operator+(const PolyFunction& o) const {
  if (o.nvars_ != nvars_) throw Error(ErrorKind::InvalidArgument, "nvars mismatch in polynomial sum");
  PolyFunction r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

PolyFunction PolyFunction::operator-(const PolyFunction& o) const { return *this + (-1.0 * o); }

PolyFunction PolyFunction::operator*(const PolyFunction& o) const {
  if (o.nvars_ != nvars_) throw Error(ErrorKind::InvalidArgument, "nvars mismatch in polynomial product");
  PolyFunction r(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

PolyFunction operator*(const Quaternion& c, const PolyFunction& f) {
  PolyFunction r(f.nvars_);
  for (const auto& [e, a] : f.terms_) r.add_term(e, c * a);
  return r;
}

PolyFunction operator*(const PolyFunction& f, const Quaternion& c) {
  PolyFunction r(f.nvars_);
  for (const auto& [e, a] : f.terms_) r.add_term(e, a * c);
  return r;
}

PolyFunction PolyFunction::coordinate(int nvars, int coord) {
  PolyFunction r(nvars);
  Exponents e(static_cast<std::size_t>(4 * nvars), 0);
  e.at(static_cast<std::size_t>(coord)) = 1;
  r.add_term(e, Quaternion{1.0});
  return r;
}

PolyFunction PolyFunction::constant(int nvars, const Quaternion& c) {
  PolyFunction r(nvars);
  r.add_term(Exponents(static_cast<std::size_t>(4 * nvars), 0), c);
  return r;
}

// ---------------------------------------------------------------- QFunction

QFunction::QFunction(PolyFunction poly) : rep_(std::move(poly)), name_("poly") {
  const auto& p = std::get<PolyFunction>(rep_);
  for (int c = 0; c < 4 * p.nvars(); ++c) poly_partials_.push_back(p.derivative(c));
}

QFunction::QFunction(BlackBoxFunction bb) : rep_(std::move(bb)) {
  const auto& b = std::get<BlackBoxFunction>(rep_);
  check_nvars(b.nvars);
  if (!b.evaluator) throw Error(ErrorKind::InvalidArgument, "black-box function without evaluator");
  if (!(b.scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "black-box scale must be positive");
  name_ = b.name.empty() ? "black_box" : b.name;
}

int QFunction::nvars() const {
  if (const auto* p = as_poly()) return p->nvars();
  return as_black_box()->nvars;
}

Quaternion QFunction::evaluate(PointView x) const {
  if (const auto* p = as_poly()) return p->evaluate(x);
  const auto* b = as_black_box();
  check_point(b->nvars, x);
  return b->evaluator(x);
}

bool QFunction::in_domain(PointView x) const {
  if (as_poly() != nullptr) return true;
  const auto* b = as_black_box();
  return !b->domain || b->domain(x);
}

double QFunction::scale() const {
  if (as_poly() != nullptr) return 1.0;
  return as_black_box()->scale;
}

bool QFunction::has_exact_partials() const {
  if (as_poly() != nullptr) return true;
  return static_cast<bool>(as_black_box()->partials);
}

void QFunction::exact_partials(PointView x, std::span<Quaternion> out) const {
  check_point(nvars(), x);
  if (out.size() != static_cast<std::size_t>(4 * nvars())) {
    throw Error(ErrorKind::InvalidArgument, "partials output has wrong size");
  }
  if (as_poly() != nullptr) {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = poly_partials_[c].evaluate(x);
    return;
  }
  const auto* b = as_black_box();
  if (!b->partials) throw Error(ErrorKind::InvalidArgument, name_ + " has no closed-form partials");
  b->partials(x, out);
}

QFunction as_black_box(const PolyFunction& poly, double scale) {
  BlackBoxFunction bb;
  bb.nvars = poly.nvars();
  bb.evaluator = [poly](PointView x) { return poly.evaluate(x); };
  bb.scale = scale;
  bb.name = "poly_black_box";
  return QFunction(std::move(bb));
}

QFunction restrict_domain(const QFunction& f, std::function<bool(PointView)> allowed, std::string name) {
  BlackBoxFunction bb;
  bb.nvars = f.nvars();
  bb.evaluator = [f](PointView x) { return f.evaluate(x); };
  bb.domain = [f, allowed = std::move(allowed)](PointView x) { return f.in_domain(x) && allowed(x); };
  bb.scale = f.scale();
  if (f.has_exact_partials()) {
    bb.partials = [f](PointView x, std::span<Quaternion> out) { f.exact_partials(x, out); };
  }
  bb.name = name.empty() ? f.name() : std::move(name);
  return QFunction(std::move(bb));
}

// ---------------------------------------------------------------- operators

namespace {

bool use_exact(const QFunction& f, const DiffOptions& opt) {
  switch (opt.method) {
    case DiffMethod::Exact:
      if (!f.has_exact_partials()) {
        throw Error(ErrorKind::InvalidArgument, f.name() + " has no closed-form partials");
      }
      return true;
    case DiffMethod::FiniteDifference: return false;
    case DiffMethod::Auto: return f.has_exact_partials();
  }
  return false;
}

double fd_step(const QFunction& f, const DiffOptions& opt) {
  if (!(opt.step_scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  return opt.step_scale * f.scale();
}

// Evaluates g at x + k h e_coord for k in {-2, -1, 1, 2} after checking that
// every stencil point lies in f's domain.
template <class G>
std::array<Quaternion, 4> stencil(const QFunction& f, int coord, PointView x, double h, G&& g) {
  static constexpr std::array<int, 4> kOffsets{-2, -1, 1, 2};
  std::array<Quaternion, 4> vals;
  for (std::size_t s = 0; s < 4; ++s) {
    const Point y = shifted(x, coord, kOffsets[s] * h);
    if (!f.in_domain(y)) {
      throw Error(ErrorKind::OutOfDomain, "finite-difference stencil leaves the domain of " + f.name() +
                                              " at " + point_string(y));
    }
    vals[s] = g(y);
  }
  return vals;
}

Quaternion first_difference(const std::array<Quaternion, 4>& v, double h) {
  return (v[0] - v[1] * 8.0 + v[2] * 8.0 - v[3]) / (12.0 * h);
}

// All four partials of variable `var`, by the chosen method.
std::array<Quaternion, 4> variable_partials(const QFunction& f, int var, PointView x, const DiffOptions& opt) {
  check_var(f, var);
  check_point(f.nvars(), x);
  if (!f.in_domain(x)) {
    throw Error(ErrorKind::OutOfDomain, "point " + point_string(x) + " outside the domain of " + f.name());
  }
  std::array<Quaternion, 4> d;
  if (use_exact(f, opt)) {
    std::vector<Quaternion> all(static_cast<std::size_t>(4 * f.nvars()));
    f.exact_partials(x, all);
    for (int l = 0; l < 4; ++l) d[static_cast<std::size_t>(l)] = all[static_cast<std::size_t>(4 * var + l)];
    return d;
  }
  const double h = fd_step(f, opt);
  for (int l = 0; l < 4; ++l) {
    const auto v = stencil(f, 4 * var + l, x, h, [&](PointView y) { return f.evaluate(y); });
    d[static_cast<std::size_t>(l)] = first_difference(v, h);
  }
  return d;
}

}  // namespace

Quaternion partial(const QFunction& f, int coord, PointView x, const DiffOptions& opt) {
  if (coord < 0 || coord >= 4 * f.nvars()) throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
  return variable_partials(f, coord / 4, x, opt)[static_cast<std::size_t>(coord % 4)];
}

Quaternion cf_left(const QFunction& f, int var, PointView x, const DiffOptions& opt) {
  const auto d = variable_partials(f, var, x, opt);
  Quaternion r = d[0];
  for (int l = 1; l < 4; ++l) r += Quaternion::unit(l) * d[static_cast<std::size_t>(l)];
  return r;
}

Quaternion cf_right(const QFunction& f, int var, PointView x, const DiffOptions& opt) {
  const auto d = variable_partials(f, var, x, opt);
  Quaternion r = d[0];
  for (int l = 1; l < 4; ++l) r += d[static_cast<std::size_t>(l)] * Quaternion::unit(l);
  return r;
}

Quaternion cf_left_conj(const QFunction& f, int var, PointView x, const DiffOptions& opt) {
  const auto d = variable_partials(f, var, x, opt);
  Quaternion r = d[0];
  for (int l = 1; l < 4; ++l) r -= Quaternion::unit(l) * d[static_cast<std::size_t>(l)];
  return r;
}

Quaternion laplacian(const QFunction& f, int var, PointView x, const DiffOptions& opt) {
  check_var(f, var);
  check_point(f.nvars(), x);
  if (!f.in_domain(x)) {
    throw Error(ErrorKind::OutOfDomain, "point " + point_string(x) + " outside the domain of " + f.name());
  }
  Quaternion acc;
  if (const auto* p = f.as_poly(); p != nullptr && opt.method != DiffMethod::FiniteDifference) {
    for (int l = 0; l < 4; ++l) acc += p->derivative(4 * var + l).derivative(4 * var + l).evaluate(x);
    return acc;
  }
  const double h = fd_step(f, opt);
  if (use_exact(f, opt)) {
    // first differences of the closed-form first partials
    std::vector<Quaternion> buf(static_cast<std::size_t>(4 * f.nvars()));
    for (int l = 0; l < 4; ++l) {
      const int c = 4 * var + l;
      const auto v = stencil(f, c, x, h, [&](PointView y) {
        f.exact_partials(y, buf);
        return buf[static_cast<std::size_t>(c)];
      });
      acc += first_difference(v, h);
    }
    return acc;
  }
  const Quaternion centre = f.evaluate(x);
  for (int l = 0; l < 4; ++l) {
    const auto v = stencil(f, 4 * var + l, x, h, [&](PointView y) { return f.evaluate(y); });
    acc += (-v[0] + v[1] * 16.0 - centre * 30.0 + v[2] * 16.0 - v[3]) / (12.0 * h * h);
  }
  return acc;
}

QFunction cf_left_function(const QFunction& f, int var, const DiffOptions& opt) {
  check_var(f, var);
  if (const auto* p = f.as_poly(); p != nullptr && opt.method != DiffMethod::FiniteDifference) {
    PolyFunction r = p->derivative(4 * var);
    for (int l = 1; l < 4; ++l) r = r + Quaternion::unit(l) * p->derivative(4 * var + l);
    QFunction q(std::move(r));
    q.set_name("dbar(" + f.name() + ")");
    return q;
  }
  BlackBoxFunction bb;
  bb.nvars = f.nvars();
  bb.evaluator = [f, var, opt](PointView x) { return cf_left(f, var, x, opt); };
  bb.domain = [f](PointView x) { return f.in_domain(x); };
  bb.scale = f.scale();
  bb.name = "dbar(" + f.name() + ")";
  return QFunction(std::move(bb));
}

// ---------------------------------------------------------------- sampling

SampleRegion SampleRegion::ball(double radius, int nvars) {
  check_nvars(nvars);
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "ball radius must be positive");
  SampleRegion r;
  r.shells.assign(static_cast<std::size_t>(nvars), Shell{Quaternion{}, 0.0, radius});
  return r;
}

SampleRegion SampleRegion::annulus(double r_min, double r_max, int nvars) {
  check_nvars(nvars);
  if (!(r_min >= 0.0 && r_max > r_min)) throw Error(ErrorKind::InvalidArgument, "annulus needs 0 <= r_min < r_max");
  SampleRegion r;
  r.shells.assign(static_cast<std::size_t>(nvars), Shell{Quaternion{}, r_min, r_max});
  return r;
}

bool SampleRegion::contains(PointView x) const {
  if (x.size() != shells.size()) return false;
  for (std::size_t v = 0; v < shells.size(); ++v) {
    const double r = norm(x[v] - shells[v].center);
    if (r < shells[v].r_min || r > shells[v].r_max) return false;
  }
  return true;
}

std::vector<Point> sample_region(const SampleRegion& region, std::size_t count, std::uint64_t seed) {
  if (region.shells.empty()) throw Error(ErrorKind::InvalidArgument, "empty sample region");
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p;
    for (const auto& s : region.shells) {
      // rejection from the bounding cube keeps the density uniform in volume
      for (;;) {
        Quaternion d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0));
        const double r = norm(d) * s.r_max;
        if (r <= s.r_max && r >= s.r_min) {
          p.push_back(s.center + d * s.r_max);
          break;
        }
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

RegularityReport is_regular(const QFunction& f, std::span<const Point> samples, double tol,
                            const DiffOptions& opt) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  std::vector<double> residual(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    double r = 0.0;
    for (int v = 0; v < f.nvars(); ++v) r = std::max(r, norm(cf_left(f, v, samples[i], opt)));
    residual[i] = r;
  });
  RegularityReport rep;
  rep.samples = samples.size();
  rep.tol = tol;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i == 0 || residual[i] > rep.max_residual) {
      rep.max_residual = residual[i];
      rep.worst_point = samples[i];
    }
  }
  rep.passed = rep.max_residual <= tol;
  return rep;
}

// ---------------------------------------------------------------- kernel and zoo

Quaternion cauchy_kernel(const Quaternion& u) {
  const double n2 = norm2(u);
  if (!(n2 >= kZeroDivisorFloor)) throw Error(ErrorKind::ZeroDivisor, "kernel evaluated at its singularity");
  return conj(u) / (n2 * n2);
}

Quaternion cauchy_kernel_partial(const Quaternion& u, int l) {
  const double n2 = norm2(u);
  if (!(n2 >= kZeroDivisorFloor)) throw Error(ErrorKind::ZeroDivisor, "kernel evaluated at its singularity");
  const double n4 = n2 * n2;
  return conj(Quaternion::unit(l)) / n4 - conj(u) * (4.0 * u[l] / (n4 * n2));
}

namespace {

// Degree-one regular F_i(p) = x_i - e_i x0 in variable `var` of an nvars-variable polynomial.
PolyFunction fueter_variable_poly(int nvars, int var, int index) {
  if (index < 1 || index > 3) {
    throw Error(ErrorKind::InvalidArgument, "fueter_variable index must be 1, 2 or 3");
  }
  return PolyFunction::coordinate(nvars, 4 * var + index) -
         Quaternion::unit(index) * PolyFunction::coordinate(nvars, 4 * var);
}

QFunction named(QFunction f, std::string name) {
  f.set_name(std::move(name));
  return f;
}

}  // namespace

QFunction zoo(std::string_view name, const ZooParams& params) {
  if (name == "constant") {
    return named(QFunction(PolyFunction::constant(1, params.value)), "constant");
  }
  if (name == "identity") {
    PolyFunction p(1);
    for (int l = 0; l < 4; ++l) p = p + Quaternion::unit(l) * PolyFunction::coordinate(1, l);
    return named(QFunction(std::move(p)), "identity");
  }
  if (name == "fueter_variable") {
    return named(QFunction(fueter_variable_poly(1, 0, params.index)),
                 "fueter_variable(" + std::to_string(params.index) + ")");
  }
  if (name == "kernel") {
    const Quaternion c = params.center;
    const double rc = norm(c);
    if (!(rc > 0.0)) throw Error(ErrorKind::InvalidArgument, "kernel center must be nonzero");
    BlackBoxFunction bb;
    bb.nvars = 1;
    bb.evaluator = [c](PointView x) { return cauchy_kernel(x[0] - c); };
    bb.domain = [rc](PointView x) { return norm(x[0]) < rc; };
    bb.scale = rc;
    bb.partials = [c](PointView x, std::span<Quaternion> out) {
      for (int l = 0; l < 4; ++l) out[static_cast<std::size_t>(l)] = cauchy_kernel_partial(x[0] - c, l);
    };
    bb.name = "kernel";
    return QFunction(std::move(bb));
  }
  if (name == "product_regular") {
    return named(QFunction(fueter_variable_poly(2, 0, params.index) * fueter_variable_poly(2, 1, params.index)),
                 "product_regular(" + std::to_string(params.index) + ")");
  }
  if (name == "bounded_strip_regular") {
    const Quaternion c = params.center == Quaternion{} ? Quaternion{3.0} : params.center;
    const double a = params.p_weight;
    const double b = params.q_weight;
    const double rc = norm(c);
    const double wsum = std::abs(a) + std::abs(b);
    if (!(wsum > 0.0)) throw Error(ErrorKind::InvalidArgument, "bounded_strip_regular needs a nonzero weight");
    BlackBoxFunction bb;
    bb.nvars = 2;
    bb.evaluator = [=](PointView x) { return cauchy_kernel(x[0] * a + x[1] * b - c); };
    // |a p + b q| < |c| keeps the argument away from the singularity
    bb.domain = [=](PointView x) { return std::abs(a) * norm(x[0]) + std::abs(b) * norm(x[1]) < rc; };
    bb.scale = rc / wsum;
    bb.partials = [=](PointView x, std::span<Quaternion> out) {
      const Quaternion u = x[0] * a + x[1] * b - c;
      for (int l = 0; l < 4; ++l) {
        const Quaternion g = cauchy_kernel_partial(u, l);
        out[static_cast<std::size_t>(l)] = g * a;
        out[static_cast<std::size_t>(4 + l)] = g * b;
      }
    };
    bb.name = "bounded_strip_regular";
    return QFunction(std::move(bb));
  }
  throw Error(ErrorKind::UnknownName, "no zoo function named '" + std::string(name) + "'");
}

std::vector<std::string> zoo_names() {
  return {"constant", "identity", "fueter_variable", "kernel", "product_regular", "bounded_strip_regular"};
}

}  // namespace fueter
