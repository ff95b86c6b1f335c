#include "fueter/suites.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "fueter/cauchy.hpp"
#include "fueter/complexify.hpp"
#include "fueter/error.hpp"

namespace fueter {

std::vector<QFunction> regular_zoo_1d() {
  std::vector<QFunction> out;
  out.push_back(zoo("constant"));
  for (int i = 1; i <= 3; ++i) {
    ZooParams zp;
    zp.index = i;
    out.push_back(zoo("fueter_variable", zp));
  }
  ZooParams zk;
  zk.center = Quaternion(2.0);
  QFunction k = zoo("kernel", zk);
  k.set_name("kernel(2)");
  out.push_back(std::move(k));
  return out;
}

SuiteResult reconstruction_suite(std::uint64_t seed, const ReconstructionOptions& opt) {
  const SphereGrid grid = sphere_grid(Quaternion{}, 1.0, opt.resolution);
  const auto pts = sample_region(SampleRegion::ball(opt.inner_radius), opt.points, seed);
  SuiteResult res;
  res.passed = true;
  Json rows = Json::array();
  for (const auto& f : regular_zoo_1d()) {
    double worst = 0.0;
    Quaternion worst_p;
    for (const auto& p : pts) {
      const double e = norm(cf_integral(f, grid, p[0]) - f.evaluate(p));
      if (e > worst) {
        worst = e;
        worst_p = p[0];
      }
    }
    const bool ok = worst <= opt.tol;
    res.passed = res.passed && ok;
    rows.push_back(Json{{"function", f.name()}, {"max_error", worst}, {"worst_point", to_json(worst_p)},
                        {"passed", ok}});
  }

  const SphereGrid coarse = sphere_grid(Quaternion{}, 1.0, kMinResolution);
  const double const_err = norm(cf_integral(zoo("constant"), coarse, Quaternion{}) - Quaternion(1.0));
  const bool const_ok = const_err <= opt.constant_tol;

  const QFunction id = zoo("identity");
  double control = 0.0;
  for (const auto& p : pts) control = std::max(control, norm(cf_integral(id, grid, p[0]) - id.evaluate(p)));
  const bool control_ok = control >= opt.control_gap;

  res.passed = res.passed && const_ok && control_ok;
  res.report = Json{{"suite", "reconstruction"},
                    {"seed", seed},
                    {"resolution", opt.resolution},
                    {"points", opt.points},
                    {"functions", std::move(rows)},
                    {"constant_center", {{"resolution", kMinResolution}, {"error", const_err}, {"passed", const_ok}}},
                    {"control", {{"function", "identity"}, {"max_error", control}, {"passed", control_ok}}},
                    {"passed", res.passed}};
  return res;
}

SuiteResult submean_check(const QFunction& f, const SubmeanOptions& opt) {
  const SphereGrid p_grid = sphere_grid(Quaternion{}, 1.0, opt.p_resolution);
  const SphereGrid q_grid = sphere_grid(opt.q0, opt.q_radius, opt.q_resolution);
  const CoefficientSlices slices(f, p_grid, q_grid, opt.order);
  const auto& idx = slices.indices();
  const std::size_t nt = static_cast<std::size_t>(opt.n_theta);
  std::vector<std::vector<Biquaternion>> ring(nt);
  for (std::size_t j = 0; j < nt; ++j) {
    ring[j] = slices.evaluate_all(disc_point(opt.disc_radius, 2.0 * std::numbers::pi * j / opt.n_theta));
  }
  const auto centre = slices.evaluate_all(Biquaternion{});

  SuiteResult res;
  std::size_t violations = 0;
  std::size_t clamped = 0;
  double worst = -std::numeric_limits<double>::infinity();
  Json worst_alpha = nullptr;
  for (std::size_t a = 1; a < idx.size(); ++a) {
    const int k = idx[a].order();
    std::size_t j = 0;
    // disc_average walks the angles in order, so the ring is read sequentially
    const auto avg = disc_average([&](double) { return u_alpha_value(ring[j++][a], k); }, opt.n_theta);
    clamped += avg.clamped;
    const double gap = std::max(u_alpha_value(centre[a], k), kLogClamp) - avg.average;
    if (gap > worst) {
      worst = gap;
      worst_alpha = {idx[a][0], idx[a][1], idx[a][2], idx[a][3]};
    }
    if (gap > opt.tol) ++violations;
  }
  res.passed = violations == 0;
  res.report = Json{{"function", f.name()},
                    {"order", opt.order},
                    {"disc_radius", opt.disc_radius},
                    {"n_theta", opt.n_theta},
                    {"alphas", idx.size() - 1},
                    {"violations", violations},
                    {"worst_gap", number_json(worst)},
                    {"worst_alpha", std::move(worst_alpha)},
                    {"clamped_samples", clamped},
                    {"passed", res.passed}};
  return res;
}

std::vector<QFunction> submean_zoo() {
  std::vector<QFunction> out;
  QFunction a = zoo("bounded_strip_regular");
  a.set_name("bounded_strip_regular(c=3)");
  out.push_back(std::move(a));
  ZooParams zp;
  zp.center = Quaternion(2.5, 0.0, 1.0, 0.0);
  zp.p_weight = 0.8;
  zp.q_weight = 1.2;
  QFunction b = zoo("bounded_strip_regular", zp);
  b.set_name("bounded_strip_regular(c=2.5+j, 0.8, 1.2)");
  out.push_back(std::move(b));
  ZooParams zq;
  zq.index = 2;
  out.push_back(zoo("product_regular", zq));
  return out;
}

SuiteResult submean_suite(const SubmeanOptions& opt) {
  SuiteResult res;
  res.passed = true;
  Json rows = Json::array();
  for (const auto& f : submean_zoo()) {
    auto r = submean_check(f, opt);
    res.passed = res.passed && r.passed;
    rows.push_back(std::move(r.report));
  }
  res.report = Json{{"suite", "submean"}, {"functions", std::move(rows)}, {"passed", res.passed}};
  return res;
}

QFunction extension_truth(const std::string& name) {
  if (name == "product_regular") return zoo("product_regular");
  if (name == "q_kernel") {
    ZooParams zp;
    zp.center = Quaternion(0.0, 0.0, 2.0, 0.0);
    zp.p_weight = 0.0;
    zp.q_weight = 1.0;
    QFunction f = zoo("bounded_strip_regular", zp);
    f.set_name("q_kernel(2j)");
    return f;
  }
  throw Error(ErrorKind::BadSpec, "unknown extension truth '" + name + "'");
}

SuiteResult extension_suite(std::uint64_t seed, const ExtensionSuiteOptions& opt) {
  PipelineOptions po = opt.pipeline;
  po.seed = seed;
  const auto r = hanges_treves_pipeline(extension_truth(opt.truth), model_domain(), opt.delta, po);
  SuiteResult res;
  res.passed = r.passed;
  res.report = Json{{"suite", "extension"}, {"truth", opt.truth}, {"seed", seed}, {"result", to_json(r)}};
  return res;
}

}  // namespace fueter
