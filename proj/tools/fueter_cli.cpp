// fueter: command-line front end for the library.
//
// Exit codes: 0 pass, 1 mathematical check failed, 2 usage or input error,
// 3 certificate infeasible.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fueter/cauchy.hpp"
#include "fueter/complexify.hpp"
#include "fueter/error.hpp"
#include "fueter/extension.hpp"
#include "fueter/json_io.hpp"
#include "fueter/series.hpp"
#include "fueter/suites.hpp"

using namespace fueter;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kInfeasible = 3 };

struct FnSpec {
  std::string name;
  std::string center;
  std::string value = "1";
  int index = 1;
  double p_weight = 1.0;
  double q_weight = 1.0;
};

struct Common {
  std::string format = "json";
  std::uint64_t seed = 1;
};

Quaternion parse_quaternion(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadSpec, "cannot parse quaternion '" + text + "'");
    }
  }
  if (v.empty() || v.size() > 4) throw Error(ErrorKind::BadSpec, "quaternion needs 1 to 4 components: '" + text + "'");
  v.resize(4, 0.0);
  return {v[0], v[1], v[2], v[3]};
}

QFunction load_function(const FnSpec& s) {
  if (s.name.empty()) throw Error(ErrorKind::BadSpec, "no function given (--fn)");
  const bool file_like = s.name.ends_with(".json") || std::filesystem::exists(s.name);
  if (file_like) {
    QFunction f(poly_from_file(s.name));
    f.set_name(std::filesystem::path(s.name).filename().string());
    return f;
  }
  if (s.name == "q_kernel") return extension_truth("q_kernel");
  ZooParams zp;
  if (!s.center.empty()) zp.center = parse_quaternion(s.center);
  zp.value = parse_quaternion(s.value);
  zp.index = s.index;
  zp.p_weight = s.p_weight;
  zp.q_weight = s.q_weight;
  return zoo(s.name, zp);
}

void add_fn_options(CLI::App* cmd, FnSpec& s, const std::string& what = "function") {
  cmd->add_option("--fn", s.name, what + ": zoo name or PolyFunction JSON file")->required();
  cmd->add_option("--center", s.center, "zoo centre c as x0[,x1,x2,x3]");
  cmd->add_option("--value", s.value, "value of the constant function");
  cmd->add_option("--index", s.index, "index of fueter_variable / product_regular");
  cmd->add_option("--p-weight", s.p_weight, "p weight of bounded_strip_regular");
  cmd->add_option("--q-weight", s.q_weight, "q weight of bounded_strip_regular");
}

SampleRegion parse_region(const std::string& text, int nvars) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  auto num = [&](std::size_t i) {
    try {
      return std::stod(parts.at(i));
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadSpec, "bad region '" + text + "'");
    }
  };
  if (parts.size() == 2 && parts[0] == "ball") return SampleRegion::ball(num(1), nvars);
  if (parts.size() == 3 && parts[0] == "annulus") return SampleRegion::annulus(num(1), num(2), nvars);
  throw Error(ErrorKind::BadSpec, "region must be ball:R or annulus:r0:r1, got '" + text + "'");
}

// ---------------------------------------------------------------- output

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    }
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// csv_table, when given, replaces the generic key,value listing.
void emit(const Json& report, const std::string& format, const std::function<void(std::ostream&)>& csv_table = {}) {
  if (format == "json") {
    std::cout << dump(report);
    return;
  }
  if (format == "csv" && csv_table) {
    csv_table(std::cout);
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  if (format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : rows) std::cout << csv_field(k) << ',' << csv_field(v) << '\n';
  } else {
    for (const auto& [k, v] : rows) std::cout << k << ": " << v << '\n';
  }
}

Json point_json(PointView p) {
  Json out = Json::array();
  for (const auto& q : p) out.push_back(to_json(q));
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_check_regular(const FnSpec& fs, const std::string& region, std::size_t samples, double tol,
                      const std::string& method, const Common& c) {
  const QFunction f = load_function(fs);
  DiffOptions opt;
  if (method == "exact") opt.method = DiffMethod::Exact;
  else if (method == "fd") opt.method = DiffMethod::FiniteDifference;
  const auto pts = sample_region(parse_region(region, f.nvars()), samples, c.seed);
  const auto r = is_regular(f, pts, tol, opt);
  emit(Json{{"command", "check-regular"},
            {"function", f.name()},
            {"region", region},
            {"samples", r.samples},
            {"seed", c.seed},
            {"max_residual", r.max_residual},
            {"worst_point", point_json(r.worst_point)},
            {"tol", r.tol},
            {"passed", r.passed}},
       c.format);
  return r.passed ? kPass : kFail;
}

int cmd_reconstruct(const FnSpec& fs, const std::string& p0s, const std::string& q0s, int resolution, double radius,
                    double tol, const Common& c) {
  const QFunction f = load_function(fs);
  const SphereGrid gp = sphere_grid(Quaternion{}, radius, resolution);
  const Quaternion p0 = parse_quaternion(p0s);
  Quaternion value;
  Quaternion direct;
  Json point;
  if (f.nvars() == 1) {
    value = cf_integral(f, gp, p0);
    const Quaternion pt[1] = {p0};
    direct = f.evaluate(pt);
    point = Json::array({to_json(p0)});
  } else {
    const Quaternion q0 = parse_quaternion(q0s);
    value = cf_integral2(f, gp, gp, p0, q0);
    const Quaternion pt[2] = {p0, q0};
    direct = f.evaluate(pt);
    point = Json::array({to_json(p0), to_json(q0)});
  }
  const double err = norm(value - direct);
  const bool ok = err <= tol;
  emit(Json{{"command", "reconstruct"},
            {"function", f.name()},
            {"point", std::move(point)},
            {"resolution", resolution},
            {"radius", radius},
            {"integral", to_json(value)},
            {"direct", to_json(direct)},
            {"error", err},
            {"tol", tol},
            {"passed", ok}},
       c.format);
  return ok ? kPass : kFail;
}

int cmd_taylor(const FnSpec& fs, const std::string& centre_s, int order, const std::string& method, double radius,
               const Common& c) {
  const QFunction f = load_function(fs);
  if (order > kFdOrderCap) {
    throw Error(ErrorKind::OrderTooHigh, "order " + std::to_string(order) + " exceeds the cap " +
                                             std::to_string(kFdOrderCap));
  }
  TaylorOptions opt;
  if (method == "exact") opt.method = TaylorMethod::Exact;
  else if (method == "fd") opt.method = TaylorMethod::FiniteDifference;
  else if (method == "integral") opt.method = TaylorMethod::Integral;
  Point centre(static_cast<std::size_t>(f.nvars()), Quaternion{});
  centre[0] = parse_quaternion(centre_s);
  const double R = radius > 0.0 ? radius : f.scale();
  auto s = taylor_coeffs(f, centre, order, opt);
  Json report{{"command", "taylor"}, {"function", f.name()}, {"series", to_json(s)}, {"radius_check", nullptr}};
  // the radius proxy needs shells 4..8 at least
  bool passed = true;
  if (order >= 8) {
    const auto rr = check_radius_lower_bound(f, centre, R, order, opt);
    s.radius_estimate = rr.estimate;
    report["series"]["radius_estimate"] = number_json(rr.estimate);
    report["radius_check"] = Json{{"estimate", number_json(rr.estimate)},
                                  {"bound", number_json(rr.bound)},
                                  {"R", number_json(rr.radius)},
                                  {"order", rr.order},
                                  {"passed", rr.passed}};
    passed = rr.passed;
  }
  emit(report, c.format, [&](std::ostream& out) {
    out << "a0,a1,a2,a3,c0,c1,c2,c3\n";
    const auto& coeffs = report["series"]["coeffs"];
    for (const auto& row : coeffs) {
      const auto& a = row["alpha"];
      const auto& q = row["coeff"];
      out << a[0] << ',' << a[1] << ',' << a[2] << ',' << a[3] << ',' << q[0].dump() << ',' << q[1].dump() << ','
          << q[2].dump() << ',' << q[3].dump() << '\n';
    }
  });
  return passed ? kPass : kFail;
}

struct ExtendArgs {
  FnSpec truth;
  std::string domain;
  double delta = 0.3;
  int order = 10;
  double margin = 1.0;
  double probe_tol = 1e-4;
  std::vector<std::string> probes;
};

DomainDescriptor parse_domain(const std::string& text) {
  if (text.empty()) throw Error(ErrorKind::BadSpec, "no domain given (--domain)");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts[0] != "model" || parts.size() > 4) {
    throw Error(ErrorKind::BadSpec, "domain must be model[:kappa[:c[:u_radius]]], got '" + text + "'");
  }
  double v[3] = {0.1, 1.0, 0.7};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    try {
      v[i - 1] = std::stod(parts[i]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadSpec, "bad domain parameter '" + parts[i] + "'");
    }
  }
  try {
    return model_domain(v[0], v[1], v[2]);
  } catch (const Error& e) {
    throw Error(ErrorKind::BadSpec, e.what());
  }
}

int cmd_extend(const ExtendArgs& a, const Common& c) {
  const DomainDescriptor d = parse_domain(a.domain);
  const QFunction f = load_function(a.truth);
  if (f.nvars() != 2) throw Error(ErrorKind::BadSpec, "the truth must be a two-variable function");
  if (a.order > kDefaultTaylorCap) {
    throw Error(ErrorKind::OrderTooHigh, "order " + std::to_string(a.order) + " exceeds the cap");
  }
  PipelineOptions opt;
  opt.order = a.order;
  opt.margin = a.margin;
  opt.seed = c.seed;
  opt.probe_tolerance = a.probe_tol;
  for (const auto& p : a.probes) {
    const auto bar = p.find('|');
    if (bar == std::string::npos) throw Error(ErrorKind::BadSpec, "probe must be 'p|q', got '" + p + "'");
    opt.extra_probes.push_back(Point{parse_quaternion(p.substr(0, bar)), parse_quaternion(p.substr(bar + 1))});
  }
  const auto r = hanges_treves_pipeline(f, d, a.delta, opt);
  Json report{{"command", "extend"}, {"truth", f.name()}, {"domain", a.domain}, {"seed", c.seed}};
  const Json body = to_json(r);
  for (const auto& [k, v] : body.items()) report[k] = v;
  emit(report, c.format, [&](std::ostream& out) {
    out << "p0,p1,p2,p3,q0,q1,q2,q3,certified,F0,F1,F2,F3,T0,T1,T2,T3,abs_error\n";
    for (const auto& row : report["probe_table"]) {
      for (const auto& q : row["point"]) {
        for (const auto& x : q) out << x.dump() << ',';
      }
      out << (row["certified"].get<bool>() ? "true" : "false") << ',';
      for (int l = 0; l < 4; ++l) out << (row["F_value"].is_null() ? "" : row["F_value"][l].dump()) << ',';
      for (int l = 0; l < 4; ++l) out << row["truth_value"][l].dump() << ',';
      out << (row["abs_error"].is_null() ? "" : row["abs_error"].dump()) << '\n';
    }
  });
  if (!r.certified) return kInfeasible;
  return r.passed ? kPass : kFail;
}

int cmd_grid(int resolution, double radius, const std::string& centre_s, const Common& c) {
  const SphereGrid g = sphere_grid(parse_quaternion(centre_s), radius, resolution);
  double wsum = 0.0;
  Json nodes = Json::array();
  for (std::size_t n = 0; n < g.size(); ++n) {
    wsum += g.weights[n];
    nodes.push_back(Json{{"node", to_json(g.nodes[n])}, {"weight", g.weights[n]}, {"normal", to_json(g.normal_form[n])}});
  }
  const double exact = 2.0 * std::numbers::pi * std::numbers::pi * radius * radius * radius;
  emit(Json{{"command", "grid"},
            {"center", to_json(g.center)},
            {"radius", radius},
            {"resolution", resolution},
            {"size", g.size()},
            {"weight_sum", wsum},
            {"area", exact},
            {"nodes", std::move(nodes)}},
       c.format, [&](std::ostream& out) { write_grid_csv(g, out); });
  return kPass;
}

int cmd_submean(const std::optional<FnSpec>& fs, SubmeanOptions opt, const Common& c) {
  SuiteResult r;
  if (!fs) {
    r = submean_suite(opt);
    emit(r.report, c.format);
    return r.passed ? kPass : kFail;
  }
  const QFunction f = load_function(*fs);
  if (f.nvars() != 2) throw Error(ErrorKind::BadSpec, "submean needs a two-variable function");
  r = submean_check(f, opt);
  emit(r.report, c.format, [&](std::ostream& out) {
    const CoefficientSlices slices(f, sphere_grid(Quaternion{}, 1.0, opt.p_resolution),
                                   sphere_grid(opt.q0, opt.q_radius, opt.q_resolution), opt.order);
    write_u_alpha_csv(slices, opt.order, opt.disc_radius, opt.n_theta, out);
  });
  return r.passed ? kPass : kFail;
}

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NoFeasibleEpsilon:
    case ErrorKind::RadiusNotCertified:
      return kInfeasible;
    case ErrorKind::PointOnOrOutsideSphere:
    case ErrorKind::OutOfDomain:
    case ErrorKind::EvaluationFailure:
    case ErrorKind::OutsideConvergenceRegion:
    case ErrorKind::OutsideGamma:
    case ErrorKind::DomainViolation:
    case ErrorKind::ZeroDivisor:
      return kFail;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternionic regular functions: integral formulas, Taylor radii and boundary extension"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
  app.add_option("--seed", common.seed, "seed for sample points")->capture_default_str();

  FnSpec cr_fn;
  std::string cr_region = "ball:1";
  std::size_t cr_samples = 1000;
  double cr_tol = 1e-6;
  std::string cr_method = "auto";
  auto* cr = app.add_subcommand("check-regular", "test dbar f = 0 on sampled points");
  add_fn_options(cr, cr_fn);
  cr->add_option("--region", cr_region, "ball:R or annulus:r0:r1")->capture_default_str();
  cr->add_option("--samples", cr_samples)->capture_default_str();
  cr->add_option("--tol", cr_tol)->capture_default_str();
  cr->add_option("--method", cr_method)->check(CLI::IsMember({"auto", "exact", "fd"}))->capture_default_str();

  FnSpec rc_fn;
  std::string rc_p0 = "0";
  std::string rc_q0 = "0";
  int rc_res = 32;
  double rc_radius = 1.0;
  double rc_tol = 1e-6;
  auto* rc = app.add_subcommand("reconstruct", "compare the integral formula with direct evaluation");
  add_fn_options(rc, rc_fn);
  rc->add_option("--p0", rc_p0, "evaluation point")->capture_default_str();
  rc->add_option("--q0", rc_q0, "second evaluation point for two-variable functions")->capture_default_str();
  rc->add_option("--resolution", rc_res)->capture_default_str();
  rc->add_option("--radius", rc_radius, "sphere radius")->capture_default_str();
  rc->add_option("--tol", rc_tol)->capture_default_str();

  FnSpec tl_fn;
  std::string tl_center = "0";
  int tl_order = 10;
  std::string tl_method = "auto";
  double tl_radius = 0.0;
  auto* tl = app.add_subcommand("taylor", "Taylor table and radius lower-bound check");
  add_fn_options(tl, tl_fn);
  tl->add_option("--at", tl_center, "expansion point")->capture_default_str();
  tl->add_option("-N,--order", tl_order)->capture_default_str();
  tl->add_option("--method", tl_method)
      ->check(CLI::IsMember({"auto", "exact", "fd", "integral"}))
      ->capture_default_str();
  tl->add_option("--R", tl_radius, "regularity radius R (default: the function's scale)");

  ExtendArgs ex;
  auto* ext = app.add_subcommand("extend", "run the boundary-extension pipeline");
  add_fn_options(ext, ex.truth, "truth");
  ext->add_option("--domain", ex.domain, "model[:kappa[:c[:u_radius]]]");
  ext->add_option("--delta", ex.delta)->capture_default_str();
  ext->add_option("-N,--order", ex.order)->capture_default_str();
  ext->add_option("--margin", ex.margin)->capture_default_str();
  ext->add_option("--probe-tol", ex.probe_tol)->capture_default_str();
  ext->add_option("--probe", ex.probes, "extra probe 'p|q' (quaternions as x0,x1,x2,x3)");

  int gr_res = 8;
  double gr_radius = 1.0;
  std::string gr_center = "0";
  auto* gr = app.add_subcommand("grid", "dump a sphere quadrature grid");
  gr->add_option("--resolution", gr_res)->capture_default_str();
  gr->add_option("--radius", gr_radius)->capture_default_str();
  gr->add_option("--center", gr_center)->capture_default_str();

  FnSpec sm_fn;
  SubmeanOptions sm_opt;
  auto* sm = app.add_subcommand("submean", "disc-average check of u_alpha (all suite functions without --fn)");
  sm->add_option("--fn", sm_fn.name, "two-variable zoo name or PolyFunction JSON file");
  sm->add_option("--center", sm_fn.center);
  sm->add_option("--index", sm_fn.index);
  sm->add_option("--p-weight", sm_fn.p_weight);
  sm->add_option("--q-weight", sm_fn.q_weight);
  sm->add_option("--order", sm_opt.order)->capture_default_str();
  sm->add_option("--disc-radius", sm_opt.disc_radius)->capture_default_str();
  sm->add_option("--n-theta", sm_opt.n_theta)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*cr) return cmd_check_regular(cr_fn, cr_region, cr_samples, cr_tol, cr_method, common);
    if (*rc) return cmd_reconstruct(rc_fn, rc_p0, rc_q0, rc_res, rc_radius, rc_tol, common);
    if (*tl) return cmd_taylor(tl_fn, tl_center, tl_order, tl_method, tl_radius, common);
    if (*ext) return cmd_extend(ex, common);
    if (*gr) return cmd_grid(gr_res, gr_radius, gr_center, common);
    if (*sm) {
      return cmd_submean(sm_fn.name.empty() ? std::nullopt : std::optional<FnSpec>(sm_fn), sm_opt, common);
    }
  } catch (const Error& e) {
    const int code = exit_for(e);
    Json err{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"exit_code", code}};
    if (e.kind() == ErrorKind::NoFeasibleEpsilon) {
      err["delta"] = *ext ? Json(ex.delta) : Json(nullptr);
      err["epsilon_threshold"] = *ext ? number_json(epsilon_threshold(ex.delta, ex.margin)) : Json(nullptr);
    }
    std::cerr << err.dump(2) << '\n';
    return code;
  }
  return kUsage;
}
