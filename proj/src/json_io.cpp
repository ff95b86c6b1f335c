#include "fueter/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fueter/error.hpp"

namespace fueter {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::BadSpec, what); }

Json point_json(const Point& p) {
  Json out = Json::array();
  for (const auto& q : p) out.push_back(to_json(q));
  return out;
}

Json optional_json(const std::optional<double>& x) { return x ? number_json(*x) : Json(nullptr); }

}  // namespace

Json to_json(const Quaternion& q) { return Json::array({q.x0, q.x1, q.x2, q.x3}); }

Quaternion quaternion_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) bad("quaternion must be an array of four numbers");
  Quaternion q;
  for (int l = 0; l < 4; ++l) {
    const auto& v = j[static_cast<std::size_t>(l)];
    if (!v.is_number()) bad("quaternion components must be numbers");
    q[l] = v.get<double>();
  }
  return q;
}

Json number_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const PolyFunction& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back(Json{{"exponents", e}, {"coeff", to_json(c)}});
  return Json{{"nvars", f.nvars()}, {"terms", std::move(terms)}};
}

PolyFunction poly_from_json(const Json& j) {
  if (!j.is_object()) bad("polynomial spec must be a JSON object");
  if (!j.contains("nvars") || !j["nvars"].is_number_integer()) bad("polynomial spec needs an integer 'nvars'");
  const int nvars = j["nvars"].get<int>();
  if (nvars < 1 || nvars > kMaxVariables) bad("'nvars' must be 1 or 2");
  if (!j.contains("terms") || !j["terms"].is_array()) bad("polynomial spec needs a 'terms' array");
  PolyFunction f(nvars);
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("exponents") || !t.contains("coeff")) {
      bad("each term needs 'exponents' and 'coeff'");
    }
    const auto& e = t["exponents"];
    if (!e.is_array() || e.size() != static_cast<std::size_t>(4 * nvars)) {
      bad("'exponents' must list 4 * nvars integers");
    }
    PolyFunction::Exponents ex;
    for (const auto& v : e) {
      if (!v.is_number_integer() || v.get<int>() < 0) bad("exponents must be non-negative integers");
      ex.push_back(v.get<int>());
    }
    f.add_term(ex, quaternion_from_json(t["coeff"]));
  }
  return f;
}

PolyFunction poly_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return poly_from_json(j);
}

Json to_json(const TaylorSeries& s) {
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    const auto& a = s.indices[i];
    coeffs.push_back(Json{{"alpha", {a[0], a[1], a[2], a[3]}}, {"coeff", to_json(s.coeffs[i])}});
  }
  return Json{{"nvars", s.nvars},
              {"variable", s.variable},
              {"center", to_json(s.center())},
              {"base_point", point_json(s.base_point)},
              {"order", s.order},
              {"coeffs", std::move(coeffs)},
              {"radius_estimate", optional_json(s.radius_estimate)}};
}

Json to_json(const ExtensionResult& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes) {
    probes.push_back(Json{{"point", point_json(p.point)},
                          {"F_value", p.F_value ? to_json(*p.F_value) : Json(nullptr)},
                          {"truth_value", to_json(p.truth_value)},
                          {"abs_error", optional_json(p.abs_error)},
                          {"certified", p.certified}});
  }
  const auto& f = r.fatou;
  return Json{
      {"epsilon", number_json(r.epsilon)},
      {"delta", number_json(r.delta)},
      {"r_cert", number_json(r.r_cert)},
      {"strip_residual", number_json(r.strip_residual)},
      {"probe_table", std::move(probes)},
      {"delta_effective", number_json(r.delta_effective)},
      {"margin", r.margin},
      {"epsilon_prime", number_json(r.epsilon_prime)},
      {"shrink", r.shrink},
      {"order", r.order},
      {"certified", r.certified},
      {"strip_radius", number_json(r.strip_radius)},
      {"sphere_radius", number_json(r.sphere_radius)},
      {"strip_points", r.strip_points},
      {"p_check", {{"samples", r.p_check.samples}, {"min_rq", number_json(r.p_check.min_rq)},
                   {"worst_p", to_json(r.p_check.worst_p)}}},
      {"rq_origin", number_json(r.rq_origin)},
      {"certificate_consistent", r.certificate_consistent},
      {"normal_form",
       {{"max_rho_on_gamma", r.normal_form.max_rho_on_gamma},
        {"max_tangential", r.normal_form.max_tangential},
        {"epsilon_prime", r.normal_form.epsilon_prime},
        {"samples", r.normal_form.samples},
        {"certified", r.normal_form.certified}}},
      {"fatou",
       {{"order", f.order},
        {"disc_radius", f.disc_radius},
        {"n_theta", f.n_theta},
        {"alphas", f.alphas},
        {"submean_violations", f.submean_violations},
        {"worst_submean_gap", number_json(f.worst_submean_gap)},
        {"proxy_center", number_json(f.proxy_center)},
        {"proxy_average", number_json(f.proxy_average)},
        {"chain_holds", f.chain_holds},
        {"resolved_alphas", f.resolved_alphas},
        {"termwise_violations", f.termwise_violations},
        {"bound_far", number_json(f.bound_far)},
        {"bound_u", number_json(f.bound_u)},
        {"averaged_bound", number_json(f.averaged_bound)},
        {"log_inverse_certificate", number_json(f.log_inverse_certificate)},
        {"bound_reproduces", f.bound_reproduces},
        {"has_u", f.has_u},
        {"u_side_rq", number_json(f.u_side_rq)},
        {"u_side_required", number_json(f.u_side_required)},
        {"u_side_ok", f.u_side_ok}}},
      {"max_probe_error", number_json(r.max_probe_error)},
      {"accepted_probes", r.accepted_probes},
      {"guard_queries", r.guard_queries},
      {"guard_violations", r.guard_violations},
      {"passed", r.passed}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fueter
