#pragma once

/**
 * @file json_io.hpp
 * @brief JSON forms of polynomials, Taylor tables and extension results.
 *
 * Quaternions are arrays [x0, x1, x2, x3]. Infinite radii are written as the
 * string "inf". Key order is fixed so equal inputs give identical text.
 */

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fueter/extension.hpp"
#include "fueter/funcrep.hpp"
#include "fueter/series.hpp"

namespace fueter {

using Json = nlohmann::ordered_json;

Json to_json(const Quaternion& q);
/// BadSpec unless j is an array of four numbers.
Quaternion quaternion_from_json(const Json& j);

/// A finite double, or "inf" / "-inf", or null for NaN.
Json number_json(double x);

/// {nvars, terms: [{exponents, coeff}]}
Json to_json(const PolyFunction& f);
/// BadSpec on any malformed field.
PolyFunction poly_from_json(const Json& j);
/// Parses a file; BadSpec on unreadable or malformed input.
PolyFunction poly_from_file(const std::filesystem::path& path);

/// {nvars, variable, center, order, coeffs: [{alpha, coeff}], radius_estimate}
Json to_json(const TaylorSeries& s);

/// {epsilon, delta, r_cert, strip_residual, probe_table, ...}
Json to_json(const ExtensionResult& r);

/// Canonical text form: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace fueter
