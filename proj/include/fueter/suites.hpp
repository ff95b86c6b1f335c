#pragma once

/**
 * @file suites.hpp
 * @brief Report builders shared by the CLI and the acceptance tests.
 *
 * Each suite returns its verdict with a JSON report; the JSON is a pure
 * function of the inputs and the seed.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "fueter/json_io.hpp"

namespace fueter {

struct SuiteResult {
  bool passed = false;
  Json report;
};

/// Regular one-variable zoo functions: constant, fueter_variable(1..3), kernel(2).
std::vector<QFunction> regular_zoo_1d();

struct ReconstructionOptions {
  int resolution = 32;
  std::size_t points = 20;
  double inner_radius = 0.7;   // points at distance >= 0.3 from the unit sphere
  double tol = 1e-6;
  double constant_tol = 1e-8;  // constant at the centre, resolution 8
  double control_gap = 0.1;    // identity must miss by at least this much somewhere
};

/// cf_integral against direct evaluation on seeded interior points.
SuiteResult reconstruction_suite(std::uint64_t seed, const ReconstructionOptions& opt = {});

struct SubmeanOptions {
  int order = 8;
  double disc_radius = 0.95;
  int n_theta = 256;
  int p_resolution = 10;
  int q_resolution = 8;
  double q_radius = 0.5;
  Quaternion q0{};
  double tol = 1e-3;
};

/// u_alpha(0) <= disc average + tol for every 1 <= |alpha| <= order, along
/// tau -> (tau, 0, 0, 0) in p with the q-expansion at opt.q0.
SuiteResult submean_check(const QFunction& f, const SubmeanOptions& opt = {});

/// The two-variable zoo functions used for the submean suite.
std::vector<QFunction> submean_zoo();
SuiteResult submean_suite(const SubmeanOptions& opt = {});

struct ExtensionSuiteOptions {
  std::string truth = "product_regular";
  double delta = 0.3;
  PipelineOptions pipeline;
};

/// The pipeline on the model domain; report = the ExtensionResult JSON.
SuiteResult extension_suite(std::uint64_t seed, const ExtensionSuiteOptions& opt = {});

/// Named truth functions for the extension suite: product_regular (tensor
/// polynomial) and q_kernel (singular at q = 2j).
QFunction extension_truth(const std::string& name);

}  // namespace fueter
