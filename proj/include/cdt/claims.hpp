#pragma once

// Runs every checked identity for one configuration and reports each as a
// ClaimReport. Flagged constants are data, never errors.

#include <string>
#include <vector>

#include "cdt/io.hpp"
#include "cdt/report.hpp"
#include "cdt/transform.hpp"

namespace cdt {

struct LedgerConfig {
  Signature sig{0, 2};
  std::vector<double> kappa{0.3, 0.7};
  int split = -1;  // -1: MultiplicitySplit::default_split
  std::string a = "e1";
  std::string b = "e2";
  Normalization norm = Normalization::Raw;
  double t_max = kDefaultTMax;
  int panels = 8;
  int order = 12;
  std::vector<double> kernel_kappas{0.0, 0.25, 0.5, 1.0, 2.0};
  int kernel_samples = 10000;
  int eigen_degree = 4;
  std::vector<double> shift{0.7, -0.4};
};

// Keys: sig {p,q}, kappa, split, a, b, norm, t_max, panels, order,
// kernel_kappas, kernel_samples, eigen_degree, shift. All optional.
LedgerConfig ledger_config_from_json(const json& j);

std::vector<ClaimReport> run_claims_ledger(const LedgerConfig& config);

// Grid on [-L, L] per coordinate with the given multiplicities.
std::shared_ptr<const TensorGrid> make_grid(std::span<const double> kappa, double L, int panels, int order);

}  // namespace cdt
