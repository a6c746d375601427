#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/profile.h"

namespace cascade {

using BetaSpec = Profile;

struct PlantConfig {
  double L = 1.0;
  double c = 0.0;
  BetaSpec beta = Profile::constant(1.0, 1.0);
  std::optional<double> alpha;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::optional<int> offending_n;
};

// Real part of the damped hyperbolic eigenvalues.
double rho(double alpha, double L = 1.0);
// Inverse of rho: the damping gain giving real part r < 0.
double alpha_for_rho(double r, double L = 1.0);

ValidationReport validate(const PlantConfig& config, double eps_alpha = 1e-6);
// Throws ValidationError carrying the first violation.
void require_valid(const PlantConfig& config, double eps_alpha = 1e-6);

PlantConfig config_from_json_text(const std::string& text);
PlantConfig load_config(const std::string& path);
std::string config_to_json_text(const PlantConfig& config);

}  // namespace cascade
