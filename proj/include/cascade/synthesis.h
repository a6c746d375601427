#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cascade/coupling.h"
#include "cascade/reduction.h"

namespace cascade {

struct DesignSpec {
  double delta = 0.25;
  // empty: default_targets
  std::vector<double> k_targets, l_targets;
  std::optional<double> epsilon;
  int n_cap = 32, m_cap = 64;
  int sigma = 0;  // modal weight n^sigma of the Lyapunov functional, 0 or 2
};

struct Structure {
  int N0 = 1;
  double alpha = 0.0, rho = 0.0, epsilon = 0.0;
};

// N0 >= 1 smallest with lambda_{1,N0+1} < -delta. Without epsilon the damping
// targets rho = -1.25 delta and epsilon = max(2L^2/pi^2, 2/(|rho| - delta));
// with epsilon it targets rho = -1.25 (delta + 1/epsilon).
Structure choose_structure(const PlantConfig& config, double delta, std::optional<double> epsilon = {});

// Open-loop eigenvalues already <= -2 delta are kept; the others are sent to
// -delta (1.1 + 0.1 j), j = 0, 1, ...
std::vector<double> default_targets(const Eigen::MatrixXd& A, double delta);

// Real K with eig(A + B K) = targets (Ackermann).
Eigen::RowVectorXd place_poles(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, const std::vector<double>& targets);
// Real L with eig(A0 - L C0) = targets.
Eigen::VectorXd observer_gain(const Eigen::MatrixXd& A0, const Eigen::RowVectorXd& C0,
                              const std::vector<double>& targets);

struct TailSums {
  double Sa = 0, Sb = 0, Sc1 = 0, Sc2 = 0;          // partial sum + tail bound
  double Sa_partial = 0, Sb_partial = 0, Sc1_partial = 0, Sc2_partial = 0;
};

// Sums over n > N and |m| > M up to the table cutoffs, plus a tail bound from
// the ratio of the last two dyadic blocks. Parabolic output terms are weighted
// by n^{-c1_weight}.
TailSums tail_sums(int N, int M, const CoefficientTable& table, double c1_weight = 0.0);

// Exponent of n weighting the parabolic output tail of a measurement.
double output_tail_weight(Measurement::Kind kind);

struct FeasibilityReport {
  int N = 0, M = 0;
  double theta_max_eig = 0, theta_block_max_eig = 0;
  double gamma1 = 0, gamma2 = 0, gamma2_limit = 0;
  double eta1 = 0, eta2 = 0;
  TailSums tails;
  double P_norm = 0, P_min_eig = 0, lyapunov_residual = 0;
  bool feasible = false;
};

struct FeasibilityInput {
  double delta = 0.25, epsilon = 1.0;
  int sigma = 0;
  Measurement::Kind kind = Measurement::Kind::Distributed;
  double lambda_next = 0;  // lambda_{1,N+1}
  double rho = 0;          // real part of the hyperbolic eigenvalues
};

// Closed-loop matrix on X = (v, w^_1..N0, e_1..N0, w^_{N0+1..N, |m|<=M}, e_{same}).
Eigen::MatrixXcd closed_loop_matrix(const ReducedModel& r, const Eigen::RowVectorXd& K, const Eigen::VectorXd& Lg);
// The injection direction (0, L, -L, 0, 0) of the unmodelled output.
Eigen::VectorXd injection_vector(const ReducedModel& r, const Eigen::VectorXd& Lg);

FeasibilityReport feasibility(const ReducedModel& r, const Eigen::RowVectorXd& K, const Eigen::VectorXd& Lg,
                              const TailSums& tails, const FeasibilityInput& in, Eigen::MatrixXcd* P_out = nullptr);

struct CertifiedController {
  double alpha = 0, rho = 0, delta = 0, epsilon = 0;
  int sigma = 0;
  Measurement::Kind kind = Measurement::Kind::Distributed;
  int N0 = 1, N = 0, M = 0;
  Eigen::RowVectorXd K;
  Eigen::VectorXd L;
  std::vector<double> k_targets, l_targets;
  Eigen::MatrixXcd P;
  FeasibilityReport margins;
  std::vector<FeasibilityReport> trajectory;
  bool certified = false;
};

// Structure, gains, then (N, M) doubled from (N0 + 1, 2) up to the caps.
// config.alpha, when set, overrides the chosen damping.
CertifiedController auto_tune(PlantConfig config, const Measurement& meas, const DesignSpec& spec, int jobs = 1);

// Gains and certificate data for a fixed (N, M), e.g. when reloading a design.
CertifiedController certify_at(const PlantConfig& config, const Measurement& meas, const CertifiedController& gains,
                               int N, int M);

}  // namespace cascade
