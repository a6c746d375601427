#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cascade/coupling.h"

namespace cascade {

struct ReducedModel {
  int N0 = 1, N = 2, M = 0;
  Eigen::MatrixXd A0;
  Eigen::VectorXd Ba0, Bb0;
  Eigen::MatrixXd A1;
  Eigen::VectorXd B1;
  Eigen::RowVectorXd C0;
  Eigen::VectorXcd A2;  // diagonal
  Eigen::VectorXcd Ba1, Bb1;
  Eigen::RowVectorXcd C1;
  std::vector<Mode> order2;  // modes behind the entries of A2
};

// Hyperbolic index order used throughout: 0, -1, 1, -2, 2, ...
std::vector<int> hyperbolic_order(int M);

ReducedModel build_reduced(int N0, int N, int M, const CoefficientTable& table);

struct KalmanResult {
  int rank = 0;
  bool controllable = false;
  int staircase_rank = 0;  // from the controller Hessenberg form
  // min over eigenvalues of |w^H B| / (|w|^T |B|) with w the unit left
  // eigenvector; at rounding level when that mode is cut off from the input
  double modal_margin = 0.0;
  cd modal_worst_lambda;  // eigenvalue attaining it
  // smallest normalised singular value of [A - mu I, B] over the eigenvalues mu
  double hautus_margin = 0.0;
};

KalmanResult kalman_controllable(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double tol = 1e-10);
bool kalman_observable(const Eigen::MatrixXd& A0, const Eigen::RowVectorXd& C0, double tol = 1e-10);

struct GramianResult {
  double min_eig = 0.0, max_eig = 0.0;
  Eigen::MatrixXcd G;
};

// G_jk = int_0^T conj(e_j) e_k dt with e_j(t) = s_j o_j exp(lambda_j t), in closed form.
GramianResult truncated_observability_gramian(const std::vector<cd>& lambdas, const std::vector<cd>& outputs,
                                              const std::vector<double>& weights, double T);

// Exponents and boundary traces psi3(L) of the undamped modes listed.
struct ExponentialFamily {
  std::vector<cd> lambdas, outputs;
};
ExponentialFamily observation_family(const std::vector<Mode>& modes, const PlantConfig& config);

// 1 / ||exp(lambda t)||_{L2(0,T)}
std::vector<double> unit_l2_weights(const std::vector<cd>& lambdas, double T);

}  // namespace cascade
