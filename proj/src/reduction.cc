#include "cascade/reduction.h"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "cascade/errors.h"

namespace cascade {

std::vector<int> hyperbolic_order(int M) {
  std::vector<int> v{0};
  for (int m = 1; m <= M; ++m) {
    v.push_back(-m);
    v.push_back(m);
  }
  return v;
}

ReducedModel build_reduced(int N0, int N, int M, const CoefficientTable& t) {
  if (N0 < 1 || N < N0 + 1 || M < 0) throw ValidationError("need N0 >= 1, N >= N0+1, M >= 0");
  if (N > t.n_max || M > t.m_max) throw ValidationError("coefficient table does not cover the requested orders");
  ReducedModel r;
  r.N0 = N0;
  r.N = N;
  r.M = M;
  r.A0 = Eigen::MatrixXd::Zero(N0, N0);
  r.Ba0.resize(N0);
  r.Bb0.resize(N0);
  r.C0.resize(N0);
  for (int n = 1; n <= N0; ++n) {
    r.A0(n - 1, n - 1) = t.lam1(n);
    r.Ba0(n - 1) = t.A1(n);
    r.Bb0(n - 1) = t.B1(n);
    r.C0(n - 1) = t.C1(n);
  }
  r.A1 = Eigen::MatrixXd::Zero(N0 + 1, N0 + 1);
  r.A1.block(1, 0, N0, 1) = r.Ba0;
  r.A1.block(1, 1, N0, N0) = r.A0;
  r.B1.resize(N0 + 1);
  r.B1 << 1.0, r.Bb0;

  const int n2 = N - N0 + 2 * M + 1;
  r.A2.resize(n2);
  r.Ba1.resize(n2);
  r.Bb1.resize(n2);
  r.C1.resize(n2);
  int k = 0;
  for (int n = N0 + 1; n <= N; ++n, ++k) {
    r.A2(k) = t.lam1(n);
    r.Ba1(k) = t.A1(n);
    r.Bb1(k) = t.B1(n);
    r.C1(k) = t.C1(n);
    r.order2.push_back(Mode::parabolic(n));
  }
  for (int m : hyperbolic_order(M)) {
    r.A2(k) = t.lam2(m);
    r.Ba1(k) = t.A2(m);
    r.Bb1(k) = t.B2(m);
    r.C1(k) = t.C2(m);
    r.order2.push_back(Mode::hyperbolic(m));
    ++k;
  }
  return r;
}

KalmanResult kalman_controllable(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double tol) {
  const int n = static_cast<int>(A.rows());
  KalmanResult res;
  if (B.norm() == 0) return res;
  // Controller Hessenberg form: orthogonal Q with Q^T B = |B| e1 and Q^T A Q
  // upper Hessenberg; the rank is the length of the leading run of
  // non-negligible subdiagonal entries.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd At = Q.transpose() * A * Q;
  Eigen::MatrixXd H = n > 1 ? Eigen::MatrixXd(Eigen::HessenbergDecomposition<Eigen::MatrixXd>(At).matrixH()) : At;
  const double scale = std::max(A.norm(), 1e-300);
  res.staircase_rank = 1;
  while (res.staircase_rank < n && std::abs(H(res.staircase_rank, res.staircase_rank - 1)) > tol * scale)
    ++res.staircase_rank;

  Eigen::EigenSolver<Eigen::MatrixXd> es(A.transpose());
  const Eigen::VectorXcd mu = es.eigenvalues();
  const double round_off = 64 * std::numeric_limits<double>::epsilon();
  res.modal_margin = std::numeric_limits<double>::infinity();
  int cut = 0;
  bool repeated = false;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) repeated = repeated || std::abs(mu(i) - mu(k)) <= 1e-8 * scale;
    Eigen::VectorXcd w = es.eigenvectors().col(i);
    w /= w.norm();
    double m = std::abs(w.dot(B.cast<cd>())) / std::max((w.cwiseAbs().transpose() * B.cwiseAbs()).value(), 1e-300);
    if (m <= round_off) ++cut;
    if (m < res.modal_margin) {
      res.modal_margin = m;
      res.modal_worst_lambda = mu(i);
    }
  }
  res.rank = repeated ? res.staircase_rank : std::min(res.staircase_rank, n - cut);
  res.controllable = res.rank == n;

  res.hautus_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd P(n, n + 1);
    P.leftCols(n) = A.cast<cd>() - mu(i) * Eigen::MatrixXcd::Identity(n, n);
    P.col(n) = B.cast<cd>() * (A.norm() / B.norm());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
    res.hautus_margin =
        std::min(res.hautus_margin, svd.singularValues()(n - 1) / std::max(svd.singularValues()(0), 1e-300));
  }
  return res;
}

bool kalman_observable(const Eigen::MatrixXd& A0, const Eigen::RowVectorXd& C0, double tol) {
  return kalman_controllable(A0.transpose(), C0.transpose(), tol).controllable;
}

GramianResult truncated_observability_gramian(const std::vector<cd>& lambdas, const std::vector<cd>& outputs,
                                              const std::vector<double>& weights, double T) {
  const int n = static_cast<int>(lambdas.size());
  if (outputs.size() != lambdas.size() || (!weights.empty() && weights.size() != lambdas.size()))
    throw ValidationError("gramian inputs have mismatched lengths");
  GramianResult g;
  g.G.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      cd z = std::conj(lambdas[j]) + lambdas[k];
      cd I = std::abs(z) < 1e-12 ? cd(T) : (std::exp(z * T) - 1.0) / z;
      double sj = weights.empty() ? 1.0 : weights[j], sk = weights.empty() ? 1.0 : weights[k];
      g.G(j, k) = sj * sk * std::conj(outputs[j]) * outputs[k] * I;
    }
  }
  Eigen::MatrixXcd H = 0.5 * (g.G + g.G.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  g.min_eig = es.eigenvalues().minCoeff();
  g.max_eig = es.eigenvalues().maxCoeff();
  return g;
}

ExponentialFamily observation_family(const std::vector<Mode>& modes, const PlantConfig& cfg) {
  ExponentialFamily fam;
  for (Mode m : modes) {
    m.variant = Variant::Undamped;
    fam.lambdas.push_back(eigenvalue(m, cfg).lambda);
    fam.outputs.push_back(psi(m, cfg).h(cfg.L));
  }
  return fam;
}

std::vector<double> unit_l2_weights(const std::vector<cd>& lambdas, double T) {
  std::vector<double> w;
  for (cd l : lambdas) {
    double z = 2 * l.real();
    double nrm2 = std::abs(z) < 1e-12 ? T : std::expm1(z * T) / z;
    w.push_back(1.0 / std::sqrt(nrm2));
  }
  return w;
}

}  // namespace cascade
