#include "cascade/synthesis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cascade/errors.h"
#include "cascade/lyapunov.h"
#include "cascade/parallel.h"

namespace cascade {

namespace {

double default_epsilon(double L, double rho_value, double delta) {
  double floor = 2 * L * L / (M_PI * M_PI);
  if (!(std::abs(rho_value) > delta)) throw DesignError("damping too weak: need rho < -delta");
  return std::max(floor, 2 / (std::abs(rho_value) - delta));
}

void check_targets(const std::vector<double>& t, std::size_t n, double delta, const char* what) {
  if (t.size() != n)
    throw ValidationError(std::string(what) + ": expected " + std::to_string(n) + " targets, got " +
                          std::to_string(t.size()));
  for (double x : t)
    if (!(x < -delta)) throw ValidationError(std::string(what) + ": target poles must lie left of -delta");
}

std::vector<cd> sorted_eigs(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<cd> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

double max_real_eig(const Eigen::MatrixXd& A) {
  double m = -std::numeric_limits<double>::infinity();
  for (cd z : sorted_eigs(A)) m = std::max(m, z.real());
  return m;
}

// Sum of the last dyadic block and geometric extrapolation of the block ratio.
struct Series {
  double partial = 0, bound = 0;
};

Series dyadic_tail(const std::vector<std::pair<int, double>>& terms, int first, int cut) {
  Series s;
  double b0 = 0, b1 = 0;
  for (auto [k, t] : terms) {
    if (k <= first || k > cut) continue;
    s.partial += t;
    if (k > cut / 2)
      b1 += t;
    else if (k > cut / 4)
      b0 += t;
  }
  s.bound = s.partial;
  if (b1 == 0) return s;
  if (b0 == 0 || b1 >= b0) throw NumericError("tail terms are not decaying; the coefficient table is too short");
  double r = b1 / b0;
  s.bound += b1 * r / (1 - r);
  return s;
}

int smallest_gamma_mode(const CoefficientTable& t, int N0) {
  int best = 1;
  double bm = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= N0; ++n) {
    double v = std::abs(t.gamma.at(n - 1).mant);
    if (v < bm) {
      bm = v;
      best = n;
    }
  }
  return best;
}

}  // namespace

Structure choose_structure(const PlantConfig& cfg, double delta, std::optional<double> epsilon) {
  if (!(delta > 0)) throw ValidationError("delta must be positive");
  const double L = cfg.L;
  if (epsilon && !(*epsilon > L * L / (M_PI * M_PI))) throw ValidationError("epsilon must exceed L^2/pi^2");
  Structure s;
  s.N0 = 1;
  while (cfg.c - (s.N0 + 1.0) * (s.N0 + 1.0) * M_PI * M_PI / (L * L) >= -delta) ++s.N0;
  double target = epsilon ? -1.25 * (delta + 1 / *epsilon) : -1.25 * delta;
  PlantConfig trial = cfg;
  for (int k = 0; k < 60; ++k) {
    trial.alpha = alpha_for_rho(target, L);
    if (validate(trial).ok) break;
    target *= 1.01;
  }
  require_valid(trial);
  s.alpha = *trial.alpha;
  s.rho = rho(s.alpha, L);
  s.epsilon = epsilon ? *epsilon : default_epsilon(L, s.rho, delta);
  return s;
}

std::vector<double> default_targets(const Eigen::MatrixXd& A, double delta) {
  std::vector<double> out;
  for (cd z : sorted_eigs(A))
    if (std::abs(z.imag()) < 1e-12 && z.real() <= -2 * delta) out.push_back(z.real());
  const std::size_t n = A.rows();
  for (int j = 0; out.size() < n; ++j) {
    double t = -delta * (1.1 + 0.1 * j);
    bool clash = false;
    for (double k : out)
      if (std::abs(k - t) < 1e-9 * std::max(1.0, std::abs(t))) clash = true;
    if (!clash) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::RowVectorXd place_poles(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, const std::vector<double>& targets) {
  const int n = static_cast<int>(A.rows());
  if (static_cast<int>(targets.size()) != n) throw ValidationError("place_poles: one target per state required");
  KalmanResult kr = kalman_controllable(A, B);
  if (!kr.controllable) {
    std::ostringstream os;
    os << "pair is not controllable (rank " << kr.rank << " of " << n << ", modal margin "
       << kr.modal_margin << ")";
    throw DesignError(os.str());
  }
  Eigen::MatrixXd C(n, n);
  Eigen::VectorXd col = B;
  for (int j = 0; j < n; ++j) {
    C.col(j) = col;
    col = A * col;
  }
  Eigen::MatrixXd pA = Eigen::MatrixXd::Identity(n, n);
  for (double t : targets) pA = pA * (A - t * Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd en = Eigen::VectorXd::Zero(n);
  en(n - 1) = 1;
  Eigen::VectorXd x = C.transpose().fullPivLu().solve(en);
  Eigen::RowVectorXd K = -(x.transpose() * pA);

  std::vector<cd> got = sorted_eigs(A + B * K);
  std::vector<double> want = targets;
  std::sort(want.begin(), want.end());
  for (int i = 0; i < n; ++i)
    if (std::abs(got[i] - want[i]) > 1e-6 * std::max(1.0, std::abs(want[i])))
      throw NumericError("pole placement missed its targets; the pair is badly conditioned");
  return K;
}

Eigen::VectorXd observer_gain(const Eigen::MatrixXd& A0, const Eigen::RowVectorXd& C0,
                              const std::vector<double>& targets) {
  if (!kalman_observable(A0, C0)) throw DesignError("pair (A0, C0) is not observable");
  return -place_poles(A0.transpose(), C0.transpose(), targets).transpose();
}

double output_tail_weight(Measurement::Kind kind) {
  switch (kind) {
    case Measurement::Kind::Dirichlet: return 2.0;
    case Measurement::Kind::Neumann: return 3.5;
    default: return 0.0;
  }
}

TailSums tail_sums(int N, int M, const CoefficientTable& t, double c1_weight) {
  if (t.n_max < 4 * N || t.m_max < 4 * M) throw ValidationError("tail sums need tables to at least 4N and 4M");
  std::vector<std::pair<int, double>> a1, b1, c1, a2, b2, c2;
  for (int n = N + 1; n <= t.n_max; ++n) {
    a1.push_back({n, std::norm(t.A1(n))});
    b1.push_back({n, std::norm(t.B1(n))});
    c1.push_back({n, std::norm(t.C1(n)) * std::pow(n, -c1_weight)});
  }
  for (int m = M + 1; m <= t.m_max; ++m) {
    a2.push_back({m, std::norm(t.A2(m)) + std::norm(t.A2(-m))});
    b2.push_back({m, std::norm(t.B2(m)) + std::norm(t.B2(-m))});
    c2.push_back({m, std::norm(t.C2(m)) + std::norm(t.C2(-m))});
  }
  TailSums s;
  Series sa1 = dyadic_tail(a1, N, t.n_max), sb1 = dyadic_tail(b1, N, t.n_max), sc1 = dyadic_tail(c1, N, t.n_max);
  Series sa2 = dyadic_tail(a2, M, t.m_max), sb2 = dyadic_tail(b2, M, t.m_max), sc2 = dyadic_tail(c2, M, t.m_max);
  s.Sa = sa1.bound + sa2.bound;
  s.Sb = sb1.bound + sb2.bound;
  s.Sc1 = sc1.bound;
  s.Sc2 = sc2.bound;
  s.Sa_partial = sa1.partial + sa2.partial;
  s.Sb_partial = sb1.partial + sb2.partial;
  s.Sc1_partial = sc1.partial;
  s.Sc2_partial = sc2.partial;
  return s;
}

Eigen::MatrixXcd closed_loop_matrix(const ReducedModel& r, const Eigen::RowVectorXd& K, const Eigen::VectorXd& Lg) {
  const int N0 = r.N0, n1 = N0 + 1, n2 = static_cast<int>(r.A2.size());
  const int d = n1 + N0 + 2 * n2;
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(d, d);
  Eigen::VectorXd Lt = Eigen::VectorXd::Zero(n1);
  Lt.tail(N0) = Lg;
  const int e1 = n1, w2 = n1 + N0, e2 = n1 + N0 + n2;
  F.block(0, 0, n1, n1) = (r.A1 + r.B1 * K).cast<cd>();
  F.block(0, e1, n1, N0) = (Lt * r.C0).cast<cd>();
  F.block(0, e2, n1, n2) = Lt.cast<cd>() * r.C1;
  F.block(e1, e1, N0, N0) = (r.A0 - Lg * r.C0).cast<cd>();
  F.block(e1, e2, N0, n2) = -Lg.cast<cd>() * r.C1;
  F.block(w2, 0, n2, 1) = r.Ba1;
  F.block(w2, 0, n2, n1) += r.Bb1 * K.cast<cd>();
  F.block(w2, w2, n2, n2) = r.A2.asDiagonal();
  F.block(e2, e2, n2, n2) = r.A2.asDiagonal();
  return F;
}

Eigen::VectorXd injection_vector(const ReducedModel& r, const Eigen::VectorXd& Lg) {
  const int N0 = r.N0, n2 = static_cast<int>(r.A2.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * N0 + 1 + 2 * n2);
  v.segment(1, N0) = Lg;
  v.segment(N0 + 1, N0) = -Lg;
  return v;
}

FeasibilityReport feasibility(const ReducedModel& r, const Eigen::RowVectorXd& K, const Eigen::VectorXd& Lg,
                              const TailSums& tails, const FeasibilityInput& in, Eigen::MatrixXcd* P_out) {
  FeasibilityReport rep;
  rep.N = r.N;
  rep.M = r.M;
  rep.tails = tails;
  const double delta = in.delta, eps = in.epsilon;

  double worst = std::max(max_real_eig(r.A1 + r.B1 * K), max_real_eig(r.A0 - Lg * r.C0));
  for (Eigen::Index i = 0; i < r.A2.size(); ++i) worst = std::max(worst, r.A2(i).real());
  if (!(worst < -delta)) throw DesignError("closed-loop matrix has eigenvalues right of -delta; gains are invalid");

  Eigen::MatrixXcd F = closed_loop_matrix(r, K, Lg);
  const Eigen::Index d = F.rows();
  Eigen::MatrixXcd G = F + delta * Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd P = solve_lyapunov(G, -Eigen::MatrixXcd::Identity(d, d));
  P = 0.5 * (P + P.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> pes(P, Eigen::EigenvaluesOnly);
  rep.P_min_eig = pes.eigenvalues().minCoeff();
  rep.P_norm = pes.eigenvalues().cwiseAbs().maxCoeff();
  rep.lyapunov_residual =
      (G.adjoint() * P + P * G + Eigen::MatrixXcd::Identity(d, d)).norm() / std::max(P.norm(), 1e-300);

  rep.eta1 = tails.Sc1 > 0 ? 1 / std::sqrt(tails.Sc1) : r.N;
  rep.eta2 = tails.Sc2 > 0 ? 1 / std::sqrt(tails.Sc2) : std::max(r.M, 1);

  Eigen::VectorXcd PL = P * injection_vector(r, Lg).cast<cd>();
  Eigen::MatrixXcd theta0 = -Eigen::MatrixXcd::Identity(d, d);
  theta0(0, 0) += eps * tails.Sa;
  Eigen::VectorXcd kt = Eigen::VectorXcd::Zero(d);
  kt.head(r.N0 + 1) = K.transpose().cast<cd>();
  theta0 += eps * tails.Sb * kt * kt.adjoint();

  Eigen::MatrixXcd theta = theta0 + (1 / rep.eta1 + 1 / rep.eta2) * PL * PL.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> tes(0.5 * (theta + theta.adjoint()), Eigen::EigenvaluesOnly);
  rep.theta_max_eig = tes.eigenvalues().maxCoeff();

  Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(d + 2, d + 2);
  blk.topLeftCorner(d, d) = theta0;
  blk.block(0, d, d, 1) = PL;
  blk.block(0, d + 1, d, 1) = PL;
  blk.block(d, 0, 1, d) = PL.adjoint();
  blk.block(d + 1, 0, 1, d) = PL.adjoint();
  blk(d, d) = -rep.eta1;
  blk(d + 1, d + 1) = -rep.eta2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> bes(0.5 * (blk + blk.adjoint()), Eigen::EigenvaluesOnly);
  rep.theta_block_max_eig = bes.eigenvalues().maxCoeff();

  const double n = r.N + 1;
  const double w = in.sigma == 2 || in.kind != Measurement::Kind::Distributed ? n * n : 1.0;
  const double S1 = rep.eta1 * tails.Sc1;
  double g1 = 2 * (in.lambda_next + w / eps + delta);
  switch (in.kind) {
    case Measurement::Kind::Distributed: g1 += S1 / w; break;
    case Measurement::Kind::Dirichlet: g1 += S1; break;
    case Measurement::Kind::Neumann: g1 += std::pow(n, 1.5) * S1; break;
  }
  rep.gamma1 = g1;
  rep.gamma2_limit = 2 * (in.rho + 1 / eps + delta);
  rep.gamma2 = rep.gamma2_limit + rep.eta2 * tails.Sc2;
  rep.feasible = rep.theta_max_eig <= 0 && rep.gamma1 <= 0 && rep.gamma2 <= 0 && rep.P_min_eig > 0;
  if (P_out) *P_out = P;
  return rep;
}

namespace {

struct Prepared {
  CoefficientTable table;
  CertifiedController base;
};

FeasibilityInput input_for(const CertifiedController& c, const CoefficientTable& t, int N) {
  FeasibilityInput in;
  in.delta = c.delta;
  in.epsilon = c.epsilon;
  in.sigma = c.sigma;
  in.kind = c.kind;
  in.lambda_next = t.lam1(N + 1);
  in.rho = c.rho;
  return in;
}

FeasibilityReport evaluate(const CertifiedController& c, const CoefficientTable& t, int N, int M,
                           Eigen::MatrixXcd* P) {
  ReducedModel r = build_reduced(c.N0, N, M, t);
  TailSums ts = tail_sums(N, M, t, output_tail_weight(c.kind));
  return feasibility(r, c.K, c.L, ts, input_for(c, t, N), P);
}

}  // namespace

CertifiedController auto_tune(PlantConfig cfg, const Measurement& meas, const DesignSpec& spec, int jobs) {
  const double delta = spec.delta;
  Structure st = choose_structure(cfg, delta, spec.epsilon);
  CertifiedController c;
  c.delta = delta;
  c.kind = meas.kind;
  c.sigma = meas.kind == Measurement::Kind::Distributed ? spec.sigma : 2;
  c.N0 = st.N0;
  if (cfg.alpha) {
    require_valid(cfg);
    c.alpha = *cfg.alpha;
    c.rho = rho(c.alpha, cfg.L);
    c.epsilon = spec.epsilon ? *spec.epsilon : default_epsilon(cfg.L, c.rho, delta);
  } else {
    c.alpha = st.alpha;
    c.rho = st.rho;
    c.epsilon = st.epsilon;
    cfg.alpha = c.alpha;
  }

  const int n_cap = std::max(spec.n_cap, c.N0 + 1), m_cap = std::max(spec.m_cap, 2);
  CoefficientTable t = build_table(cfg, meas, std::max(4 * n_cap, 16), std::max(4 * m_cap, 16), jobs);
  ReducedModel r0 = build_reduced(c.N0, c.N0 + 1, 0, t);

  if (!kalman_controllable(r0.A1, r0.B1).controllable) {
    int n = smallest_gamma_mode(t, c.N0);
    throw DesignError("truncated model is not controllable: coupling coefficient gamma_" + std::to_string(n) +
                      " vanishes");
  }
  if (!kalman_observable(r0.A0, r0.C0)) {
    int n = 1;
    for (int k = 1; k <= c.N0; ++k)
      if (std::abs(t.C1(k)) < std::abs(t.C1(n))) n = k;
    throw DesignError("truncated model is not observable: output coefficient c_1," + std::to_string(n) +
                      " vanishes");
  }
  c.k_targets = spec.k_targets.empty() ? default_targets(r0.A1, delta) : spec.k_targets;
  c.l_targets = spec.l_targets.empty() ? default_targets(r0.A0, delta) : spec.l_targets;
  check_targets(c.k_targets, c.N0 + 1, delta, "state feedback");
  check_targets(c.l_targets, c.N0, delta, "observer");
  c.K = place_poles(r0.A1, r0.B1, c.k_targets);
  c.L = observer_gain(r0.A0, r0.C0, c.l_targets);

  std::vector<std::pair<int, int>> sizes;
  for (int N = c.N0 + 1, M = 2;;) {
    sizes.push_back({N, M});
    if (N >= n_cap && M >= m_cap) break;
    N = std::min(2 * N, n_cap);
    M = std::min(2 * M, m_cap);
  }
  const int ns = static_cast<int>(sizes.size());
  c.trajectory.assign(ns, {});
  std::vector<Eigen::MatrixXcd> Ps(ns);
  int chosen = -1;
  if (jobs > 1) {
    parallel_for(ns, jobs, [&](int i) { c.trajectory[i] = evaluate(c, t, sizes[i].first, sizes[i].second, &Ps[i]); });
    for (int i = 0; i < ns && chosen < 0; ++i)
      if (c.trajectory[i].feasible) chosen = i;
  } else {
    for (int i = 0; i < ns; ++i) {
      c.trajectory[i] = evaluate(c, t, sizes[i].first, sizes[i].second, &Ps[i]);
      if (c.trajectory[i].feasible) {
        chosen = i;
        c.trajectory.resize(i + 1);
        break;
      }
    }
  }
  c.certified = chosen >= 0;
  int pick = c.certified ? chosen : static_cast<int>(c.trajectory.size()) - 1;
  c.margins = c.trajectory[pick];
  c.P = Ps[pick];
  c.N = c.margins.N;
  c.M = c.margins.M;
  return c;
}

CertifiedController certify_at(const PlantConfig& cfg, const Measurement& meas, const CertifiedController& gains,
                               int N, int M) {
  if (!cfg.alpha) throw ValidationError("certify_at needs the damping gain alpha");
  CertifiedController c = gains;
  c.alpha = *cfg.alpha;
  c.rho = rho(c.alpha, cfg.L);
  c.kind = meas.kind;
  CoefficientTable t = build_table(cfg, meas, std::max(4 * N, 16), std::max(4 * M, 16));
  c.margins = evaluate(c, t, N, M, &c.P);
  c.trajectory = {c.margins};
  c.N = N;
  c.M = M;
  c.certified = c.margins.feasible;
  return c;
}

}  // namespace cascade
