#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cascade/coupling.h"
#include "cascade/errors.h"
#include "cascade/quadrature.h"

using namespace cascade;

namespace {

PlantConfig make(double L, double c, Profile beta, std::optional<double> alpha = 2.0) {
  PlantConfig cfg;
  cfg.L = L;
  cfg.c = c;
  cfg.beta = std::move(beta);
  cfg.alpha = alpha;
  return cfg;
}

void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::abs(want)) << want; }

// reference quadrature of the defining integral, written against the scaled form
double gamma_reference(int n, double L, double c, const Profile& beta) {
  double l = c - n * n * M_PI * M_PI / (L * L);
  double scale = std::abs(l) * L;
  auto f = [&](double s) {
    return beta(s) * std::sin(n * M_PI * s / L) * 0.5 *
           (std::exp(l * s - scale) - std::exp(-l * s - scale));
  };
  return integrate(f, 0.0, L, beta.breakpoints(), {1e-13}) * std::exp(scale);
}

}  // namespace

TEST(Gamma, ZeroBeta) {
  PlantConfig cfg = make(1.0, 3.0, Profile::constant(1.0, 0.0));
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(gamma(n, cfg).value(), 0.0);
}

TEST(Gamma, ConstantBetaUnitInterval) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0));
  expect_rel(gamma(1, cfg).value(), -283.08777970305878, 1e-10);
  expect_rel(gamma_constant(1, 1.0, 0.0, 1.0).value(), -283.08777970305878, 1e-12);
  expect_rel(gamma_indicator(1, 1.0, 0.0, 1.0, 0.0, 1.0).value(), -283.08777970305878, 1e-12);
}

TEST(Gamma, ZeroEigenvalueBranch) {
  PlantConfig cfg = make(1.0, M_PI * M_PI, Profile::constant(1.0, 1.0), std::nullopt);
  expect_rel(gamma(1, cfg).value(), 1 / M_PI, 1e-10);
  expect_rel(gamma_constant(1, 1.0, M_PI * M_PI, 1.0).value(), 1 / M_PI, 1e-12);
  expect_rel(gamma_indicator(1, 1.0, M_PI * M_PI, 1.0, 0.0, 1.0).value(), 1 / M_PI, 1e-12);
}

TEST(Gamma, OracleValues) {
  expect_rel(gamma(2, make(1.0, 50.0, Profile::indicator(1.0, 0.1, 0.7, 1.0))).value(), -42.444754715320537, 1e-10);
  expect_rel(gamma_indicator(2, 1.0, 50.0, 1.0, 0.1, 0.7).value(), -42.444754715320537, 1e-12);
  expect_rel(gamma(3, make(1.3, 4.0, Profile::indicator(1.3, 0.1, 0.9, 1.5))).value(), -1.3627025133072449e16, 1e-10);
  expect_rel(gamma(4, make(2.0, 3.0, Profile::constant(2.0, 0.5))).value(), 5.5475553308384012e28, 1e-10);
  expect_rel(gamma_constant(4, 2.0, 3.0, 0.5).value(), 5.5475553308384012e28, 1e-12);
}

TEST(Gamma, ScaledRepresentationDoesNotOverflow) {
  Scaled g = gamma_constant(40, 1.0, 0.0, 1.0);
  EXPECT_FALSE(std::isfinite(g.value()));
  EXPECT_TRUE(std::isfinite(g.log_abs()));
  EXPECT_NEAR(g.log_abs() / (1600 * M_PI * M_PI), 1.0, 1e-3);
  EXPECT_EQ(g.sign(), 1);
}

TEST(Gamma, IndicatorMatchesQuadrature) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    double L = 0.6 + u(rng);
    double a = 0.8 * L * u(rng);
    double b = a + (L - a) * (0.1 + 0.9 * u(rng));
    double c = -10 + 70 * u(rng);
    int n = 1 + k % 5;
    double b0 = 0.5 + u(rng);
    Profile beta = Profile::indicator(L, a, b, b0);
    double ref = gamma_reference(n, L, c, beta);
    expect_rel(gamma_indicator(n, L, c, b0, a, b).value(), ref, 1e-8);
    expect_rel(gamma(n, make(L, c, beta, std::nullopt)).value(), ref, 1e-8);
  }
}

TEST(Gamma, ConstantBetaAsymptotics) {
  const double L = 1.0, c = 2.0, b0 = 0.7;
  for (int n = 6; n <= 14; ++n) {
    double k = n * M_PI / L;
    double lead = std::log(b0 * b0 * std::pow(L, 6) / (4 * std::pow(n * M_PI, 6))) + 2 * (k * k - c) * L;
    EXPECT_NEAR(2 * gamma_constant(n, L, c, b0).log_abs() / lead, 1.0, 1e-3);
  }
}

TEST(Gamma, GrowthBound) {
  // log|gamma_n| + 2 log n - n^2 pi^2 / L stays bounded above; it is flat for
  // support reaching L and falls off otherwise
  for (double b : {1.0, 0.9}) {
    PlantConfig cfg = make(1.0, 5.0, Profile::indicator(1.0, 0.2, b, 1.0), std::nullopt);
    double first = -INFINITY, lo = INFINITY, hi = -INFINITY;
    for (int n = 3; n <= 12; ++n) {
      double cst = gamma(n, cfg).log_abs() + 2 * std::log(double(n)) - n * n * M_PI * M_PI;
      if (n <= 5) first = std::max(first, cst);
      lo = std::min(lo, cst);
      hi = std::max(hi, cst);
    }
    EXPECT_LE(hi, first + 1e-9);
    if (b == 1.0) EXPECT_LT(hi - lo, 3.0);
  }
}

TEST(FindGammaZero, FigureOne) {
  auto z = find_gamma_zero(2, 1.0, 50.0, 1.0, 0.0, 0.0, 1.0, {400});
  ASSERT_EQ(z.size(), 1u);
  EXPECT_NEAR(z[0], 0.58567834946637727, 1e-8);
  EXPECT_NEAR(z[0], 0.586, 0.005);
  auto z2 = find_gamma_zero(2, 1.0, 50.0, 2.0, 0.0, 0.0, 1.0, {400});
  ASSERT_EQ(z2.size(), 1u);
  EXPECT_NEAR(z2[0], z[0], 1e-9);
}

TEST(FindGammaZero, SingleSigned) {
  EXPECT_TRUE(find_gamma_zero(1, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, {400}).empty());
  int changes = 0;
  double prev = gamma_indicator(1, 1.0, 0.0, 1.0, 0.0, 1e-4).value();
  for (int k = 2; k <= 10000; ++k) {
    double g = gamma_indicator(1, 1.0, 0.0, 1.0, 0.0, k * 1e-4).value();
    changes += (g > 0) != (prev > 0);
    prev = g;
  }
  EXPECT_EQ(changes, 0);
}

TEST(Genericity, ScanProperties) {
  GenericityScan s = genericity_scan(100, 100, 2, 1.0, 50.0, 1.0, 0.0, 2);
  EXPECT_EQ(s.fraction_below, 0.0);
  GenericityScan t = genericity_scan(100, 100, 2, 1.0, 50.0, 3.0, 0.0, 2);
  for (size_t i = 0; i < s.min_abs_gamma.size(); ++i) {
    if (std::isnan(s.min_abs_gamma[i])) {
      EXPECT_TRUE(std::isnan(t.min_abs_gamma[i]));
      continue;
    }
    EXPECT_NEAR(t.min_abs_gamma[i], 3 * s.min_abs_gamma[i], 1e-9 * t.min_abs_gamma[i]);
  }
}

TEST(Genericity, FigureOneCellIsLowest) {
  GenericityScan s = genericity_scan(200, 200, 2, 1.0, 50.0, 1.0, 1e-12, 2);
  // along the row nearest a = 0, away from the b -> a edge where every gamma
  // vanishes with the support, |gamma_2| has a single dip
  const auto& g2 = s.abs_gamma_n.at(1);
  std::vector<int> dips;
  for (int ib = 1; ib + 1 < s.nb; ++ib)
    if (!std::isnan(g2[ib - 1]) && g2[ib] < g2[ib - 1] && g2[ib] < g2[ib + 1]) dips.push_back(ib);
  ASSERT_EQ(dips.size(), 1u);
  EXPECT_NEAR(s.b[dips[0]], 0.586, 1.0 / s.nb);
  EXPECT_LT(s.a[0], 1.0 / s.na);
}

TEST(OutputCoeffs, Dirichlet) {
  PlantConfig cfg = make(1.0, 2.0, Profile::indicator(1.0, 0.2, 0.7, 1.5));
  OutputCoeffs end = output_coeffs(Measurement::dirichlet(1.0, 1.0), 6, 2, cfg);
  for (double v : end.c1) EXPECT_NEAR(v, 0.0, 1e-14);
  OutputCoeffs mid = output_coeffs(Measurement::dirichlet(1.0, 0.5), 6, 2, cfg);
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(mid.c1[n - 1], std::sqrt(2.0) * std::sin(n * M_PI / 2), 1e-14);
  EXPECT_THROW(output_coeffs(Measurement::dirichlet(1.0, 1.5), 2, 1, cfg), ValidationError);
}

TEST(OutputCoeffs, Neumann) {
  PlantConfig cfg = make(1.0, 2.0, Profile::indicator(1.0, 0.2, 0.7, 1.5));
  double xi = 1 / std::sqrt(3.0);
  OutputCoeffs o = output_coeffs(Measurement::neumann(1.0, xi), 4, 2, cfg);
  OutputCoeffs d1 = output_coeffs(Measurement::dirichlet(1.0, xi + 1e-5), 4, 2, cfg);
  OutputCoeffs d0 = output_coeffs(Measurement::dirichlet(1.0, xi - 1e-5), 4, 2, cfg);
  for (int n = 1; n <= 4; ++n)
    EXPECT_NEAR(o.c1[n - 1], std::sqrt(2.0) * n * M_PI * std::cos(n * M_PI * xi), 1e-12);
  for (int k = 0; k < 5; ++k) EXPECT_LT(std::abs(o.c2[k] - (d1.c2[k] - d0.c2[k]) / 2e-5), 1e-5 * (1 + std::abs(o.c2[k])));
}

TEST(OutputCoeffs, DistributedConstant) {
  PlantConfig cfg = make(1.5, 1.0, Profile::constant(1.5, 1.0));
  OutputCoeffs o = output_coeffs(Measurement::distributed(Profile::constant(1.5, 1.0)), 3, 3, cfg);
  EXPECT_NEAR(o.c1[0], 1.1026577908435841, 1e-12);
  EXPECT_NEAR(o.c1[1], 0.0, 1e-12);
  EXPECT_NEAR(o.c1[2], 0.36755259694786137, 1e-12);
  for (int m = 1; m <= 3; ++m) EXPECT_LT(std::abs(o.c2[3 + m] - std::conj(o.c2[3 - m])), 1e-10);
}

TEST(OutputCoeffs, DistributedSineSelectsMode) {
  PlantConfig cfg = make(1.0, 1.0, Profile::constant(1.0, 1.0));
  std::vector<double> v(4001);
  for (size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(2.0) * std::sin(3 * M_PI * i / 4000.0);
  OutputCoeffs o = output_coeffs(Measurement::distributed(Profile::sampled(1.0, v)), 5, 2, cfg);
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(o.c1[n - 1], n == 3 ? 1.0 : 0.0, 1e-6);
  EXPECT_GT(std::abs(o.c2[2]), 1e-6);
}

TEST(OutputKernel, ClosedForms) {
  EXPECT_LT(std::abs(output_kernel(Profile::constant(1.0, 1.0), 2.0, 1.0, 0.3) - 0.074851607322534083), 1e-13);
  cd r(1.5, 2.0);
  cd want1(0.06694870267483344, -0.049048544391837295);
  EXPECT_LT(std::abs(output_kernel(Profile::indicator(1.0, 0.2, 0.8, 1.0), r, 1.0, 0.3) - want1), 1e-13);
  std::vector<double> ramp(65);
  for (int i = 0; i <= 64; ++i) ramp[i] = i / 64.0;
  cd want2(0.034200542348351121, -0.02913800371077546);
  EXPECT_LT(std::abs(output_kernel(Profile::sampled(1.0, ramp), r, 1.0, 0.3) - want2), 1e-13);
}

TEST(InputCoeffs, ModalIdentity) {
  PlantConfig cfg = make(1.3, 4.0, Profile::indicator(1.3, 0.1, 0.9, 1.5));
  InputCoeffs ic = input_coeffs(5, 4, cfg);
  for (int n = 1; n <= 5; ++n) {
    VectorField3 p = psi(Mode::parabolic(n), cfg);
    double lam = eigenvalue(Mode::parabolic(n), cfg).lambda.real();
    double lhs = ic.a1[n - 1] + lam * ic.b1[n - 1];
    double rhs = std::conj(p.dg(1.3)).real() / 2.0;
    EXPECT_NEAR(lhs, rhs, 1e-6 * std::max({std::abs(rhs), std::abs(ic.a1[n - 1]), std::abs(lam * ic.b1[n - 1])}));
  }
  for (int m = -4; m <= 4; ++m) {
    VectorField3 p = psi(Mode::hyperbolic(m), cfg);
    cd lam = eigenvalue(Mode::hyperbolic(m), cfg).lambda;
    cd lhs = ic.a2[m + 4] + lam * ic.b2[m + 4];
    cd rhs = std::conj(p.dg(1.3)) / 2.0;
    EXPECT_LT(std::abs(lhs - rhs), 1e-6 * std::max(std::abs(rhs), std::abs(ic.a2[m + 4])));
  }
}

TEST(InputCoeffs, ConjugateSymmetryAndQuadrature) {
  PlantConfig cfg = make(1.0, 2.0, Profile::indicator(1.0, 0.2, 0.7, 1.5));
  InputCoeffs ic = input_coeffs(3, 5, cfg);
  for (int m = 1; m <= 5; ++m) {
    EXPECT_LT(std::abs(ic.a2[5 + m] - std::conj(ic.a2[5 - m])), 1e-12 * std::abs(ic.a2[5 + m]));
    EXPECT_LT(std::abs(ic.b2[5 + m] - std::conj(ic.b2[5 - m])), 1e-12 * std::abs(ic.b2[5 + m]));
  }
  for (int n = 1; n <= 3; ++n) {
    auto [a, b] = input_coeffs_quadrature(n, cfg);
    EXPECT_NEAR(a, ic.a1[n - 1], 1e-10 * std::abs(a));
    EXPECT_NEAR(b, ic.b1[n - 1], 1e-8 * std::abs(b));
  }
  PlantConfig undamped = cfg;
  undamped.alpha.reset();
  EXPECT_THROW(input_coeffs(2, 2, undamped), ValidationError);
}

TEST(InputCoeffs, SquareSummableTail) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0));
  InputCoeffs ic = input_coeffs(1, 64, cfg);
  double prev = INFINITY;
  for (int M = 4; M <= 60; M += 4) {
    double s = 0;
    for (int m = M + 1; m <= 64; ++m) s += std::norm(ic.a2[64 + m]) + std::norm(ic.a2[64 - m]);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(Weights, VAndV0) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0), std::nullopt);
  double prev = -INFINITY;
  for (double T : {0.5, 1.0, 2.0, 4.0}) {
    double w = v_weight(3, T, WeightSpace::V, cfg);
    EXPECT_GT(w, prev);
    prev = w;
  }
  EXPECT_NEAR(v_weight(3, 1.0, WeightSpace::V0, cfg), v_weight(3, 7.0, WeightSpace::V0, cfg), 0.0);
  // V0 for constant beta grows like n^10
  double ref = v_weight(12, 0.0, WeightSpace::V0, cfg) - 10 * std::log(12.0);
  for (int n = 4; n <= 11; ++n)
    EXPECT_NEAR(v_weight(n, 0.0, WeightSpace::V0, cfg) - 10 * std::log(double(n)), ref, 0.1);
}

TEST(Weights, LostControllability) {
  double b = find_gamma_zero(2, 1.0, 50.0, 1.0, 0.0, 0.0, 1.0, {400, 0.0, 0.0}).at(0);
  PlantConfig cfg = make(1.0, 50.0, Profile::indicator(1.0, 0.0, b, 1.0), std::nullopt);
  EXPECT_NO_THROW(v_weight(1, 2.0, WeightSpace::V, cfg));
  EXPECT_THROW(v_weight(2, 2.0, WeightSpace::V, cfg), DesignError);
}

TEST(Table, ConsistentWithParts) {
  PlantConfig cfg = make(1.0, 2.0, Profile::indicator(1.0, 0.2, 0.7, 1.5));
  Measurement meas = Measurement::distributed(Profile::constant(1.0, 1.0));
  CoefficientTable t = build_table(cfg, meas, 4, 3, 2);
  InputCoeffs ic = input_coeffs(4, 3, cfg);
  OutputCoeffs oc = output_coeffs(meas, 4, 3, cfg);
  for (int n = 1; n <= 4; ++n) {
    EXPECT_DOUBLE_EQ(t.lam1(n), 2.0 - n * n * M_PI * M_PI);
    EXPECT_NEAR(t.A1(n), ic.a1[n - 1], 1e-14 * std::abs(ic.a1[n - 1]));
    EXPECT_NEAR(t.C1(n), oc.c1[n - 1], 1e-14);
    EXPECT_NEAR(t.gamma[n - 1].log_abs(), gamma(n, cfg).log_abs(), 1e-12);
  }
  for (int m = -3; m <= 3; ++m) {
    EXPECT_LT(std::abs(t.lam2(m) - eigenvalue(Mode::hyperbolic(m), cfg).lambda), 1e-14);
    EXPECT_LT(std::abs(t.B2(m) - ic.b2[m + 3]), 1e-14 * std::abs(ic.b2[m + 3]));
    EXPECT_LT(std::abs(t.C2(m) - oc.c2[m + 3]), 1e-14 + 1e-12 * std::abs(oc.c2[m + 3]));
  }
}
