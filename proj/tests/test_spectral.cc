#include <cmath>

#include <gtest/gtest.h>

#include "cascade/coupling.h"
#include "cascade/quadrature.h"
#include "cascade/spectral.h"

using namespace cascade;

namespace {

cd at(const std::function<cd(double)>& f, double x) { return f ? f(x) : cd(0.0); }

PlantConfig make(double L, double c, Profile beta, std::optional<double> alpha = 2.0) {
  PlantConfig cfg;
  cfg.L = L;
  cfg.c = c;
  cfg.beta = std::move(beta);
  cfg.alpha = alpha;
  return cfg;
}

}  // namespace

TEST(Eigenvalue, Examples) {
  PlantConfig cfg = make(1.0, 50.0, Profile::constant(1.0, 1.0));
  EigenData u = eigenvalue(Mode::hyperbolic(0, Variant::Undamped), cfg);
  EXPECT_NEAR(std::abs(u.lambda - cd(0, M_PI / 2)), 0.0, 1e-15);

  EigenData p = eigenvalue(Mode::parabolic(2), cfg);
  EXPECT_NEAR(p.lambda.real(), 50 - 4 * M_PI * M_PI, 1e-13);
  EXPECT_EQ(p.lambda.imag(), 0.0);

  EigenData d = eigenvalue(Mode::hyperbolic(3), cfg);
  EXPECT_NEAR(d.lambda.real(), -0.54930614433405485, 1e-15);
  EXPECT_NEAR(d.lambda.imag(), 3 * M_PI, 1e-14);
  EXPECT_NEAR(d.mu, 0.54930614433405485, 1e-15);
}

TEST(Eigenvalue, Normalisation) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0));
  EXPECT_NEAR(eigenvalue(Mode::hyperbolic(2, Variant::Undamped), cfg).A_norm, 7.8539816339744831, 1e-13);
  EXPECT_NEAR(eigenvalue(Mode::hyperbolic(3), cfg).A_norm, 10.400510421231624, 1e-12);
}

TEST(Eigenvalue, RootBranch) {
  for (double c : {-3.0, 0.0, 7.5}) {
    PlantConfig cfg = make(1.4, c, Profile::constant(1.4, 1.0));
    for (Variant v : {Variant::Damped, Variant::Undamped})
      for (int m = -6; m <= 6; ++m) {
        EigenData e = eigenvalue(Mode::hyperbolic(m, v), cfg);
        EXPECT_GE(e.r.real(), 0.0);
        EXPECT_LT(std::abs(e.r * e.r - (e.lambda - c)), 1e-12 * std::abs(e.lambda - c));
      }
  }
}

TEST(Phi, ParabolicSine) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0));
  VectorField3 f = phi(Mode::parabolic(1), cfg);
  EXPECT_NEAR(std::abs(f.f(0.5) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_FALSE(static_cast<bool>(f.g));
  EXPECT_FALSE(static_cast<bool>(f.h));
}

TEST(Phi, HyperbolicStructure) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0));
  for (Variant v : {Variant::Undamped, Variant::Damped})
    for (int m : {-2, 0, 3}) {
      Mode md = Mode::hyperbolic(m, v);
      cd lam = eigenvalue(md, cfg).lambda;
      VectorField3 f = phi(md, cfg);
      EXPECT_LT(std::abs(f.g(0.0)), 1e-15);
      EXPECT_LT(std::abs(f.f(0.0)), 1e-12);
      EXPECT_LT(std::abs(f.f(1.0)), 1e-8);
      for (double x : {0.2, 0.5, 0.9}) EXPECT_LT(std::abs(f.h(x) - lam * f.g(x)), 1e-13 * (1 + std::abs(f.h(x))));
    }
}

TEST(Phi, BoundaryConditions) {
  PlantConfig cfg = make(1.0, 2.0, Profile::indicator(1.0, 0.2, 0.7, 1.5));
  for (int m : {-3, 0, 2}) {
    VectorField3 u = phi(Mode::hyperbolic(m, Variant::Undamped), cfg);
    EXPECT_LT(std::abs(u.dg(1.0)), 1e-8);
    VectorField3 d = phi(Mode::hyperbolic(m, Variant::Damped), cfg);
    EXPECT_LT(std::abs(d.dg(1.0) + 2.0 * d.h(1.0)), 1e-8);
  }
}

TEST(Psi, Components) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0));
  VectorField3 p = psi(Mode::parabolic(1), cfg);
  for (double x : {0.1, 0.5, 0.8}) EXPECT_NEAR(std::abs(p.f(x) - std::sqrt(2.0) * std::sin(M_PI * x)), 0.0, 1e-14);
  VectorField3 h = psi(Mode::hyperbolic(1), cfg);
  EXPECT_FALSE(static_cast<bool>(h.f));
  EXPECT_LT(std::abs(h.dg(1.0) - 2.0 * h.h(1.0)), 1e-8 * (1 + std::abs(h.dg(1.0))));
}

TEST(Psi, UndampedParabolicTrace) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0), std::nullopt);
  VectorField3 p = psi(Mode::parabolic(1, Variant::Undamped), cfg);
  const double expect = 0.0041961561318790698;
  EXPECT_NEAR(p.h(1.0).real(), expect, 1e-8 * expect);
  double g1 = gamma(1, cfg).value();
  double l = -M_PI * M_PI;
  EXPECT_NEAR(p.h(1.0).real(), g1 * std::sqrt(2.0) / (l * std::cosh(l)), 1e-8 * expect);
}

TEST(Psi, ZeroEigenvalueBranch) {
  PlantConfig cfg = make(1.0, M_PI * M_PI, Profile::constant(1.0, 1.0), 2.5);
  VectorField3 p = psi(Mode::parabolic(1), cfg);
  VectorField3 q = phi(Mode::parabolic(1), cfg);
  EXPECT_TRUE(std::isfinite(std::abs(p.h(0.7))));
  EXPECT_NEAR(std::abs(inner_h0(q, p, cfg) - 1.0), 0.0, 1e-8);
}

TEST(Biorthogonality, SmallFamily) {
  PlantConfig cfg = make(1.2, 3.0, Profile::indicator(1.2, 0.1, 0.9, 1.5));
  std::vector<Mode> modes;
  for (int n = 1; n <= 3; ++n) modes.push_back(Mode::parabolic(n));
  for (int m = -2; m <= 2; ++m) modes.push_back(Mode::hyperbolic(m));
  Eigen::MatrixXcd G = biorthogonality_check(modes, cfg);
  EXPECT_LT((G - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Biorthogonality, UndampedFamily) {
  PlantConfig cfg = make(1.0, 0.0, Profile::constant(1.0, 1.0), std::nullopt);
  std::vector<Mode> modes{Mode::parabolic(1, Variant::Undamped), Mode::parabolic(2, Variant::Undamped),
                          Mode::hyperbolic(-1, Variant::Undamped), Mode::hyperbolic(0, Variant::Undamped),
                          Mode::hyperbolic(1, Variant::Undamped)};
  Eigen::MatrixXcd G = biorthogonality_check(modes, cfg);
  EXPECT_LT((G - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Kernel, Expm1) {
  cd z(1e-9, -2e-9);
  EXPECT_LT(std::abs(kernel::expm1(z) - (z + 0.5 * z * z)), 4 * 2.2e-16 * std::abs(z));
  cd w(0.7, 1.3);
  EXPECT_LT(std::abs(kernel::expm1(w) - (std::exp(w) - 1.0)), 1e-15);
}

TEST(Kernel, DirichletGreen) {
  double L = 1.0;
  cd r(2.0, 0.0);
  cd U = integrate([&](double x) { return kernel::dirichlet_green(r, L, x, 0.3); }, 0.0, L, {0.3});
  EXPECT_NEAR(U.real(), 0.074851607322534083, 1e-13);
  EXPECT_LT(std::abs(kernel::dirichlet_green(r, L, 0.0, 0.3)), 1e-15);
  EXPECT_LT(std::abs(kernel::dirichlet_green(r, L, 1.0, 0.3)), 1e-15);
  double h = 1e-6;
  cd fd = (kernel::dirichlet_green(r, L, 0.6 + h, 0.3) - kernel::dirichlet_green(r, L, 0.6 - h, 0.3)) / (2 * h);
  EXPECT_LT(std::abs(fd - kernel::dirichlet_green_dx(r, L, 0.6, 0.3)), 1e-8);
  cd big(40.0, 25.0);
  EXPECT_TRUE(std::isfinite(std::abs(kernel::dirichlet_green(big, 3.0, 1.0, 2.0))));
}

TEST(Kernel, RobinGreen) {
  const double lam = -3.0, a = 2.0, L = 1.0;
  EXPECT_NEAR(kernel::robin_green(lam, a, L, 0.0, 0.4), 0.0, 1e-15);
  double hL = kernel::robin_green(lam, a, L, L, 0.4);
  double dL = kernel::robin_green_dx(lam, a, L, L, 0.4);
  EXPECT_NEAR(dL + a * lam * hL, 0.0, 1e-13);
  double big = -900.0;
  EXPECT_TRUE(std::isfinite(kernel::robin_green(big, a, L, 0.9, 0.5)));
  EXPECT_NEAR(kernel::robin_denominator_scaled(lam, a, L),
              2 * (std::cosh(lam * L) + a * std::sinh(lam * L)) * std::exp(-std::abs(lam) * L), 1e-13);
}
