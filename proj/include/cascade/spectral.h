#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cascade/model.h"

namespace cascade {

using cd = std::complex<double>;

enum class Branch { Parabolic, Hyperbolic };
enum class Variant { Undamped, Damped };

struct Mode {
  Branch branch = Branch::Parabolic;
  int index = 1;
  Variant variant = Variant::Damped;

  static Mode parabolic(int n, Variant v = Variant::Damped) { return {Branch::Parabolic, n, v}; }
  static Mode hyperbolic(int m, Variant v = Variant::Damped) { return {Branch::Hyperbolic, m, v}; }
};

struct EigenData {
  cd lambda;
  cd r;             // sqrt(lambda - c), Re >= 0; hyperbolic only
  double A_norm = 0.0;  // hyperbolic only
  double mu = 0.0;      // damped only
};

// Evaluators of the three state components (f, g, h) and of the derivatives
// df, dg that the energy inner product and the Neumann trace need.
struct VectorField3 {
  std::function<cd(double)> f, g, h, df, dg;
};

EigenData eigenvalue(const Mode& mode, const PlantConfig& config);
VectorField3 phi(const Mode& mode, const PlantConfig& config);
VectorField3 psi(const Mode& mode, const PlantConfig& config);

// <u, v> = int f_u conj(f_v) + g_u' conj(g_v') + h_u conj(h_v) over [0, L].
cd inner_h0(const VectorField3& u, const VectorField3& v, const PlantConfig& config, int min_panels = 8);

// G(i, j) = <phi_i, psi_j>.
Eigen::MatrixXcd biorthogonality_check(const std::vector<Mode>& modes, const PlantConfig& config,
                                       int quad_points = 8);

// Scalar kernels exposed for tests and for the coupling module.
namespace kernel {

cd expm1(cd z);
// Dirichlet Green's function of f'' - r^2 f = -g on [0, L] and its x-derivative.
cd dirichlet_green(cd r, double L, double x, double s);
cd dirichlet_green_dx(cd r, double L, double x, double s);
// Green's function of h'' - lambda^2 h = -F, h(0) = 0, h'(L) + a*lambda*h(L) = 0
// (a = alpha for the damped dual, 0 for the undamped one) and its x-derivative.
double robin_green(double lambda, double a, double L, double x, double s);
double robin_green_dx(double lambda, double a, double L, double x, double s);
// (cosh(lambda L) + a sinh(lambda L)) * exp(-|lambda| L) * 2
double robin_denominator_scaled(double lambda, double a, double L);

}  // namespace kernel

}  // namespace cascade
