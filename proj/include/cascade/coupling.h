#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "cascade/model.h"
#include "cascade/spectral.h"

namespace cascade {

// value = mant * exp(log_scale); keeps e^{|lambda| L} factors out of doubles.
struct Scaled {
  double mant = 0.0;
  double log_scale = 0.0;

  double value() const { return mant * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mant)) + log_scale; }
  int sign() const { return (mant > 0) - (mant < 0); }
  double at_scale(double s) const { return mant * std::exp(log_scale - s); }
};

Scaled gamma(int n, const PlantConfig& config);
Scaled gamma_indicator(int n, double L, double c, double beta0, double a, double b);
// beta = beta0 on all of [0, L].
Scaled gamma_constant(int n, double L, double c, double beta0);

struct ZeroSearch {
  int points = 400;
  double tol_gamma = 1e-10;
  double tol_b = 1e-9;
};
// Zeros of b -> gamma_n for beta = beta0 * 1_[a, b], b in (b_lo, b_hi].
std::vector<double> find_gamma_zero(int n, double L, double c, double beta0, double a, double b_lo, double b_hi,
                                    const ZeroSearch& opt = {});

struct GenericityScan {
  int na = 0, nb = 0;
  std::vector<double> a, b;                  // cell centres
  std::vector<double> min_abs_gamma;         // row-major (ia, ib); NaN outside a < b
  std::vector<std::vector<double>> abs_gamma_n;  // per n, same layout
  double fraction_below = 0.0;
};
GenericityScan genericity_scan(int na, int nb, int n_max, double L, double c, double beta0, double threshold,
                               int jobs = 1);

struct Measurement {
  enum class Kind { Distributed, Dirichlet, Neumann };
  Kind kind = Kind::Distributed;
  Profile c_o = Profile::constant(1.0, 1.0);
  double xi = 0.0;

  static Measurement distributed(Profile c_o) { return {Kind::Distributed, std::move(c_o), 0.0}; }
  static Measurement dirichlet(double L, double xi) { return {Kind::Dirichlet, Profile::constant(L, 0.0), xi}; }
  static Measurement neumann(double L, double xi) { return {Kind::Neumann, Profile::constant(L, 0.0), xi}; }
};

struct OutputCoeffs {
  std::vector<double> c1;  // n = 1..n_max (index n-1)
  std::vector<cd> c2;      // m = -m_max..m_max (index m+m_max)
};
OutputCoeffs output_coeffs(const Measurement& meas, int n_max, int m_max, const PlantConfig& config,
                           Variant variant = Variant::Damped, int jobs = 1);

// U(s) = int c_o(x) G(x, s) dx for the Dirichlet Green's function with parameter r;
// exact for the affine runs of c_o.
cd output_kernel(const Profile& c_o, cd r, double L, double s);

struct InputCoeffs {
  std::vector<double> a1, b1;  // index n-1
  std::vector<cd> a2, b2;      // index m+m_max
};
InputCoeffs input_coeffs(int n_max, int m_max, const PlantConfig& config);
// a and b for a single parabolic mode, b computed by direct quadrature of
// -(1/(alpha L)) int x psi3(x) dx; slow, used as a cross-check.
std::pair<double, double> input_coeffs_quadrature(int n, const PlantConfig& config);

enum class WeightSpace { V, V0 };
double v_weight(int n, double T, WeightSpace space, const PlantConfig& config);

struct CoefficientTable {
  int n_max = 0, m_max = 0;
  std::vector<double> lambda1;
  std::vector<cd> lambda2;
  std::vector<Scaled> gamma;
  std::vector<double> a1, b1, c1;
  std::vector<cd> a2, b2, c2;

  double lam1(int n) const { return lambda1.at(n - 1); }
  cd lam2(int m) const { return lambda2.at(m + m_max); }
  double A1(int n) const { return a1.at(n - 1); }
  double B1(int n) const { return b1.at(n - 1); }
  double C1(int n) const { return c1.at(n - 1); }
  cd A2(int m) const { return a2.at(m + m_max); }
  cd B2(int m) const { return b2.at(m + m_max); }
  cd C2(int m) const { return c2.at(m + m_max); }
};
CoefficientTable build_table(const PlantConfig& config, const Measurement& meas, int n_max, int m_max,
                             int jobs = 1);

}  // namespace cascade
