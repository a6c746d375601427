#include "cascade/spectral.h"

#include <cmath>

#include "cascade/errors.h"
#include "cascade/quadrature.h"

namespace cascade {

namespace kernel {

cd expm1(cd z) {
  double x = z.real(), y = z.imag();
  double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}

cd dirichlet_green(cd r, double L, double x, double s) {
  double u = std::min(x, s), w = std::max(x, s);
  if (std::abs(r) * L < 1e-12) return u * (L - w) / L;
  cd num = std::exp(-r * (w - u)) * (-expm1(-2.0 * r * u)) * (-expm1(-2.0 * r * (L - w)));
  return num / (2.0 * r * (-expm1(-2.0 * r * L)));
}

cd dirichlet_green_dx(cd r, double L, double x, double s) {
  bool small = std::abs(r) * L < 1e-12;
  if (x < s) {
    if (small) return (L - s) / L;
    return std::exp(-r * (s - x)) * (1.0 + std::exp(-2.0 * r * x)) * (-expm1(-2.0 * r * (L - s))) /
           (2.0 * (-expm1(-2.0 * r * L)));
  }
  if (small) return -s / L;
  return -std::exp(-r * (x - s)) * (-expm1(-2.0 * r * s)) * (1.0 + std::exp(-2.0 * r * (L - x))) /
         (2.0 * (-expm1(-2.0 * r * L)));
}

namespace {

// sinh(k u) e^{-k u} / k
double sh_k(double k, double u) { return k > 0 ? -std::expm1(-2 * k * u) / (2 * k) : u; }

// (cosh + a sg sinh)(k (L - w)) scaled by 2 e^{-k (L - w)}
double robin_tail(double k, double sg, double a, double L, double w) {
  double d = L - w;
  return (1 + std::exp(-2 * k * d)) + a * sg * (-std::expm1(-2 * k * d));
}

}  // namespace

double robin_denominator_scaled(double lambda, double a, double L) {
  double k = std::abs(lambda), sg = lambda >= 0 ? 1.0 : -1.0;
  return (1 + std::exp(-2 * k * L)) + a * sg * (-std::expm1(-2 * k * L));
}

double robin_green(double lambda, double a, double L, double x, double s) {
  double k = std::abs(lambda), sg = lambda >= 0 ? 1.0 : -1.0;
  double u = std::min(x, s), w = std::max(x, s);
  return std::exp(-k * (w - u)) * sh_k(k, u) * robin_tail(k, sg, a, L, w) / robin_denominator_scaled(lambda, a, L);
}

double robin_green_dx(double lambda, double a, double L, double x, double s) {
  double k = std::abs(lambda), sg = lambda >= 0 ? 1.0 : -1.0;
  double NL = robin_denominator_scaled(lambda, a, L);
  if (x < s) return std::exp(-k * (s - x)) * (1 + std::exp(-2 * k * x)) * robin_tail(k, sg, a, L, s) / (2 * NL);
  double d = L - x;
  double m = (-std::expm1(-2 * k * d)) + a * sg * (1 + std::exp(-2 * k * d));
  return -std::exp(-k * (x - s)) * (-std::expm1(-2 * k * s)) * m / (2 * NL);
}

}  // namespace kernel

namespace {

QuadOptions inner_opts() {
  QuadOptions o;
  o.rel_tol = 1e-11;
  return o;
}

std::vector<double> with_point(std::vector<double> v, double x) {
  v.push_back(x);
  return v;
}

double damping_of(const Mode& mode, const PlantConfig& cfg) {
  if (mode.variant == Variant::Undamped) return 0.0;
  if (!cfg.alpha) throw ValidationError("damped analysis requires alpha");
  return *cfg.alpha;
}

}  // namespace

EigenData eigenvalue(const Mode& mode, const PlantConfig& cfg) {
  EigenData e;
  const double L = cfg.L;
  if (mode.branch == Branch::Parabolic) {
    if (mode.index < 1) throw ValidationError("parabolic index must be >= 1");
    double w = mode.index * M_PI / L;
    e.lambda = cfg.c - w * w;
    return e;
  }
  const int m = mode.index;
  if (mode.variant == Variant::Undamped) {
    e.lambda = cd(0.0, (2.0 * m + 1) * M_PI / (2 * L));
    e.A_norm = std::abs(2.0 * m + 1) * M_PI / (2 * std::sqrt(L));
  } else {
    if (!cfg.alpha) throw ValidationError("damped analysis requires alpha");
    double r = rho(*cfg.alpha, L);
    e.mu = -r;
    e.lambda = cd(r, m * M_PI / L);
    double mu = e.mu;
    e.A_norm = std::sqrt((mu * mu * L * L + m * m * M_PI * M_PI) * std::sinh(2 * mu * L)) / (L * std::sqrt(2 * mu));
  }
  e.r = std::sqrt(e.lambda - cfg.c);
  if (e.r.real() == 0.0 && e.r.imag() < 0) e.r = -e.r;
  return e;
}

VectorField3 phi(const Mode& mode, const PlantConfig& cfg) {
  const double L = cfg.L;
  VectorField3 v;
  if (mode.branch == Branch::Parabolic) {
    double w = mode.index * M_PI / L, s = std::sqrt(2 / L);
    v.f = [=](double x) -> cd { return s * std::sin(w * x); };
    v.df = [=](double x) -> cd { return s * w * std::cos(w * x); };
    return v;
  }
  EigenData e = eigenvalue(mode, cfg);
  const cd lam = e.lambda, r = e.r;
  const double A = e.A_norm;
  const Profile beta = cfg.beta;
  const std::vector<double> breaks = beta.breakpoints();
  v.f = [=](double x) -> cd {
    if (x <= 0 || x >= L) return 0.0;
    auto k = [&](double s) -> cd { return kernel::dirichlet_green(r, L, x, s) * beta(s) * std::sinh(lam * s); };
    return integrate(k, 0.0, L, with_point(breaks, x), inner_opts()) / A;
  };
  v.df = [=](double x) -> cd {
    auto k = [&](double s) -> cd { return kernel::dirichlet_green_dx(r, L, x, s) * beta(s) * std::sinh(lam * s); };
    return integrate(k, 0.0, L, with_point(breaks, x), inner_opts()) / A;
  };
  v.g = [=](double x) -> cd { return std::sinh(lam * x) / A; };
  v.dg = [=](double x) -> cd { return lam * std::cosh(lam * x) / A; };
  v.h = [=](double x) -> cd { return lam * std::sinh(lam * x) / A; };
  return v;
}

VectorField3 psi(const Mode& mode, const PlantConfig& cfg) {
  const double L = cfg.L;
  VectorField3 v;
  if (mode.branch == Branch::Hyperbolic) {
    EigenData e = eigenvalue(mode, cfg);
    const cd lb = std::conj(e.lambda);
    const double A = e.A_norm;
    v.g = [=](double x) -> cd { return A * std::sinh(lb * x) / (L * lb * lb); };
    v.dg = [=](double x) -> cd { return A * std::cosh(lb * x) / (L * lb); };
    v.h = [=](double x) -> cd { return -A * std::sinh(lb * x) / (L * lb); };
    return v;
  }
  const double a = damping_of(mode, cfg);
  const double w = mode.index * M_PI / L, sq = std::sqrt(2 / L);
  const double lam = eigenvalue(mode, cfg).lambda.real();
  const Profile beta = cfg.beta;
  const std::vector<double> breaks = beta.breakpoints();
  auto F = [=](double s) { return beta(s) * sq * std::sin(w * s); };
  v.f = [=](double x) -> cd { return sq * std::sin(w * x); };
  v.df = [=](double x) -> cd { return sq * w * std::cos(w * x); };
  // P(x) = int min(x, s) F(s) ds, P'(x) = int_x^L F
  auto P = [=](double x) {
    auto lo = [&](double s) { return s * F(s); };
    return integrate(lo, 0.0, x, breaks, inner_opts()) + x * integrate(F, x, L, breaks, inner_opts());
  };
  auto dP = [=](double x) { return integrate(F, x, L, breaks, inner_opts()); };
  if (std::abs(lam) < 1e-9) {
    auto sF = [=](double s) { return s * F(s); };
    const double moment = integrate(sF, 0.0, L, breaks, inner_opts());
    v.h = [=](double x) -> cd { return P(x); };
    v.g = [=](double x) -> cd { return a * moment * x; };
    v.dg = [=](double) -> cd { return a * moment; };
    return v;
  }
  auto hx = [=](double x) {
    auto k = [&](double s) { return kernel::robin_green(lam, a, L, x, s) * F(s); };
    return integrate(k, 0.0, L, with_point(breaks, x), inner_opts());
  };
  auto dhx = [=](double x) {
    auto k = [&](double s) { return kernel::robin_green_dx(lam, a, L, x, s) * F(s); };
    return integrate(k, 0.0, L, with_point(breaks, x), inner_opts());
  };
  v.h = [=](double x) -> cd { return hx(x); };
  v.g = [=](double x) -> cd { return (P(x) - hx(x)) / lam; };
  v.dg = [=](double x) -> cd { return (dP(x) - dhx(x)) / lam; };
  return v;
}

cd inner_h0(const VectorField3& u, const VectorField3& v, const PlantConfig& cfg, int min_panels) {
  bool ff = u.f && v.f, gg = u.dg && v.dg, hh = u.h && v.h;
  auto integrand = [&](double x) {
    cd s = 0.0;
    if (ff) s += u.f(x) * std::conj(v.f(x));
    if (gg) s += u.dg(x) * std::conj(v.dg(x));
    if (hh) s += u.h(x) * std::conj(v.h(x));
    return s;
  };
  if (!ff && !gg && !hh) return 0.0;
  QuadOptions o;
  o.rel_tol = 1e-9;
  o.abs_tol = 1e-13;
  o.min_panels = min_panels;
  return integrate(integrand, 0.0, cfg.L, cfg.beta.breakpoints(), o);
}

Eigen::MatrixXcd biorthogonality_check(const std::vector<Mode>& modes, const PlantConfig& cfg, int quad_points) {
  const int n = static_cast<int>(modes.size());
  std::vector<VectorField3> ph, ps;
  for (const auto& m : modes) {
    ph.push_back(phi(m, cfg));
    ps.push_back(psi(m, cfg));
  }
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = inner_h0(ph[i], ps[j], cfg, quad_points);
  return G;
}

}  // namespace cascade
