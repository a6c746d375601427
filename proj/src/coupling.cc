#include "cascade/coupling.h"

#include <cmath>
#include <limits>

#include "cascade/errors.h"
#include "cascade/parallel.h"
#include "cascade/quadrature.h"

namespace cascade {

namespace {

constexpr double kZeroLambda = 1e-9;

QuadOptions tight() {
  QuadOptions o;
  o.rel_tol = 1e-12;
  return o;
}

}  // namespace

Scaled gamma(int n, const PlantConfig& cfg) {
  if (n < 1) throw ValidationError("gamma index must be >= 1");
  const double L = cfg.L, w = n * M_PI / L, lam = cfg.c - w * w;
  const Profile& beta = cfg.beta;
  if (std::abs(lam) < kZeroLambda) {
    auto f = [&](double s) { return s * beta(s) * std::sin(w * s); };
    return {integrate(f, 0.0, L, beta.breakpoints(), tight()), 0.0};
  }
  const double k = std::abs(lam), sg = lam > 0 ? 1.0 : -1.0;
  auto f = [&](double s) {
    return beta(s) * std::sin(w * s) * sg * 0.5 * (std::exp(k * (s - L)) - std::exp(-k * (s + L)));
  };
  return {integrate(f, 0.0, L, beta.breakpoints(), tight()), k * L};
}

Scaled gamma_indicator(int n, double L, double c, double beta0, double a, double b) {
  if (!(0 <= a && a < b && b <= L)) throw ValidationError("indicator needs 0 <= a < b <= L");
  const double w = n * M_PI / L, lam = c - w * w;
  if (std::abs(lam) < kZeroLambda) {
    double v = -beta0 * L / (n * M_PI) * (b * std::cos(w * b) - a * std::cos(w * a)) +
               beta0 * L * L / (n * n * M_PI * M_PI) * (std::sin(w * b) - std::sin(w * a));
    return {v, 0.0};
  }
  const double k = std::abs(lam), sg = lam > 0 ? 1.0 : -1.0;
  // sinh, cosh at lambda*b and lambda*a, all divided by e^{k b}
  double sb = sg * 0.5 * (-std::expm1(-2 * k * b));
  double cb = 0.5 * (1 + std::exp(-2 * k * b));
  double sa = sg * 0.5 * (std::exp(k * (a - b)) - std::exp(-k * (a + b)));
  double ca = 0.5 * (std::exp(k * (a - b)) + std::exp(-k * (a + b)));
  double v = beta0 / (lam * lam + w * w) *
             (-w * sb * std::cos(w * b) + w * sa * std::cos(w * a) + lam * cb * std::sin(w * b) -
              lam * ca * std::sin(w * a));
  return {v, k * b};
}

Scaled gamma_constant(int n, double L, double c, double beta0) {
  const double w = n * M_PI / L, kap = w * w - c;
  double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(kap) < kZeroLambda) return {-sign_n * beta0 * L / w, 0.0};
  const double sg = kap >= 0 ? 1.0 : -1.0, ak = std::abs(kap);
  double v = sign_n * beta0 * w * sg * 0.5 * (-std::expm1(-2 * ak * L)) / (kap * kap + w * w);
  return {v, ak * L};
}

std::vector<double> find_gamma_zero(int n, double L, double c, double beta0, double a, double b_lo, double b_hi,
                                    const ZeroSearch& opt) {
  std::vector<double> zeros;
  b_lo = std::max(b_lo, a);
  auto g = [&](double b) { return gamma_indicator(n, L, c, beta0, a, b); };
  const int np = std::max(opt.points, 100);
  double prev_b = b_lo + (b_hi - b_lo) / np;
  Scaled prev = g(prev_b);
  if (prev.mant == 0.0) zeros.push_back(prev_b);
  for (int j = 2; j <= np; ++j) {
    double bj = b_lo + (b_hi - b_lo) * j / np;
    Scaled cur = g(bj);
    if (cur.mant == 0.0) {
      zeros.push_back(bj);
    } else if (prev.mant != 0.0 && prev.sign() != cur.sign()) {
      double lo = prev_b, hi = bj;
      int s_lo = prev.sign();
      double root = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        Scaled gm = g(mid);
        root = mid;
        if (std::abs(gm.value()) < opt.tol_gamma || gm.mant == 0.0) break;
        if (gm.sign() == s_lo)
          lo = mid;
        else
          hi = mid;
        root = 0.5 * (lo + hi);
        if (hi - lo < opt.tol_b) break;
      }
      zeros.push_back(root);
    }
    prev = cur;
    prev_b = bj;
  }
  return zeros;
}

GenericityScan genericity_scan(int na, int nb, int n_max, double L, double c, double beta0, double threshold,
                               int jobs) {
  GenericityScan s;
  s.na = na;
  s.nb = nb;
  for (int i = 0; i < na; ++i) s.a.push_back(L * (i + 0.5) / na);
  for (int j = 0; j < nb; ++j) s.b.push_back(L * (j + 0.5) / nb);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.min_abs_gamma.assign(na * nb, nan);
  s.abs_gamma_n.assign(n_max, std::vector<double>(na * nb, nan));
  parallel_for(na, jobs, [&](int i) {
    for (int j = 0; j < nb; ++j) {
      if (!(s.a[i] < s.b[j])) continue;
      double mn = std::numeric_limits<double>::infinity();
      for (int n = 1; n <= n_max; ++n) {
        double v = std::abs(gamma_indicator(n, L, c, beta0, s.a[i], s.b[j]).value());
        s.abs_gamma_n[n - 1][i * nb + j] = v;
        mn = std::min(mn, v);
      }
      s.min_abs_gamma[i * nb + j] = mn;
    }
  });
  int cells = 0, below = 0;
  for (double v : s.min_abs_gamma) {
    if (std::isnan(v)) continue;
    ++cells;
    if (v <= threshold) ++below;
  }
  s.fraction_below = cells ? static_cast<double>(below) / cells : 0.0;
  return s;
}

namespace {

// int_a^b (p + q x) e^{kap (x - ref)} dx with Re kap (x - ref) <= 0 on [a, b]
cd affine_exp(double p, double q, cd kap, double ref, double a, double b) {
  if (b <= a) return 0.0;
  if (std::abs(kap) * (b - a) < 2.0) {
    auto f = [&](double x) -> cd { return (p + q * x) * std::exp(kap * (x - ref)); };
    return integrate_fixed(f, a, b, 2);
  }
  auto Phi = [&](double x) { return std::exp(kap * (x - ref)) * ((p + q * x) / kap - q / (kap * kap)); };
  return Phi(b) - Phi(a);
}

}  // namespace

cd output_kernel(const Profile& c_o, cd r, double L, double s) {
  cd total = 0.0;
  if (std::abs(r) * L < 1.0) {
    for (const auto& run : c_o.linear_runs()) {
      auto f = [&](double x) -> cd { return (run.p + run.q * x) * kernel::dirichlet_green(r, L, x, s); };
      if (run.x1 <= s || run.x0 >= s) {
        total += integrate_fixed(f, run.x0, run.x1, 4);
      } else {
        total += integrate_fixed(f, run.x0, s, 4) + integrate_fixed(f, s, run.x1, 4);
      }
    }
    return total;
  }
  const cd den = 2.0 * r * (-kernel::expm1(-2.0 * r * L));
  const cd Ks = (-kernel::expm1(-2.0 * r * (L - s))) / den;
  const cd Kp = (-kernel::expm1(-2.0 * r * s)) / den;
  for (const auto& run : c_o.linear_runs()) {
    double a = run.x0, b = std::min(run.x1, s);
    if (b > a)
      total += Ks * (affine_exp(run.p, run.q, r, s, a, b) -
                     std::exp(-r * (s + a)) * affine_exp(run.p, run.q, -r, a, a, b));
    a = std::max(run.x0, s);
    b = run.x1;
    if (b > a)
      total += Kp * (affine_exp(run.p, run.q, -r, s, a, b) -
                     std::exp(-r * (2 * L - b - s)) * affine_exp(run.p, run.q, r, b, a, b));
  }
  return total;
}

OutputCoeffs output_coeffs(const Measurement& meas, int n_max, int m_max, const PlantConfig& cfg, Variant variant,
                           int jobs) {
  const double L = cfg.L;
  OutputCoeffs out;
  out.c1.assign(n_max, 0.0);
  out.c2.assign(2 * m_max + 1, 0.0);
  if (meas.kind != Measurement::Kind::Distributed && !(meas.xi >= 0 && meas.xi <= L))
    throw ValidationError("measurement point outside [0, L]");
  const double sq = std::sqrt(2 / L);
  for (int n = 1; n <= n_max; ++n) {
    double w = n * M_PI / L;
    switch (meas.kind) {
      case Measurement::Kind::Distributed: {
        auto f = [&](double x) { return meas.c_o(x) * sq * std::sin(w * x); };
        out.c1[n - 1] = integrate(f, 0.0, L, meas.c_o.breakpoints(), tight());
        break;
      }
      case Measurement::Kind::Dirichlet:
        out.c1[n - 1] = sq * std::sin(w * meas.xi);
        break;
      case Measurement::Kind::Neumann:
        out.c1[n - 1] = sq * w * std::cos(w * meas.xi);
        break;
    }
  }
  parallel_for(2 * m_max + 1, jobs, [&](int idx) {
    int m = idx - m_max;
    Mode mode = Mode::hyperbolic(m, variant);
    if (meas.kind == Measurement::Kind::Distributed) {
      EigenData e = eigenvalue(mode, cfg);
      auto f = [&](double s) -> cd {
        return cfg.beta(s) * std::sinh(e.lambda * s) * output_kernel(meas.c_o, e.r, L, s);
      };
      QuadOptions o;
      o.rel_tol = 1e-11;
      out.c2[idx] = integrate(f, 0.0, L, cfg.beta.breakpoints(), o) / e.A_norm;
    } else {
      VectorField3 p = phi(mode, cfg);
      out.c2[idx] = meas.kind == Measurement::Kind::Dirichlet ? p.f(meas.xi) : p.df(meas.xi);
    }
  });
  return out;
}

namespace {

double require_alpha(const PlantConfig& cfg) {
  if (!cfg.alpha) throw ValidationError("input coefficients require alpha");
  return *cfg.alpha;
}

}  // namespace

InputCoeffs input_coeffs(int n_max, int m_max, const PlantConfig& cfg) {
  const double al = require_alpha(cfg), L = cfg.L, sq = std::sqrt(2 / L);
  InputCoeffs out;
  const auto& beta = cfg.beta;
  for (int n = 1; n <= n_max; ++n) {
    const double w = n * M_PI / L, lam = cfg.c - w * w;
    auto F = [&](double s) { return beta(s) * sq * std::sin(w * s); };
    auto sF = [&](double s) { return s * F(s); };
    const double P = integrate(sF, 0.0, L, beta.breakpoints(), tight());
    double a, b;
    if (std::abs(lam) < kZeroLambda) {
      a = P;
      auto q = [&](double s) { return F(s) * (s * L * L / 2 - s * s * s / 6); };
      b = -integrate(q, 0.0, L, beta.breakpoints(), tight()) / (al * L);
    } else {
      const double k = std::abs(lam);
      Scaled g = gamma(n, cfg);
      // h(L) = sqrt(2/L) gamma / (lambda D)
      double hL = sq * g.at_scale(k * L) * 2.0 / (lam * kernel::robin_denominator_scaled(lam, al, L));
      a = (P - hL) / (lam * al * L);
      b = -(P - (1 + al * lam * L) * hL) / (al * L * lam * lam);
    }
    out.a1.push_back(a);
    out.b1.push_back(b);
  }
  for (int m = -m_max; m <= m_max; ++m) {
    EigenData e = eigenvalue(Mode::hyperbolic(m, Variant::Damped), cfg);
    const cd lam = e.lambda;
    const double A = e.A_norm;
    out.a2.push_back(A * std::sinh(lam * L) / (al * L * L * lam * lam));
    out.b2.push_back(A / (al * L * L * lam) * (L * std::cosh(lam * L) / lam - std::sinh(lam * L) / (lam * lam)));
  }
  return out;
}

std::pair<double, double> input_coeffs_quadrature(int n, const PlantConfig& cfg) {
  const double al = require_alpha(cfg), L = cfg.L;
  VectorField3 p = psi(Mode::parabolic(n, Variant::Damped), cfg);
  double a = std::real(p.g(L)) / (al * L);
  auto f = [&](double x) { return x * std::real(p.h(x)); };
  QuadOptions o;
  o.rel_tol = 1e-11;
  double b = -integrate(f, 0.0, L, cfg.beta.breakpoints(), o) / (al * L);
  return {a, b};
}

double v_weight(int n, double T, WeightSpace space, const PlantConfig& cfg) {
  const double L = cfg.L;
  Scaled g = gamma(n, cfg);
  if (g.mant == 0.0 || std::abs(g.mant) < 1e-12 * std::max(1.0, std::exp(-g.log_scale)))
    throw DesignError("controllability lost at mode n=" + std::to_string(n) + " (gamma_n = 0)");
  double nu = 2 * M_PI * M_PI / L * (space == WeightSpace::V ? 1 + T / L : 1.0);
  return 4 * std::log(static_cast<double>(n)) - 2 * g.log_abs() + nu * n * n;
}

CoefficientTable build_table(const PlantConfig& cfg, const Measurement& meas, int n_max, int m_max, int jobs) {
  require_valid(cfg);
  CoefficientTable t;
  t.n_max = n_max;
  t.m_max = m_max;
  for (int n = 1; n <= n_max; ++n) {
    t.lambda1.push_back(eigenvalue(Mode::parabolic(n), cfg).lambda.real());
    t.gamma.push_back(gamma(n, cfg));
  }
  for (int m = -m_max; m <= m_max; ++m) t.lambda2.push_back(eigenvalue(Mode::hyperbolic(m), cfg).lambda);
  InputCoeffs in = input_coeffs(n_max, m_max, cfg);
  OutputCoeffs out = output_coeffs(meas, n_max, m_max, cfg, Variant::Damped, jobs);
  t.a1 = in.a1;
  t.b1 = in.b1;
  t.a2 = in.a2;
  t.b2 = in.b2;
  t.c1 = out.c1;
  t.c2 = out.c2;
  return t;
}

}  // namespace cascade
