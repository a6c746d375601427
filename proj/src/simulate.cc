#include "cascade/simulate.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascade/errors.h"
#include "cascade/parallel.h"
#include "cascade/quadrature.h"

namespace cascade {

InitialData InitialData::from_samples(double L, const std::vector<double>& y0, const std::vector<double>& z0,
                                      const std::vector<double>& z1, double v0) {
  for (const auto* v : {&y0, &z0, &z1})
    if (!v->empty() && v->size() < 256) throw ValidationError("initial data needs at least 256 samples");
  InitialData d;
  d.v0 = v0;
  if (!y0.empty()) d.y0 = [p = Profile::sampled(L, y0)](double x) { return p(x); };
  if (!z1.empty()) d.z1 = [p = Profile::sampled(L, z1)](double x) { return p(x); };
  if (!z0.empty()) {
    if (std::abs(z0.front()) > 1e-8) throw ValidationError("z0 must vanish at x = 0");
    d.z0 = [p = Profile::sampled(L, z0)](double x) { return p(x); };
    const int n = static_cast<int>(z0.size());
    const double h = L / (n - 1);
    std::vector<double> dz(n);
    for (int i = 0; i < n; ++i) {
      int lo = std::max(0, i - 1), hi = std::min(n - 1, i + 1);
      dz[i] = (z0[hi] - z0[lo]) / ((hi - lo) * h);
    }
    d.dz0 = [p = Profile::sampled(L, dz)](double x) { return p(x); };
  }
  if (!y0.empty() && (std::abs(y0.front()) > 1e-8 || std::abs(y0.back()) > 1e-8))
    throw ValidationError("y0 must vanish at both ends");
  return d;
}

ModalState project_initial(const InitialData& data, int n_sim, int m_sim, const PlantConfig& cfg, int jobs,
                           int panels) {
  if (!cfg.alpha) throw ValidationError("projection requires alpha");
  const double L = cfg.L, alpha = *cfg.alpha;
  NodeSet ns = composite_nodes(0.0, L, cfg.beta.breakpoints(), panels);
  const std::size_t q = ns.x.size();
  std::vector<double> f(q, 0.0), dg(q, 0.0), h(q, 0.0);
  std::function<double(double)> dz0 = data.dz0;
  if (!dz0 && data.z0) {
    const double e = 1e-6 * L;
    dz0 = [z0 = data.z0, e, L](double x) {
      double lo = std::max(0.0, x - e), hi = std::min(L, x + e);
      return (z0(hi) - z0(lo)) / (hi - lo);
    };
  }
  for (std::size_t i = 0; i < q; ++i) {
    double x = ns.x[i];
    if (data.y0) f[i] = data.y0(x);
    if (dz0) dg[i] = dz0(x);
    h[i] = (data.z1 ? data.z1(x) : 0.0) - x * data.v0 / (alpha * L);
  }
  const bool any_f = std::any_of(f.begin(), f.end(), [](double v) { return v != 0; });
  const bool any_g = std::any_of(dg.begin(), dg.end(), [](double v) { return v != 0; });
  const bool any_h = std::any_of(h.begin(), h.end(), [](double v) { return v != 0; });

  std::vector<Mode> modes;
  for (int n = 1; n <= n_sim; ++n) modes.push_back(Mode::parabolic(n));
  for (int m = -m_sim; m <= m_sim; ++m) modes.push_back(Mode::hyperbolic(m));
  std::vector<cd> coef(modes.size());
  parallel_for(static_cast<int>(modes.size()), jobs, [&](int k) {
    VectorField3 p = psi(modes[k], cfg);
    cd s = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      const double x = ns.x[i];
      cd v = 0.0;
      if (any_f && p.f) v += f[i] * std::conj(p.f(x));
      if (any_g && p.dg) v += dg[i] * std::conj(p.dg(x));
      if (any_h && p.h) v += h[i] * std::conj(p.h(x));
      s += ns.w[i] * v;
    }
    coef[k] = s;
  });
  ModalState st;
  st.w1 = Eigen::Map<Eigen::VectorXcd>(coef.data(), n_sim);
  st.w2 = Eigen::Map<Eigen::VectorXcd>(coef.data() + n_sim, 2 * m_sim + 1);
  return st;
}

void gather_observer(ClosedLoopSystem& s) {
  const int k = static_cast<int>(s.obs_index.size());
  s.lam_o.resize(k);
  s.a_o.resize(k);
  s.b_o.resize(k);
  s.c_o.resize(k);
  for (int i = 0; i < k; ++i) {
    int j = s.obs_index[i];
    s.lam_o(i) = s.lam(j);
    s.a_o(i) = s.a(j);
    s.b_o(i) = s.b(j);
    s.c_o(i) = s.c(j);
  }
}

ClosedLoopSystem assemble(const PlantConfig& cfg, const Measurement& meas, const CertifiedController& ctrl, int n_sim,
                          int m_sim, int jobs) {
  if (n_sim < ctrl.N || m_sim < ctrl.M) throw ValidationError("simulated modes must include the controller's");
  PlantConfig c = cfg;
  c.alpha = ctrl.alpha;
  CoefficientTable t = build_table(c, meas, n_sim, m_sim, jobs);
  ClosedLoopSystem s;
  s.n_sim = n_sim;
  s.m_sim = m_sim;
  const int np = n_sim + 2 * m_sim + 1;
  s.lam.resize(np);
  s.a.resize(np);
  s.b.resize(np);
  s.c.resize(np);
  s.weight.resize(np);
  for (int n = 1; n <= n_sim; ++n) {
    int i = s.parabolic_index(n);
    s.lam(i) = t.lam1(n);
    s.a(i) = t.A1(n);
    s.b(i) = t.B1(n);
    s.c(i) = t.C1(n);
    s.weight(i) = std::pow(n, ctrl.sigma);
  }
  for (int m = -m_sim; m <= m_sim; ++m) {
    int i = s.hyperbolic_index(m);
    s.lam(i) = t.lam2(m);
    s.a(i) = t.A2(m);
    s.b(i) = t.B2(m);
    s.c(i) = t.C2(m);
    s.weight(i) = 1.0;
  }
  s.N0 = ctrl.N0;
  s.K = ctrl.K;
  s.L = ctrl.L;
  for (int n = 1; n <= ctrl.N; ++n) s.obs_index.push_back(s.parabolic_index(n));
  for (int m : hyperbolic_order(ctrl.M)) s.obs_index.push_back(s.hyperbolic_index(m));
  gather_observer(s);
  s.P = ctrl.P;
  s.delta = ctrl.delta;
  const Eigen::Index k = static_cast<Eigen::Index>(s.obs_index.size());
  if (s.P.size() && s.P.rows() != 1 + 2 * k) throw ValidationError("certificate size does not match (N, M)");
  return s;
}

SimState initial_state(const ClosedLoopSystem& sys, const ModalState& modal, double v0) {
  SimState s;
  s.w.resize(sys.plant_size());
  s.w << modal.w1.head(sys.n_sim), modal.w2;
  s.what = Eigen::VectorXcd::Zero(sys.obs_index.size());
  s.v = v0;
  return s;
}

double feedback(const ClosedLoopSystem& sys, const SimState& s) {
  double vd = sys.K.size() ? sys.K(0) * s.v : 0.0;
  for (int i = 0; i < sys.N0; ++i) vd += sys.K(1 + i) * s.what(i).real();
  return vd;
}

double output(const ClosedLoopSystem& sys, const Eigen::VectorXcd& w) { return sys.c.cwiseProduct(w).sum().real(); }

namespace {

// Split real/imaginary storage of the closed loop; the state is the flat
// vector (Re w, Im w, Re w^, Im w^, v).
class FlatLoop {
 public:
  explicit FlatLoop(const ClosedLoopSystem& sys)
      : sys_(sys), np_(sys.plant_size()), no_(static_cast<int>(sys.obs_index.size())) {
    split(sys.lam, lp_r_, lp_i_);
    split(sys.a, ap_r_, ap_i_);
    split(sys.b, bp_r_, bp_i_);
    split(sys.c, cp_r_, cp_i_);
    split(sys.lam_o, lo_r_, lo_i_);
    split(sys.a_o, ao_r_, ao_i_);
    split(sys.b_o, bo_r_, bo_i_);
    split(sys.c_o, co_r_, co_i_);
    size_ = 2 * np_ + 2 * no_ + 1;
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &tmp_}) k->assign(size_, 0.0);
    tail_.assign(np_, 0.0);
    for (int i = 0; i < np_; ++i) tail_[i] = sys.weight.size() ? sys.weight(i) : 1.0;
    for (int j : sys.obs_index) tail_[j] = 0.0;
    if (sys.P.size()) X_.resize(sys.P.rows());
  }

  int size() const { return size_; }

  void pack(const SimState& s, std::vector<double>& x) const {
    x.assign(size_, 0.0);
    for (int i = 0; i < np_; ++i) {
      x[i] = s.w(i).real();
      x[np_ + i] = s.w(i).imag();
    }
    for (int i = 0; i < no_; ++i) {
      x[2 * np_ + i] = s.what(i).real();
      x[2 * np_ + no_ + i] = s.what(i).imag();
    }
    x[size_ - 1] = s.v;
  }

  void unpack(const std::vector<double>& x, double t, SimState& s) const {
    s.w.resize(np_);
    s.what.resize(no_);
    for (int i = 0; i < np_; ++i) s.w(i) = cd(x[i], x[np_ + i]);
    for (int i = 0; i < no_; ++i) s.what(i) = cd(x[2 * np_ + i], x[2 * np_ + no_ + i]);
    s.v = x[size_ - 1];
    s.t = t;
  }

  double feedback(const double* x) const {
    const double* hr = x + 2 * np_;
    double vd = sys_.K.size() ? sys_.K(0) * x[size_ - 1] : 0.0;
    for (int i = 0; i < sys_.N0; ++i) vd += sys_.K(1 + i) * hr[i];
    return vd;
  }

  double output(const double* x) const {
    const double *wr = x, *wi = x + np_;
    double y = 0;
    for (int i = 0; i < np_; ++i) y += cp_r_[i] * wr[i] - cp_i_[i] * wi[i];
    return y;
  }

  void rhs(const double* __restrict x, double* __restrict d) const {
    const double v = x[size_ - 1], vd = feedback(x);
    plant_rhs(np_, lp_r_.data(), lp_i_.data(), ap_r_.data(), ap_i_.data(), bp_r_.data(), bp_i_.data(), v, vd, x,
              x + np_, d, d + np_);
    const double *hr = x + 2 * np_, *hi = x + 2 * np_ + no_;
    double* dhr = d + 2 * np_;
    plant_rhs(no_, lo_r_.data(), lo_i_.data(), ao_r_.data(), ao_i_.data(), bo_r_.data(), bo_i_.data(), v, vd, hr, hi,
              dhr, d + 2 * np_ + no_);
    if (sys_.N0 > 0 && sys_.L.size()) {
      double yhat = 0;
      for (int i = 0; i < no_; ++i) yhat += co_r_[i] * hr[i] - co_i_[i] * hi[i];
      const double innov = yhat - output(x);
      for (int i = 0; i < sys_.N0; ++i) dhr[i] -= sys_.L(i) * innov;
    }
    d[size_ - 1] = vd;
  }

  static void plant_rhs(int n, const double* __restrict lr, const double* __restrict li, const double* __restrict ar,
                        const double* __restrict ai, const double* __restrict br, const double* __restrict bi,
                        double v, double vd, const double* __restrict wr, const double* __restrict wi,
                        double* __restrict dr, double* __restrict di) {
    for (int i = 0; i < n; ++i) {
      dr[i] = lr[i] * wr[i] - li[i] * wi[i] + ar[i] * v + br[i] * vd;
      di[i] = lr[i] * wi[i] + li[i] * wr[i] + ai[i] * v + bi[i] * vd;
    }
  }

  void step(std::vector<double>& xv, double dt) {
    const int n = size_;
    double* __restrict x = xv.data();
    double* __restrict t = tmp_.data();
    const double *a = k1_.data(), *b = k2_.data(), *c = k3_.data(), *e = k4_.data();
    rhs(x, k1_.data());
    for (int i = 0; i < n; ++i) t[i] = x[i] + 0.5 * dt * a[i];
    rhs(t, k2_.data());
    for (int i = 0; i < n; ++i) t[i] = x[i] + 0.5 * dt * b[i];
    rhs(t, k3_.data());
    for (int i = 0; i < n; ++i) t[i] = x[i] + dt * c[i];
    rhs(t, k4_.data());
    double big = 0;
    for (int i = 0; i < n; ++i) {
      double y = x[i] + dt / 6 * (a[i] + 2 * b[i] + 2 * c[i] + e[i]);
      x[i] = std::abs(y) < 1e-200 ? 0.0 : y;  // keeps decayed modes out of subnormal range
      big = std::max(big, std::abs(y));
    }
    if (!(big < 1e15)) throw NumericError("closed-loop state diverged");
  }

  double lyapunov(const std::vector<double>& x) {
    const int k = no_, N0 = sys_.N0, rest = k - N0;
    const double *wr = x.data(), *wi = x.data() + np_, *hr = x.data() + 2 * np_, *hi = hr + no_;
    auto w = [&](int j) { return cd(wr[j], wi[j]); };
    auto h = [&](int j) { return cd(hr[j], hi[j]); };
    X_(0) = x[size_ - 1];
    for (int i = 0; i < N0; ++i) {
      X_(1 + i) = h(i);
      X_(1 + N0 + i) = w(sys_.obs_index[i]) - h(i);
    }
    for (int i = 0; i < rest; ++i) {
      X_(1 + 2 * N0 + i) = h(N0 + i);
      X_(1 + 2 * N0 + rest + i) = w(sys_.obs_index[N0 + i]) - h(N0 + i);
    }
    double V = 0;
    const Eigen::Index d = X_.size();
    for (Eigen::Index j = 0; j < d; ++j) {
      cd col = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) col += std::conj(X_(i)) * sys_.P(i, j);
      V += (col * X_(j)).real();
    }
    for (int i = 0; i < np_; ++i) V += tail_[i] * (wr[i] * wr[i] + wi[i] * wi[i]);
    return V;
  }

 private:
  static void split(const Eigen::VectorXcd& v, std::vector<double>& re, std::vector<double>& im) {
    re.resize(v.size());
    im.resize(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      re[i] = v(i).real();
      im[i] = v(i).imag();
    }
  }

  const ClosedLoopSystem& sys_;
  int np_, no_, size_ = 0;
  std::vector<double> lp_r_, lp_i_, ap_r_, ap_i_, bp_r_, bp_i_, cp_r_, cp_i_;
  std::vector<double> lo_r_, lo_i_, ao_r_, ao_i_, bo_r_, bo_i_, co_r_, co_i_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_, tail_;
  Eigen::VectorXcd X_;
};

}  // namespace

SimState step_closed_loop(const ClosedLoopSystem& sys, const SimState& s, double dt) {
  FlatLoop loop(sys);
  std::vector<double> x;
  loop.pack(s, x);
  loop.step(x, dt);
  SimState r;
  loop.unpack(x, s.t + dt, r);
  return r;
}

double norm_of(const ClosedLoopSystem& sys, const SimState& s, NormKind kind) {
  if (kind != NormKind::Lyapunov) {
    double tot = 0;
    for (int i = 0; i < sys.plant_size(); ++i) {
      double wt = 1.0;
      if (kind == NormKind::H1 && i < sys.n_sim) wt = double(i + 1) * (i + 1);
      tot += wt * std::norm(s.w(i));
    }
    return tot;
  }
  if (sys.P.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  FlatLoop loop(sys);
  std::vector<double> x;
  loop.pack(s, x);
  return loop.lyapunov(x);
}

double default_dt(const ClosedLoopSystem& sys, double L) {
  double lmax = 0;
  for (Eigen::Index i = 0; i < sys.lam.size(); ++i) lmax = std::max(lmax, std::abs(sys.lam(i)));
  double dt = L * L / (8.0 * std::max(sys.m_sim, 1) * M_PI);
  if (lmax > 0) dt = std::min(dt, 0.2 / lmax);
  return dt;
}

ClosedLoopTrajectory simulate(const ClosedLoopSystem& sys, const SimState& start, const SimOptions& opt, double L) {
  ClosedLoopTrajectory tr;
  double dt = opt.dt > 0 ? opt.dt : default_dt(sys, L);
  tr.steps = std::max(1L, static_cast<long>(std::ceil(opt.t_final / dt - 1e-9)));
  dt = opt.t_final / tr.steps;
  tr.dt = dt;
  const long every = std::max(1L, tr.steps / std::max(1, opt.samples));
  const bool lyap = sys.P.size() > 0;
  const double contraction = std::exp(-2 * sys.delta * dt);

  auto record = [&](const SimState& s, double V) {
    tr.t.push_back(s.t);
    tr.v.push_back(s.v);
    tr.vd.push_back(feedback(sys, s));
    tr.yo.push_back(output(sys, s.w));
    tr.h0.push_back(norm_of(sys, s, NormKind::H0));
    tr.h1.push_back(norm_of(sys, s, NormKind::H1));
    tr.lyapunov.push_back(V);
    if (opt.keep_states) tr.states.push_back(s);
  };

  FlatLoop loop(sys);
  std::vector<double> x;
  loop.pack(start, x);
  SimState s;
  loop.unpack(x, 0.0, s);
  double V = lyap ? loop.lyapunov(x) : std::numeric_limits<double>::quiet_NaN();
  record(s, V);
  for (long k = 1; k <= tr.steps; ++k) {
    loop.step(x, dt);
    if (lyap) {
      double Vn = loop.lyapunov(x);
      if (V > 0) {
        double ratio = Vn / (contraction * V);
        if (ratio > tr.worst_step_ratio) {
          tr.worst_step_ratio = ratio;
          tr.worst_step_time = k * dt;
        }
      }
      V = Vn;
    }
    if (k % every == 0 || k == tr.steps) {
      loop.unpack(x, k * dt, s);
      record(s, V);
    }
  }
  tr.final_state = s;
  return tr;
}

DecayFit decay_rate_fit(const std::vector<double>& t, const std::vector<double>& ch, double t0, double t1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size() && i < ch.size(); ++i) {
    if (t[i] < t0 - 1e-12 || t[i] > t1 + 1e-12) continue;
    if (!(ch[i] > 0)) throw NumericError("decay fit: channel is not positive on the window");
    double x = t[i], y = std::log(ch[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  if (n < 2) throw NumericError("decay fit: fewer than two samples in the window");
  double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  if (!(vx > 0)) throw NumericError("decay fit: degenerate window");
  DecayFit f;
  double slope = cxy / vx;
  f.rate = -slope;
  f.log_prefactor = (sy - slope * sx) / n;
  f.r_squared = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

ModalState modal_state(const ClosedLoopSystem& sys, const SimState& s) {
  ModalState m;
  m.w1 = s.w.head(sys.n_sim);
  m.w2 = s.w.tail(2 * sys.m_sim + 1);
  return m;
}

std::vector<cd> reconstruct_field(const ModalState& st, double v, const std::vector<double>& x, FieldKind which,
                                  const PlantConfig& cfg) {
  std::vector<cd> out(x.size(), 0.0);
  const int n_sim = static_cast<int>(st.w1.size()), m_sim = (static_cast<int>(st.w2.size()) - 1) / 2;
  if (which == FieldKind::Y) {
    for (int n = 1; n <= n_sim; ++n) {
      if (st.w1(n - 1) == 0.0) continue;
      VectorField3 p = phi(Mode::parabolic(n), cfg);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] += st.w1(n - 1) * p.f(x[i]);
    }
  }
  for (int m = -m_sim; m <= m_sim; ++m) {
    cd w = st.w2(m + m_sim);
    if (w == 0.0) continue;
    VectorField3 p = phi(Mode::hyperbolic(m), cfg);
    const auto& comp = which == FieldKind::Y ? p.f : which == FieldKind::Z ? p.g : p.h;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += w * comp(x[i]);
  }
  if (which == FieldKind::Zt) {
    if (!cfg.alpha) throw ValidationError("reconstruction of z_t requires alpha");
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += x[i] * v / (*cfg.alpha * cfg.L);
  }
  return out;
}

}  // namespace cascade
