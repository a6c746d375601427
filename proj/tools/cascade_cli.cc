#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascade/coupling.h"
#include "cascade/errors.h"
#include "cascade/lyapunov.h"
#include "cascade/reduction.h"
#include "cascade/serialize.h"
#include "cascade/simulate.h"
#include "cascade/synthesis.h"

using namespace cascade;
namespace fs = std::filesystem;

namespace {

const char* kVersion = "0.1.0";

struct Common {
  std::string config_path;
  std::optional<double> alpha;
  std::string out_dir = ".";
  int jobs = 1;
  unsigned seed = 0;
};

struct Run {
  Run(std::string cmd, Common* c) : command(std::move(cmd)), common(c) {}

  std::string command;
  Common* common;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json params = json::object();
  std::string config_text;

  std::string path(const std::string& name) const {
    fs::create_directories(common->out_dir);
    return (fs::path(common->out_dir) / name).string();
  }

  // One manifest per output file.
  void manifest(const std::string& output) const {
    RunManifest m;
    m.command = command;
    m.config_hash = content_hash(config_text);
    m.parameters = params;
    m.parameters["jobs"] = common->jobs;
    m.parameters["seed"] = common->seed;
    m.outputs = {output};
    m.version = kVersion;
    m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(output + ".manifest.json", m);
  }
};

PlantConfig plant(const Common& c, Run& run) {
  PlantConfig cfg;
  if (!c.config_path.empty()) cfg = load_config(c.config_path);
  if (c.alpha) cfg.alpha = c.alpha;
  require_valid(cfg);
  run.config_text = config_to_json_text(cfg);
  return cfg;
}

Variant variant_from(const std::string& s) {
  if (s == "damped") return Variant::Damped;
  if (s == "undamped") return Variant::Undamped;
  throw ValidationError("variant must be 'damped' or 'undamped'");
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "plant configuration JSON");
  sub->add_option("--alpha", c.alpha, "damping gain override");
  sub->add_option("--out-dir", c.out_dir, "directory for output files");
}

int cmd_spectrum(Common& c, int n_max, int m_max, const std::string& var) {
  Run run{"spectrum", &c};
  PlantConfig cfg = plant(c, run);
  Variant v = variant_from(var);
  run.params = {{"n_max", n_max}, {"m_max", m_max}, {"variant", var}};
  std::vector<std::vector<double>> rows;
  for (int n = 1; n <= n_max; ++n) {
    cd l = eigenvalue(Mode::parabolic(n, v), cfg).lambda;
    rows.push_back({1, double(n), l.real(), l.imag(), 0.0});
  }
  for (int m = -m_max; m <= m_max; ++m) {
    EigenData e = eigenvalue(Mode::hyperbolic(m, v), cfg);
    rows.push_back({2, double(m), e.lambda.real(), e.lambda.imag(), e.A_norm});
  }
  std::string out = run.path("spectrum.csv");
  write_csv(out, {"branch", "index", "lambda_re", "lambda_im", "A_norm"}, rows);
  run.manifest(out);
  std::cout << out << "\n";
  return 0;
}

int cmd_eigenfun(Common& c, const std::string& branch, int index, const std::string& var, const std::string& which,
                 int grid) {
  Run run{"eigenfun", &c};
  PlantConfig cfg = plant(c, run);
  run.params = {{"branch", branch}, {"index", index}, {"variant", var}, {"which", which}, {"grid", grid}};
  if (grid < 2) throw ValidationError("grid needs at least 2 points");
  Variant v = variant_from(var);
  Mode mode;
  if (branch == "parabolic")
    mode = Mode::parabolic(index, v);
  else if (branch == "hyperbolic")
    mode = Mode::hyperbolic(index, v);
  else
    throw ValidationError("branch must be 'parabolic' or 'hyperbolic'");
  if (which != "phi" && which != "psi") throw ValidationError("which must be 'phi' or 'psi'");
  VectorField3 f = which == "phi" ? phi(mode, cfg) : psi(mode, cfg);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < grid; ++i) {
    double x = cfg.L * i / (grid - 1);
    cd a = f.f ? f.f(x) : 0.0, b = f.g ? f.g(x) : 0.0, h = f.h ? f.h(x) : 0.0;
    rows.push_back({x, a.real(), a.imag(), b.real(), b.imag(), h.real(), h.imag()});
  }
  std::string out = run.path("eigenfun_" + which + "_" + branch + "_" + std::to_string(index) + ".csv");
  write_csv(out, {"x", "f_re", "f_im", "g_re", "g_im", "h_re", "h_im"}, rows);
  run.manifest(out);
  std::cout << out << "\n";
  return 0;
}

struct Sweep {
  std::string spec;  // "b=lo:hi:count"
  int n = 0;
  double a = 0.0, beta0 = 1.0;
};

int cmd_gamma(Common& c, int n_max, const Sweep& sw) {
  Run run{"gamma", &c};
  PlantConfig cfg = plant(c, run);
  std::vector<std::vector<double>> rows;
  std::string out;
  if (!sw.spec.empty()) {
    double lo = 0, hi = 0;
    int count = 0;
    if (std::sscanf(sw.spec.c_str(), "b=%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 || !(hi > lo))
      throw ValidationError("sweep must read b=lo:hi:count");
    const int n = sw.n > 0 ? sw.n : 1;
    run.params = {{"n", n}, {"sweep", sw.spec}, {"a", sw.a}, {"beta0", sw.beta0}};
    for (int k = 0; k < count; ++k) {
      double b = lo + (hi - lo) * k / (count - 1);
      if (!(b > sw.a) || b > cfg.L) continue;
      rows.push_back({b, gamma_indicator(n, cfg.L, cfg.c, sw.beta0, sw.a, b).value()});
    }
    out = run.path("gamma_sweep.csv");
    write_csv(out, {"b", "gamma"}, rows);
    run.manifest(out);
    std::cout << out << "\n";
    for (double b : find_gamma_zero(n, cfg.L, cfg.c, sw.beta0, sw.a, lo, hi, {std::max(count, 100)}))
      std::cout << "gamma_" << n << " = 0 at b = " << fmt(b) << "\n";
    return 0;
  }
  if (sw.n > 0) n_max = sw.n;
  run.params = {{"n_max", n_max}};
  for (int n = (sw.n > 0 ? sw.n : 1); n <= n_max; ++n) {
    Scaled g = gamma(n, cfg);
    rows.push_back({double(n), g.mant, g.log_scale, g.mant == 0 ? -INFINITY : g.log_abs(), double(g.sign())});
  }
  out = run.path("gamma.csv");
  write_csv(out, {"n", "mantissa", "log_scale", "log_abs_gamma", "sign"}, rows);
  run.manifest(out);
  std::cout << out << "\n";
  return 0;
}

int cmd_weights(Common& c, int n_max, double T, const std::string& space) {
  Run run{"weights", &c};
  PlantConfig cfg = plant(c, run);
  run.params = {{"n_max", n_max}, {"T", T}, {"space", space}};
  WeightSpace ws;
  if (space == "V" || space == "v")
    ws = WeightSpace::V;
  else if (space == "V0" || space == "v0")
    ws = WeightSpace::V0;
  else
    throw ValidationError("space must be V or V0");
  std::vector<std::vector<double>> rows;
  for (int n = 1; n <= n_max; ++n) rows.push_back({double(n), v_weight(n, T, ws, cfg)});
  std::string out = run.path("weights.csv");
  write_csv(out, {"n", "log_weight"}, rows);
  run.manifest(out);
  std::cout << out << "\n";
  return 0;
}

json matrix_json(const Eigen::MatrixXd& A) {
  json r = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back(A(i, k));
    r.push_back(row);
  }
  return r;
}

json cvec_json(const Eigen::VectorXcd& v) {
  json r = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) r.push_back(to_json(v(i)));
  return r;
}

int cmd_reduce(Common& c, int N0, int N, int M, const std::string& meas_spec) {
  Run run{"reduce", &c};
  PlantConfig cfg = plant(c, run);
  run.params = {{"N0", N0}, {"N", N}, {"M", M}, {"measurement", meas_spec}};
  Measurement meas = parse_measurement(meas_spec, cfg.L);
  CoefficientTable t = build_table(cfg, meas, N, M, c.jobs);
  ReducedModel r = build_reduced(N0, N, M, t);
  KalmanResult kc = kalman_controllable(r.A1, r.B1);
  json j;
  j["N0"] = N0;
  j["N"] = N;
  j["M"] = M;
  j["A1"] = matrix_json(r.A1);
  j["B1"] = matrix_json(r.B1);
  j["A0"] = matrix_json(r.A0);
  j["C0"] = matrix_json(r.C0);
  j["A2_diag"] = cvec_json(r.A2);
  j["Ba1"] = cvec_json(r.Ba1);
  j["Bb1"] = cvec_json(r.Bb1);
  j["C1"] = cvec_json(r.C1.transpose());
  j["controllable"] = kc.controllable;
  j["kalman_rank"] = kc.rank;
  j["modal_margin"] = kc.modal_margin;
  j["hautus_margin"] = kc.hautus_margin;
  j["observable"] = kalman_observable(r.A0, r.C0);
  std::string out = run.path("reduce.json");
  write_text(out, j.dump(2) + "\n");
  run.manifest(out);
  std::cout << out << "\n";
  return 0;
}

int cmd_design(Common& c, DesignSpec spec, const std::string& meas_spec) {
  Run run{"design", &c};
  PlantConfig cfg = plant(c, run);
  run.params = {{"delta", spec.delta}, {"measurement", meas_spec}, {"sigma", spec.sigma},
                {"n_cap", spec.n_cap}, {"m_cap", spec.m_cap}};
  if (spec.epsilon) run.params["epsilon"] = *spec.epsilon;
  Measurement meas = parse_measurement(meas_spec, cfg.L);
  CertifiedController ctl = auto_tune(cfg, meas, spec, c.jobs);
  std::string gains = run.path("gains.json"), cert = run.path("certificate.txt");
  write_text(gains, controller_to_json(ctl, cfg, meas).dump(2) + "\n");
  run.manifest(gains);
  std::string text = certificate_text(ctl);
  write_text(cert, text);
  run.manifest(cert);
  std::cout << text;
  return ctl.certified ? 0 : 3;
}

InitialData default_initial(double L) {
  InitialData d;
  d.y0 = [L](double x) { return x * (L - x); };
  d.z0 = [L](double x) { return std::sin(M_PI * x / (2 * L)); };
  d.dz0 = [L](double x) { return M_PI / (2 * L) * std::cos(M_PI * x / (2 * L)); };
  return d;
}

int cmd_simulate(Common& c, const std::string& gains_path, const std::string& init_path, double tfinal, int n_sim,
                 int m_sim, double v0, double dt, int snapshots, int grid) {
  Run run{"simulate", &c};
  LoadedController lc = load_controller(gains_path);
  PlantConfig cfg = lc.config;
  if (!c.config_path.empty()) {
    cfg = load_config(c.config_path);
    cfg.alpha = lc.controller.alpha;
  }
  run.config_text = config_to_json_text(cfg);
  run.params = {{"gains", gains_path}, {"tfinal", tfinal}, {"n_sim", n_sim}, {"m_sim", m_sim}, {"v0", v0},
                {"dt", dt}, {"snapshots", snapshots}};
  InitialData data = default_initial(cfg.L);
  if (!init_path.empty()) {
    json j = json::parse(read_text(init_path));
    auto arr = [&](const char* k) { return j.value(k, std::vector<double>{}); };
    data = InitialData::from_samples(cfg.L, arr("y0"), arr("z0"), arr("z1"), j.value("v0", 0.0));
    run.params["init"] = init_path;
  }
  data.v0 = v0 != 0.0 ? v0 : data.v0;
  ClosedLoopSystem sys = assemble(cfg, lc.measurement, lc.controller, n_sim, m_sim, c.jobs);
  ModalState ms = project_initial(data, n_sim, m_sim, cfg, c.jobs);
  SimState s0 = initial_state(sys, ms, data.v0);
  SimOptions opt;
  opt.t_final = tfinal;
  opt.dt = dt;
  opt.keep_states = snapshots > 0;
  ClosedLoopTrajectory tr = simulate(sys, s0, opt, cfg.L);

  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    rows.push_back({tr.t[i], tr.h0[i], tr.h1[i], tr.lyapunov[i], tr.v[i], tr.vd[i], tr.yo[i]});
  std::string out = run.path("trajectory.csv");
  write_csv(out, {"t", "h0", "h1", "V", "v", "v_d", "y_o"}, rows);
  run.manifest(out);

  if (snapshots > 0) {
    std::vector<double> xs(grid);
    for (int i = 0; i < grid; ++i) xs[i] = cfg.L * i / (grid - 1);
    std::vector<std::vector<double>> frows;
    for (int k = 0; k < snapshots; ++k) {
      std::size_t idx = snapshots == 1 ? 0 : k * (tr.states.size() - 1) / (snapshots - 1);
      const SimState& s = tr.states[idx];
      ModalState m = modal_state(sys, s);
      auto y = reconstruct_field(m, s.v, xs, FieldKind::Y, cfg);
      auto z = reconstruct_field(m, s.v, xs, FieldKind::Z, cfg);
      auto zt = reconstruct_field(m, s.v, xs, FieldKind::Zt, cfg);
      for (int i = 0; i < grid; ++i)
        frows.push_back({s.t, xs[i], y[i].real(), y[i].imag(), z[i].real(), z[i].imag(), zt[i].real(), zt[i].imag()});
    }
    std::string fo = run.path("fields.csv");
    write_csv(fo, {"t", "x", "y_re", "y_im", "z_re", "z_im", "zt_re", "zt_im"}, frows);
    run.manifest(fo);
  }
  std::cout << out << "\n";
  std::cout << "dt = " << fmt(tr.dt) << ", steps = " << tr.steps << "\n";
  double t0 = std::min(2.0, 0.25 * tfinal);
  if (sys.P.size()) {
    DecayFit f = decay_rate_fit(tr.t, tr.lyapunov, t0, tfinal);
    std::cout << "Lyapunov decay rate on [" << t0 << ", " << tfinal << "] = " << fmt(f.rate)
              << " (2 delta = " << fmt(2 * lc.controller.delta) << ", r^2 = " << fmt(f.r_squared) << ")\n";
    std::cout << "worst per-step ratio V(t+dt) / (exp(-2 delta dt) V(t)) = " << fmt(tr.worst_step_ratio) << "\n";
  }
  return 0;
}

int cmd_fig1(Common& c, int points) {
  Run run{"fig1", &c};
  const double L = 1.0, cc = 50.0;
  run.config_text = "fig1";
  run.params = {{"L", L}, {"c", cc}, {"a", 0.0}, {"beta0", 1.0}, {"points", points}};
  std::vector<std::vector<double>> rows;
  for (int k = 1; k <= points; ++k) {
    double b = double(k) / points;
    rows.push_back({b, gamma_indicator(2, L, cc, 1.0, 0.0, b).value()});
  }
  std::string out = run.path("fig1.csv");
  write_csv(out, {"b", "gamma2"}, rows);
  run.manifest(out);
  std::vector<double> z = find_gamma_zero(2, L, cc, 1.0, 0.0, 0.0, 1.0);
  std::cout << out << "\n";
  for (double b : z) std::cout << "gamma_2 = 0 at b = " << fmt(b) << "\n";
  return 0;
}

int cmd_check(Common& c, double delta) {
  Run run{"check", &c};
  PlantConfig cfg = plant(c, run);
  std::mt19937_64 rng(c.seed);
  bool all = true;
  auto report = [&](const std::string& name, bool ok, double value) {
    all = all && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << " " << fmt(value) << "\n";
  };
  Structure st = choose_structure(cfg, delta);
  if (!cfg.alpha) cfg.alpha = st.alpha;
  require_valid(cfg);

  std::vector<Mode> modes;
  for (int n = 1; n <= 4; ++n) modes.push_back(Mode::parabolic(n));
  for (int m = -2; m <= 2; ++m) modes.push_back(Mode::hyperbolic(m));
  Eigen::MatrixXcd G = biorthogonality_check(modes, cfg);
  double bio = (G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
  report("biorthogonality", bio < 1e-6, bio);

  InputCoeffs in = input_coeffs(5, 5, cfg);
  double worst = 0;
  for (int n = 1; n <= 5; ++n) {
    double lam = eigenvalue(Mode::parabolic(n), cfg).lambda.real();
    cd rhs = std::conj(psi(Mode::parabolic(n), cfg).dg(cfg.L)) / *cfg.alpha;
    worst = std::max(worst, std::abs(in.a1[n - 1] + lam * in.b1[n - 1] - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  for (int m = -5; m <= 5; ++m) {
    cd lam = eigenvalue(Mode::hyperbolic(m), cfg).lambda;
    cd rhs = std::conj(psi(Mode::hyperbolic(m), cfg).dg(cfg.L)) / *cfg.alpha;
    worst = std::max(worst, std::abs(in.a2[m + 5] + lam * in.b2[m + 5] - rhs) / std::abs(rhs));
  }
  report("input_identity", worst < 1e-6, worst);

  std::normal_distribution<double> nd;
  Eigen::MatrixXcd A(12, 12);
  for (Eigen::Index i = 0; i < A.size(); ++i) A(i) = cd(nd(rng), nd(rng));
  A -= (A.eigenvalues().real().maxCoeff() + 1.0) * Eigen::MatrixXcd::Identity(12, 12);
  Eigen::MatrixXcd P = solve_lyapunov(A, -Eigen::MatrixXcd::Identity(12, 12));
  double res = (A.adjoint() * P + P * A + Eigen::MatrixXcd::Identity(12, 12)).norm() / P.norm();
  report("lyapunov_residual", res < 1e-8, res);

  Measurement meas = Measurement::distributed(Profile::constant(cfg.L, 1.0));
  CoefficientTable t = build_table(cfg, meas, 16, 8, c.jobs);
  ReducedModel r = build_reduced(st.N0, st.N0 + 1, 2, t);
  Eigen::RowVectorXd K = place_poles(r.A1, r.B1, default_targets(r.A1, delta));
  Eigen::VectorXd Lg = observer_gain(r.A0, r.C0, default_targets(r.A0, delta));
  Eigen::MatrixXcd F = closed_loop_matrix(r, K, Lg);
  std::vector<cd> want;
  Eigen::VectorXcd e1 = (r.A1 + r.B1 * K).eigenvalues(), e0 = (r.A0 - Lg * r.C0).eigenvalues();
  for (Eigen::Index i = 0; i < e1.size(); ++i) want.push_back(e1(i));
  for (Eigen::Index i = 0; i < e0.size(); ++i) want.push_back(e0(i));
  for (int k = 0; k < 2; ++k)
    for (Eigen::Index i = 0; i < r.A2.size(); ++i) want.push_back(r.A2(i));
  Eigen::VectorXcd got = F.eigenvalues();
  double spec_err = 0;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    double best = INFINITY;
    for (cd w : want) best = std::min(best, std::abs(got(i) - w) / std::max(1.0, std::abs(w)));
    spec_err = std::max(spec_err, best);
  }
  report("closed_loop_spectrum", spec_err < 1e-6, spec_err);
  return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-heat cascade: spectra, controller synthesis and closed-loop simulation"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--jobs", common.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "seed for randomized checks");
  app.set_version_flag("--version", kVersion);

  int n_max = 10, m_max = 10, index = 1, grid = 257, N0 = 1, N = 2, M = 2, points = 400, n_sim = 60, m_sim = 60;
  int snapshots = 0;
  double T = 2.5, tfinal = 8.0, v0 = 0.0, dt = 0.0, check_delta = 0.25;
  std::string variant = "damped", branch = "parabolic", which = "phi", space = "V", meas = "distributed";
  std::string gains, init;
  DesignSpec spec;
  std::optional<double> eps;
  Sweep sweep;

  auto* sp = app.add_subcommand("spectrum", "eigenvalues of both branches");
  add_common(sp, common);
  sp->add_option("--n-max", n_max);
  sp->add_option("--m-max", m_max);
  sp->add_option("--variant", variant);

  auto* ef = app.add_subcommand("eigenfun", "sampled eigenfunction or dual function");
  add_common(ef, common);
  ef->add_option("--branch", branch);
  ef->add_option("--index", index);
  ef->add_option("--variant", variant);
  ef->add_option("--which", which);
  ef->add_option("--grid", grid);

  auto* ga = app.add_subcommand("gamma", "coupling coefficients gamma_n");
  add_common(ga, common);
  ga->add_option("--n-max", n_max);
  ga->add_option("--n", sweep.n, "single index");
  ga->add_option("--sweep", sweep.spec, "b=lo:hi:count over beta0 * 1_[a, b]");
  ga->add_option("--a", sweep.a);
  ga->add_option("--beta0", sweep.beta0);

  auto* we = app.add_subcommand("weights", "log weights of the controllability spaces");
  add_common(we, common);
  we->add_option("--n-max", n_max);
  we->add_option("--T", T);
  we->add_option("--space", space);

  auto* re = app.add_subcommand("reduce", "truncated model and Kalman test");
  add_common(re, common);
  re->add_option("--N0", N0);
  re->add_option("--N", N);
  re->add_option("--M", M);
  re->add_option("--measurement", meas);

  auto* de = app.add_subcommand("design", "controller synthesis and certificate");
  add_common(de, common);
  de->add_option("--delta", spec.delta);
  de->add_option("--epsilon", eps);
  de->add_option("--sigma", spec.sigma)->check(CLI::IsMember({0, 2}));
  de->add_option("--n-cap", spec.n_cap);
  de->add_option("--m-cap", spec.m_cap);
  de->add_option("--k-targets", spec.k_targets);
  de->add_option("--l-targets", spec.l_targets);
  de->add_option("--measurement", meas);

  auto* si = app.add_subcommand("simulate", "closed-loop simulation");
  add_common(si, common);
  si->add_option("--gains", gains)->required();
  si->add_option("--init", init, "JSON with sampled y0, z0, z1 and v0");
  si->add_option("--tfinal", tfinal);
  si->add_option("--n-sim", n_sim);
  si->add_option("--m-sim", m_sim);
  si->add_option("--v0", v0);
  si->add_option("--dt", dt);
  si->add_option("--snapshots", snapshots);
  si->add_option("--grid", grid);

  auto* ch = app.add_subcommand("check", "invariant suite");
  add_common(ch, common);
  ch->add_option("--delta", check_delta);

  auto* f1 = app.add_subcommand("fig1", "gamma_2 against the support end b");
  f1->add_option("--out-dir", common.out_dir);
  f1->add_option("--points", points);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 64;
  }

  try {
    if (*sp) return cmd_spectrum(common, n_max, m_max, variant);
    if (*ef) return cmd_eigenfun(common, branch, index, variant, which, grid);
    if (*ga) return cmd_gamma(common, n_max, sweep);
    if (*we) return cmd_weights(common, n_max, T, space);
    if (*re) return cmd_reduce(common, N0, N, M, meas);
    if (*de) {
      spec.epsilon = eps;
      return cmd_design(common, spec, meas);
    }
    if (*si) return cmd_simulate(common, gains, init, tfinal, n_sim, m_sim, v0, dt, snapshots, grid);
    if (*ch) return cmd_check(common, check_delta);
    if (*f1) return cmd_fig1(common, points);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const DesignError& e) {
    std::cerr << "design error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
