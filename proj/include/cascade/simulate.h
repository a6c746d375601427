#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cascade/coupling.h"
#include "cascade/synthesis.h"

namespace cascade {

struct InitialData {
  std::function<double(double)> y0, z0, dz0, z1;  // empty means zero
  double v0 = 0.0;

  // Uniform samples on [0, L] (>= 256 points), linearly interpolated; z0' by differences.
  static InitialData from_samples(double L, const std::vector<double>& y0, const std::vector<double>& z0,
                                  const std::vector<double>& z1, double v0 = 0.0);
};

// w1 for n = 1..n_sim (index n-1), w2 for m = -m_sim..m_sim (index m+m_sim).
struct ModalState {
  Eigen::VectorXcd w1, w2;
};

ModalState project_initial(const InitialData& data, int n_sim, int m_sim, const PlantConfig& config,
                           int jobs = 1, int panels = 64);

// Plant modes (parabolic 1..n_sim, then hyperbolic -m_sim..m_sim) and the
// observer-based controller acting on them.
struct ClosedLoopSystem {
  int n_sim = 0, m_sim = 0;
  Eigen::VectorXcd lam, a, b, c;
  Eigen::VectorXd weight;  // n^sigma for parabolic, 1 for hyperbolic

  int N0 = 0;
  Eigen::RowVectorXd K;  // acts on (v, w^_1..N0)
  Eigen::VectorXd L;
  // observer entries: parabolic 1..N, then hyperbolic in hyperbolic_order(M)
  std::vector<int> obs_index;  // plant index of each observer entry
  Eigen::VectorXcd lam_o, a_o, b_o, c_o;  // plant data gathered at obs_index
  Eigen::MatrixXcd P;
  double delta = 0.0;

  int plant_size() const { return static_cast<int>(lam.size()); }
  int parabolic_index(int n) const { return n - 1; }
  int hyperbolic_index(int m) const { return n_sim + m + m_sim; }
};

// Fills lam_o, a_o, b_o, c_o from obs_index.
void gather_observer(ClosedLoopSystem& sys);

ClosedLoopSystem assemble(const PlantConfig& config, const Measurement& meas, const CertifiedController& ctrl,
                          int n_sim, int m_sim, int jobs = 1);

struct SimState {
  Eigen::VectorXcd w;     // plant
  Eigen::VectorXcd what;  // observer
  double v = 0.0;
  double t = 0.0;
};

SimState initial_state(const ClosedLoopSystem& sys, const ModalState& modal, double v0);
double feedback(const ClosedLoopSystem& sys, const SimState& s);   // v_d
double output(const ClosedLoopSystem& sys, const Eigen::VectorXcd& w);  // y_o
SimState step_closed_loop(const ClosedLoopSystem& sys, const SimState& s, double dt);

enum class NormKind { H0, H1, Lyapunov };
double norm_of(const ClosedLoopSystem& sys, const SimState& s, NormKind kind);

struct SimOptions {
  double t_final = 8.0;
  double dt = 0.0;       // 0: automatic
  int samples = 2000;    // recorded time points (approximate)
  bool keep_states = false;
};

double default_dt(const ClosedLoopSystem& sys, double L);

struct ClosedLoopTrajectory {
  std::vector<double> t, v, vd, yo, h0, h1, lyapunov;
  std::vector<SimState> states;  // recorded states when requested
  SimState final_state;
  double dt = 0.0;
  long steps = 0;
  // max over steps of V(t+dt) / (exp(-2 delta dt) V(t))
  double worst_step_ratio = 0.0;
  double worst_step_time = 0.0;
};

ClosedLoopTrajectory simulate(const ClosedLoopSystem& sys, const SimState& start, const SimOptions& opt, double L);

struct DecayFit {
  double rate = 0.0, r_squared = 0.0, log_prefactor = 0.0;
};
// Least-squares slope of log(channel) on [t0, t1]; rate is minus the slope.
DecayFit decay_rate_fit(const std::vector<double>& t, const std::vector<double>& channel, double t0, double t1);

enum class FieldKind { Y, Z, Zt };
// Sum of modal contributions on the grid; Zt includes the x v / (alpha L) lift.
std::vector<cd> reconstruct_field(const ModalState& state, double v, const std::vector<double>& x, FieldKind which,
                                  const PlantConfig& config);
ModalState modal_state(const ClosedLoopSystem& sys, const SimState& s);

}  // namespace cascade
