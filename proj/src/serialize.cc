#include "cascade/serialize.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cascade/errors.h"

namespace cascade {

namespace {

const char* kind_name(Measurement::Kind k) {
  switch (k) {
    case Measurement::Kind::Dirichlet: return "dirichlet";
    case Measurement::Kind::Neumann: return "neumann";
    default: return "distributed";
  }
}

Measurement::Kind kind_from(const std::string& s) {
  if (s == "distributed") return Measurement::Kind::Distributed;
  if (s == "dirichlet") return Measurement::Kind::Dirichlet;
  if (s == "neumann") return Measurement::Kind::Neumann;
  throw ValidationError("unknown measurement kind '" + s + "'");
}

json row_vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

}  // namespace

json measurement_to_json(const Measurement& m) {
  json j;
  j["kind"] = kind_name(m.kind);
  if (m.kind == Measurement::Kind::Distributed)
    j["c_o"] = profile_to_json(m.c_o);
  else
    j["xi"] = m.xi;
  return j;
}

Measurement measurement_from_json(const json& j, double L) {
  Measurement::Kind k = kind_from(j.value("kind", "distributed"));
  if (k == Measurement::Kind::Distributed)
    return Measurement::distributed(j.contains("c_o") ? profile_from_json(j["c_o"], L) : Profile::constant(L, 1.0));
  double xi = j.at("xi").get<double>();
  if (!(xi > 0 && xi < L)) throw ValidationError("measurement point must lie in (0, L)");
  return k == Measurement::Kind::Dirichlet ? Measurement::dirichlet(L, xi) : Measurement::neumann(L, xi);
}

Measurement parse_measurement(const std::string& spec, double L) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  json j;
  j["kind"] = kind;
  try {
    if (kind == "distributed") {
      if (!arg.empty()) j["c_o"] = json::parse(arg);
    } else {
      j["xi"] = std::stod(arg);
    }
  } catch (const std::exception& e) {
    throw ValidationError("bad measurement spec '" + spec + "'");
  }
  return measurement_from_json(j, L);
}

json to_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json to_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) r.push_back(to_json(M(i, k)));
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  const std::size_t n = j.size(), m = n ? j.at(0).size() : 0;
  Eigen::MatrixXcd M(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) M(i, k) = complex_from_json(j.at(i).at(k));
  return M;
}

json report_to_json(const FeasibilityReport& r) {
  json j;
  j["N"] = r.N;
  j["M"] = r.M;
  j["theta_max_eig"] = r.theta_max_eig;
  j["theta_block_max_eig"] = r.theta_block_max_eig;
  j["Gamma1_Np1"] = r.gamma1;
  j["Gamma2_M"] = r.gamma2;
  j["Gamma2_limit"] = r.gamma2_limit;
  j["eta1"] = r.eta1;
  j["eta2"] = r.eta2;
  j["S_a"] = r.tails.Sa;
  j["S_b"] = r.tails.Sb;
  j["S_c1"] = r.tails.Sc1;
  j["S_c2"] = r.tails.Sc2;
  j["S_a_partial"] = r.tails.Sa_partial;
  j["S_b_partial"] = r.tails.Sb_partial;
  j["S_c1_partial"] = r.tails.Sc1_partial;
  j["S_c2_partial"] = r.tails.Sc2_partial;
  j["P_norm"] = r.P_norm;
  j["P_min_eig"] = r.P_min_eig;
  j["lyapunov_residual"] = r.lyapunov_residual;
  j["feasible"] = r.feasible;
  return j;
}

namespace {

FeasibilityReport report_from_json(const json& j) {
  FeasibilityReport r;
  r.N = j.at("N");
  r.M = j.at("M");
  r.theta_max_eig = j.at("theta_max_eig");
  r.theta_block_max_eig = j.at("theta_block_max_eig");
  r.gamma1 = j.at("Gamma1_Np1");
  r.gamma2 = j.at("Gamma2_M");
  r.gamma2_limit = j.at("Gamma2_limit");
  r.eta1 = j.at("eta1");
  r.eta2 = j.at("eta2");
  r.tails.Sa = j.at("S_a");
  r.tails.Sb = j.at("S_b");
  r.tails.Sc1 = j.at("S_c1");
  r.tails.Sc2 = j.at("S_c2");
  r.tails.Sa_partial = j.value("S_a_partial", 0.0);
  r.tails.Sb_partial = j.value("S_b_partial", 0.0);
  r.tails.Sc1_partial = j.value("S_c1_partial", 0.0);
  r.tails.Sc2_partial = j.value("S_c2_partial", 0.0);
  r.P_norm = j.at("P_norm");
  r.P_min_eig = j.at("P_min_eig");
  r.lyapunov_residual = j.at("lyapunov_residual");
  r.feasible = j.at("feasible");
  return r;
}

}  // namespace

json controller_to_json(const CertifiedController& c, const PlantConfig& cfg, const Measurement& meas) {
  json j;
  PlantConfig plant = cfg;
  plant.alpha = c.alpha;
  j["config"] = json::parse(config_to_json_text(plant));
  j["measurement"] = measurement_to_json(meas);
  j["alpha"] = c.alpha;
  j["rho"] = c.rho;
  j["delta"] = c.delta;
  j["epsilon"] = c.epsilon;
  j["sigma"] = c.sigma;
  j["N0"] = c.N0;
  j["N"] = c.N;
  j["M"] = c.M;
  j["K"] = row_vector(c.K.transpose());
  j["L"] = row_vector(c.L);
  j["k_targets"] = c.k_targets;
  j["l_targets"] = c.l_targets;
  j["certified"] = c.certified;
  j["margins"] = report_to_json(c.margins);
  j["trajectory"] = json::array();
  for (const auto& r : c.trajectory) j["trajectory"].push_back(report_to_json(r));
  j["P"] = to_json(c.P);
  return j;
}

LoadedController controller_from_json(const json& j) {
  try {
    LoadedController out;
    out.config = config_from_json_text(j.at("config").dump());
    out.measurement = measurement_from_json(j.at("measurement"), out.config.L);
    CertifiedController& c = out.controller;
    c.alpha = j.at("alpha");
    c.rho = j.at("rho");
    c.delta = j.at("delta");
    c.epsilon = j.at("epsilon");
    c.sigma = j.at("sigma");
    c.kind = out.measurement.kind;
    c.N0 = j.at("N0");
    c.N = j.at("N");
    c.M = j.at("M");
    c.K = vector_from(j.at("K")).transpose();
    c.L = vector_from(j.at("L"));
    c.k_targets = j.value("k_targets", std::vector<double>{});
    c.l_targets = j.value("l_targets", std::vector<double>{});
    c.certified = j.value("certified", false);
    c.margins = report_from_json(j.at("margins"));
    if (j.contains("trajectory"))
      for (const auto& r : j["trajectory"]) c.trajectory.push_back(report_from_json(r));
    c.P = complex_matrix_from_json(j.at("P"));
    if (c.K.size() != c.N0 + 1 || c.L.size() != c.N0) throw ValidationError("gain sizes do not match N0");
    out.config.alpha = c.alpha;
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("gains file: ") + e.what());
  }
}

LoadedController load_controller(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ValidationError("gains file '" + path + "' is not JSON: " + e.what());
  }
  return controller_from_json(j);
}

std::string certificate_text(const CertifiedController& c) {
  std::ostringstream os;
  const auto& m = c.margins;
  os << (c.certified ? "CERTIFIED" : "NOT CERTIFIED") << " at N = " << m.N << ", M = " << m.M << "\n";
  os << "alpha = " << fmt(c.alpha) << "  rho = " << fmt(c.rho) << "  delta = " << fmt(c.delta)
     << "  epsilon = " << fmt(c.epsilon) << "  N0 = " << c.N0 << "  sigma = " << c.sigma << "\n";
  os << "K =";
  for (Eigen::Index i = 0; i < c.K.size(); ++i) os << " " << fmt(c.K(i));
  os << "\nL =";
  for (Eigen::Index i = 0; i < c.L.size(); ++i) os << " " << fmt(c.L(i));
  os << "\nstate-feedback targets:";
  for (double t : c.k_targets) os << " " << fmt(t);
  os << "\nobserver targets:";
  for (double t : c.l_targets) os << " " << fmt(t);
  os << "\n";
  os << "theta max eig      " << fmt(m.theta_max_eig) << "   (block form " << fmt(m.theta_block_max_eig) << ")\n";
  os << "Gamma1(N+1)        " << fmt(m.gamma1) << "\n";
  os << "Gamma2(M)          " << fmt(m.gamma2) << "   (limit " << fmt(m.gamma2_limit) << ")\n";
  os << "eta1, eta2         " << fmt(m.eta1) << " " << fmt(m.eta2) << "\n";
  os << "S_a S_b S_c1 S_c2  " << fmt(m.tails.Sa) << " " << fmt(m.tails.Sb) << " " << fmt(m.tails.Sc1) << " "
     << fmt(m.tails.Sc2) << "\n";
  os << "|P|, min eig P     " << fmt(m.P_norm) << " " << fmt(m.P_min_eig) << "\n";
  os << "Lyapunov residual  " << fmt(m.lyapunov_residual) << "\n";
  os << "trajectory:\n";
  for (const auto& r : c.trajectory)
    os << "  N=" << r.N << " M=" << r.M << " theta=" << fmt(r.theta_max_eig) << " G1=" << fmt(r.gamma1)
       << " G2=" << fmt(r.gamma2) << " |P|=" << fmt(r.P_norm) << (r.feasible ? " ok" : " --") << "\n";
  return os.str();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt(r[i]);
    os << "\n";
  }
  write_text(path, os.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["parameters"] = m.parameters;
  j["outputs"] = m.outputs;
  j["tool_version"] = m.version;
  j["wall_time_s"] = m.wall_time;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace cascade
