#include "cascade/model.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cascade/errors.h"
#include "cascade/serialize.h"

namespace cascade {

double rho(double alpha, double L) {
  if (!(alpha > 1)) throw ValidationError("alpha must exceed 1");
  if (!(L > 0)) throw ValidationError("L must be positive");
  return std::log((alpha - 1) / (alpha + 1)) / (2 * L);
}

double alpha_for_rho(double r, double L) {
  if (!(r < 0)) throw ValidationError("target real part must be negative");
  double e = std::exp(2 * L * r);
  return (1 + e) / (1 - e);
}

ValidationReport validate(const PlantConfig& cfg, double eps_alpha) {
  ValidationReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };
  if (!(cfg.L > 0)) fail("L must be positive");
  if (std::abs(cfg.beta.length() - cfg.L) > 1e-12 * std::max(1.0, cfg.L))
    fail("beta profile length differs from L");
  if (!std::isfinite(cfg.c)) fail("c must be finite");
  if (!rep.ok) return rep;
  if (cfg.alpha) {
    double a = *cfg.alpha;
    if (!(a > 1)) {
      fail("alpha must exceed 1");
      return rep;
    }
    double r = rho(a, cfg.L);
    double w = M_PI / cfg.L;
    // modes with |c - n^2 pi^2/L^2| <= |rho| + 1
    double lo = std::max(0.0, cfg.c - std::abs(r) - 1), hi = cfg.c + std::abs(r) + 1;
    int n_lo = std::max(1, static_cast<int>(std::floor(std::sqrt(lo) / w)));
    int n_hi = static_cast<int>(std::ceil(std::sqrt(std::max(hi, 0.0)) / w)) + 1;
    for (int n = n_lo; n <= n_hi; ++n) {
      double ev = n * n * w * w;
      if (std::abs(cfg.c - ev) > std::abs(r) + 1) continue;
      if (std::abs(cfg.c - r - ev) < eps_alpha) {
        fail("non-resonance condition c != rho + n^2 pi^2/L^2 violated at n=" + std::to_string(n));
        rep.offending_n = n;
        break;
      }
    }
  }
  return rep;
}

void require_valid(const PlantConfig& cfg, double eps_alpha) {
  auto rep = validate(cfg, eps_alpha);
  if (!rep.ok) throw ValidationError(rep.violations.front());
}

Profile profile_from_json(const json& j, double L) {
  if (j.is_number()) return Profile::constant(L, j.get<double>());
  std::string kind = j.value("kind", "piecewise");
  if (kind == "piecewise") {
    std::vector<Profile::Piece> pieces;
    for (const auto& p : j.at("pieces")) {
      if (p.is_array())
        pieces.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      else
        pieces.push_back({p.at("x_lo").get<double>(), p.at("x_hi").get<double>(), p.at("value").get<double>()});
    }
    return Profile::piecewise(L, std::move(pieces));
  }
  if (kind == "sampled") return Profile::sampled(L, j.at("values").get<std::vector<double>>());
  throw ValidationError("unknown profile kind '" + kind + "'");
}

json profile_to_json(const Profile& p) {
  json j;
  if (p.kind() == Profile::Kind::Piecewise) {
    j["kind"] = "piecewise";
    j["pieces"] = json::array();
    for (const auto& q : p.pieces()) j["pieces"].push_back({q.x_lo, q.x_hi, q.value});
  } else {
    j["kind"] = "sampled";
    j["values"] = p.samples();
  }
  return j;
}

PlantConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  try {
    PlantConfig cfg;
    cfg.L = j.value("L", 1.0);
    cfg.c = j.value("c", 0.0);
    if (j.contains("alpha") && !j["alpha"].is_null()) cfg.alpha = j["alpha"].get<double>();
    cfg.beta = j.contains("beta") ? profile_from_json(j["beta"], cfg.L) : Profile::constant(cfg.L, 1.0);
    return cfg;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field error: ") + e.what());
  }
}

PlantConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const PlantConfig& cfg) {
  json j;
  j["L"] = cfg.L;
  j["c"] = cfg.c;
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  j["beta"] = profile_to_json(cfg.beta);
  return j.dump(2);
}

}  // namespace cascade
