#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cascade/coupling.h"
#include "cascade/synthesis.h"

namespace cascade {

using json = nlohmann::json;

json profile_to_json(const Profile& p);
Profile profile_from_json(const json& j, double L);

json measurement_to_json(const Measurement& m);
Measurement measurement_from_json(const json& j, double L);
// "distributed", "distributed:<profile json>", "dirichlet:<xi>", "neumann:<xi>"
Measurement parse_measurement(const std::string& spec, double L);

// Complex numbers travel as [re, im].
json to_json(cd z);
cd complex_from_json(const json& j);
json to_json(const Eigen::MatrixXcd& M);
Eigen::MatrixXcd complex_matrix_from_json(const json& j);

json report_to_json(const FeasibilityReport& r);
json controller_to_json(const CertifiedController& c, const PlantConfig& config, const Measurement& meas);
struct LoadedController {
  CertifiedController controller;
  PlantConfig config;
  Measurement measurement;
};
LoadedController controller_from_json(const json& j);
LoadedController load_controller(const std::string& path);

std::string certificate_text(const CertifiedController& c);

std::string fmt(double x);  // %.12e
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct RunManifest {
  std::string command;
  std::string config_hash;
  json parameters = json::object();
  std::vector<std::string> outputs;
  std::string version;
  double wall_time = 0.0;
};
std::string content_hash(const std::string& text);  // FNV-1a, hex
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace cascade
