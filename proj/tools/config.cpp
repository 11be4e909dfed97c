#include "config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "sdct/error.hpp"

namespace sdct::cli {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const char* what) {
  if (!j.is_object()) fail(ErrorCode::invalid_input, std::string(what) + " config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) fail(ErrorCode::invalid_input, std::string("unknown ") + what + " key: " + key);
}

template <class T>
void read(const Json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::invalid_input, std::string("bad value for ") + key + ": " + e.what());
  }
}

}  // namespace

Json load_json(const std::filesystem::path& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open config " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::invalid_input, "config " + path.string() + ": " + e.what());
  }
}

void apply_trm(const Json& j, TrmConfig& cfg) {
  reject_unknown(j,
                 {"delta0", "delta_max", "delta_min", "eta_vs", "eta_s", "gamma_i", "gamma_d", "stop_tol",
                  "max_iter", "fixed_radius", "workers"},
                 "trm");
  read(j, "delta0", cfg.delta0);
  read(j, "delta_max", cfg.delta_max);
  read(j, "delta_min", cfg.delta_min);
  read(j, "eta_vs", cfg.eta_vs);
  read(j, "eta_s", cfg.eta_s);
  read(j, "gamma_i", cfg.gamma_i);
  read(j, "gamma_d", cfg.gamma_d);
  read(j, "stop_tol", cfg.stop_tol);
  read(j, "max_iter", cfg.max_iter);
  read(j, "fixed_radius", cfg.fixed_radius);
  read(j, "workers", cfg.workers);
  cfg.validate();
}

void apply_pipeline(const Json& j, PipelineConfig& cfg) {
  reject_unknown(j, {"mu", "precondition", "theta_source", "trm"}, "pipeline");
  read(j, "mu", cfg.mu);
  read(j, "precondition", cfg.precondition);
  if (j.contains("theta_source")) {
    std::string source;
    read(j, "theta_source", source);
    if (source == "known")
      cfg.theta_source = ThetaSource::known;
    else if (source == "pilot")
      cfg.theta_source = ThetaSource::pilot;
    else
      fail(ErrorCode::invalid_input, "theta_source must be \"known\" or \"pilot\"");
  }
  if (j.contains("trm")) apply_trm(j.at("trm"), cfg.trm);
}

Json to_json(const TrmConfig& cfg) {
  return {{"delta0", cfg.delta0},   {"delta_max", cfg.delta_max}, {"delta_min", cfg.delta_min},
          {"eta_vs", cfg.eta_vs},   {"eta_s", cfg.eta_s},         {"gamma_i", cfg.gamma_i},
          {"gamma_d", cfg.gamma_d}, {"stop_tol", cfg.stop_tol},   {"max_iter", cfg.max_iter},
          {"fixed_radius", cfg.fixed_radius}};
}

}  // namespace sdct::cli
