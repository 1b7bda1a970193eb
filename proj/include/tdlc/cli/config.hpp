#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>

#include "json.hpp"
#include "tdlc/error.hpp"

namespace tdlc::cli {

/// Run parameters shared by every command. Optional fields left unset fall back to the
/// command's own default.
struct RunConfig {
  std::optional<std::string> model;  ///< "shift" or "linear"
  int p = 2;
  int n = 2;
  std::optional<int> resolution;
  std::optional<int> horizon;
  int max_k = 10;
  std::uint64_t seed = 1;
  int samples = 50;
  std::string out;

  std::string model_or(const std::string& fallback) const { return model.value_or(fallback); }

  void validate() const {
    if (model && *model != "shift" && *model != "linear") throw Error("config: model must be shift or linear");
    if (p != 2 && p != 3 && p != 5 && p != 7) throw Error("config: p must be one of 2, 3, 5, 7");
    if (n < 1 || n > 4) throw Error("config: n must be in [1, 4]");
    if (resolution && (*resolution < 0 || *resolution > 12)) throw Error("config: resolution must be in [0, 12]");
    if (horizon && (*horizon < 0 || *horizon > 200)) throw Error("config: horizon must be in [0, 200]");
    if (max_k < 0 || max_k > 64) throw Error("config: max_k must be in [0, 64]");
    if (samples < 0 || samples > 10000) throw Error("config: samples must be in [0, 10000]");
  }
};

/// Applies the keys of a JSON object on top of cfg; unknown keys are rejected.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  static const std::set<std::string> known{"model", "p",    "n",    "resolution", "horizon",
                                           "max_k", "seed", "samples", "out"};
  if (!j.is_object()) throw Error("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error("config: unknown key '" + key + "'");
    try {
      if (key == "model") cfg.model = value.get<std::string>();
      if (key == "p") cfg.p = value.get<int>();
      if (key == "n") cfg.n = value.get<int>();
      if (key == "resolution") cfg.resolution = value.get<int>();
      if (key == "horizon") cfg.horizon = value.get<int>();
      if (key == "max_k") cfg.max_k = value.get<int>();
      if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      if (key == "samples") cfg.samples = value.get<int>();
      if (key == "out") cfg.out = value.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("config: bad value for '" + key + "': " + e.what());
    }
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path);
  RunConfig cfg;
  try {
    apply_json(cfg, nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return cfg;
}

inline nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  if (cfg.model) j["model"] = *cfg.model;
  j["p"] = cfg.p;
  j["n"] = cfg.n;
  if (cfg.resolution) j["resolution"] = *cfg.resolution;
  if (cfg.horizon) j["horizon"] = *cfg.horizon;
  j["max_k"] = cfg.max_k;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  return j;
}

}  // namespace tdlc::cli
