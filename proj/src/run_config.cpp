// Copyright 2026 The Persona Probe Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "persona/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "persona/error.hpp"

namespace persona {
namespace {

template <typename T>
T field(const nlohmann::json& j, const char* key, T fallback, const char* path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(fmt::format("{}: wrong type", path));
  }
}

std::size_t count_field(const nlohmann::json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(fmt::format("{}: must be a positive integer", key));
  }
  return v.get<std::size_t>();
}

}  // namespace

nlohmann::json ElicitConfig::to_json() const {
  nlohmann::json model_j{{"id", model.id}, {"family", model.family}};
  model_j["parameter_count"] =
      model.parameter_count ? nlohmann::json(*model.parameter_count) : nlohmann::json(nullptr);
  return {{"backend", backend.to_json()},
          {"sampling", sampling.to_json()},
          {"n", n},
          {"parallelism", parallelism},
          {"battery_path", battery_path},
          {"out_dir", out_dir.string()},
          {"model", model_j},
          {"seed", seed}};
}

ElicitConfig elicit_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"backend", "sampling",     "n",
                                              "parallelism", "battery_path", "out_dir",
                                              "model", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError(fmt::format("{}: unknown field", key));
  }
  ElicitConfig c;
  if (j.contains("backend")) c.backend = BackendSpec::from_json(j.at("backend"));
  if (j.contains("sampling")) {
    if (!j.at("sampling").is_object()) throw ConfigError("sampling: must be an object");
    try {
      c.sampling = SamplingConfig::from_json(j.at("sampling"));
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("sampling: wrong field type");
    }
  }
  c.n = count_field(j, "n", c.n);
  c.parallelism = count_field(j, "parallelism", c.parallelism);
  c.battery_path = field<std::string>(j, "battery_path", "", "battery_path");
  c.out_dir = field<std::string>(j, "out_dir", c.out_dir.string(), "out_dir");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw ConfigError("seed: must be a non-negative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    if (!m.is_object()) throw ConfigError("model: must be an object");
    c.model.id = field<std::string>(m, "id", "", "model.id");
    c.model.family = field<std::string>(m, "family", "", "model.family");
    if (m.contains("parameter_count") && !m.at("parameter_count").is_null()) {
      if (!m.at("parameter_count").is_number() || m.at("parameter_count").get<double>() <= 0) {
        throw ConfigError("model.parameter_count: must be a positive number");
      }
      c.model.parameter_count = m.at("parameter_count").get<double>();
    }
  }
  return c;
}

ElicitConfig load_elicit_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return elicit_config_from_json(j);
}

ElicitConfig resolve_elicit_config(ElicitConfig config, const ElicitOverrides& overrides) {
  if (overrides.backend_kind) {
    if (*overrides.backend_kind != "mock") {
      throw ConfigError(fmt::format(
          "--backend: \"{}\" is not supported on the command line; describe HTTP "
          "backends in the config file",
          *overrides.backend_kind));
    }
    if (!config.backend.is_mock()) config.backend = BackendSpec{MockBackendSpec{}};
  }
  if (overrides.n) config.n = *overrides.n;
  if (overrides.parallelism) config.parallelism = *overrides.parallelism;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.battery_path) config.battery_path = *overrides.battery_path;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.model_id) config.model.id = *overrides.model_id;

  if (config.n < 1) throw ConfigError("n: must be a positive integer");
  if (config.parallelism < 1) throw ConfigError("parallelism: must be a positive integer");
  config.sampling.validate();
  if (auto* mock = std::get_if<MockBackendSpec>(&config.backend.config)) {
    mock->seed = config.seed;
    if (config.model.id.empty()) config.model.id = "mock";
  } else if (config.model.id.empty()) {
    config.model.id = std::get<HttpBackendSpec>(config.backend.config).model;
  }
  if (config.model.id.empty()) throw ConfigError("model.id: must not be empty");
  return config;
}

}  // namespace persona
