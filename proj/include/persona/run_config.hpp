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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "persona/generation.hpp"
#include "persona/run_store.hpp"

namespace persona {

// Settings of one elicitation run. Defaults reproduce the reference setup:
// the built-in battery, 1000 completions per prompt and the sampling
// defaults of SamplingConfig.
struct ElicitConfig {
  BackendSpec backend{MockBackendSpec{}};
  SamplingConfig sampling;
  std::size_t n = 1000;
  std::size_t parallelism = 1;
  std::string battery_path;  // empty: built-in battery
  std::filesystem::path out_dir = "runs";
  ModelInfo model;           // id defaults from the backend
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

// Values given on the command line; they win over the config file.
struct ElicitOverrides {
  std::optional<std::string> backend_kind;  // only "mock" is accepted
  std::optional<std::size_t> n;
  std::optional<std::size_t> parallelism;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> battery_path;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::string> model_id;
};

// Parses a config document. Unknown keys are rejected; errors name the
// field. Throws ConfigError.
ElicitConfig elicit_config_from_json(const nlohmann::json& j);
ElicitConfig load_elicit_config(const std::filesystem::path& path);

// Applies overrides, fills derived defaults and validates. The run seed also
// seeds the mock backend, so one seed determines a run.
ElicitConfig resolve_elicit_config(ElicitConfig config, const ElicitOverrides& overrides);

}  // namespace persona
