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

#include <fstream>

#include <gtest/gtest.h>

#include "persona/error.hpp"
#include "persona/run_config.hpp"
#include "../support/temp_dir.hpp"

namespace persona {
namespace {

std::string config_error(const nlohmann::json& j) {
  try {
    elicit_config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(RunConfig, Defaults) {
  const ElicitConfig c = elicit_config_from_json(nlohmann::json::object());
  EXPECT_TRUE(c.backend.is_mock());
  EXPECT_EQ(c.n, 1000u);
  EXPECT_EQ(c.parallelism, 1u);
  EXPECT_EQ(c.out_dir, "runs");
  EXPECT_EQ(c.sampling, SamplingConfig{});
  EXPECT_EQ(c.seed, 0u);
}

TEST(RunConfig, ShippedConfigsLoad) {
  const auto dir = std::filesystem::path(PERSONA_CONFIG_DIR);
  const ElicitConfig mock = load_elicit_config(dir / "run.json");
  EXPECT_TRUE(mock.backend.is_mock());
  EXPECT_EQ(mock.n, 10u);
  EXPECT_EQ(mock.model.id, "mock-biased");
  EXPECT_FALSE(mock.model.parameter_count);
  const ElicitConfig http = load_elicit_config(dir / "http_completion.json");
  ASSERT_FALSE(http.backend.is_mock());
  const auto& h = std::get<HttpBackendSpec>(http.backend.config);
  EXPECT_EQ(h.auth_env, "PERSONA_API_TOKEN");
  EXPECT_EQ(h.timeout, std::chrono::milliseconds(60000));
  EXPECT_EQ(http.model.parameter_count, 124000000.0);
}

TEST(RunConfig, ErrorsNameTheField) {
  EXPECT_EQ(config_error({{"colour", 1}}), "colour: unknown field");
  EXPECT_EQ(config_error({{"n", 0}}), "n: must be a positive integer");
  EXPECT_EQ(config_error({{"n", "ten"}}), "n: must be a positive integer");
  EXPECT_EQ(config_error({{"parallelism", -2}}), "parallelism: must be a positive integer");
  EXPECT_EQ(config_error({{"seed", -1}}), "seed: must be a non-negative integer");
  EXPECT_EQ(config_error({{"model", {{"parameter_count", 0}}}}),
            "model.parameter_count: must be a positive number");
  EXPECT_EQ(config_error({{"out_dir", 3}}), "out_dir: wrong type");
  EXPECT_EQ(config_error(nlohmann::json::array()), "config must be a JSON object");
  EXPECT_NE(config_error({{"backend", {{"kind", "carrier-pigeon"}}}}), "");
}

TEST(RunConfig, FileErrors) {
  testing::TempDir dir;
  EXPECT_THROW(load_elicit_config(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{ nope";
  EXPECT_THROW(load_elicit_config(dir / "bad.json"), ConfigError);
}

TEST(RunConfig, OverridesAndSeedPropagation) {
  ElicitConfig base;
  ElicitOverrides o;
  o.n = 7;
  o.seed = 42;
  o.parallelism = 3;
  o.out_dir = "elsewhere";
  const ElicitConfig c = resolve_elicit_config(base, o);
  EXPECT_EQ(c.n, 7u);
  EXPECT_EQ(c.parallelism, 3u);
  EXPECT_EQ(c.out_dir, "elsewhere");
  EXPECT_EQ(std::get<MockBackendSpec>(c.backend.config).seed, 42u);
  EXPECT_EQ(c.model.id, "mock");

  ElicitOverrides http;
  http.backend_kind = "http_completion";
  EXPECT_THROW(resolve_elicit_config(base, http), ConfigError);

  ElicitConfig remote;
  HttpBackendSpec h;
  h.endpoint = "http://127.0.0.1:9/v1/completions";
  h.model = "gpt2";
  remote.backend = BackendSpec{h};
  EXPECT_EQ(resolve_elicit_config(remote, {}).model.id, "gpt2");
  ElicitOverrides to_mock;
  to_mock.backend_kind = "mock";
  EXPECT_TRUE(resolve_elicit_config(remote, to_mock).backend.is_mock());

  ElicitConfig bad;
  bad.sampling.temperature = -1;
  EXPECT_THROW(resolve_elicit_config(bad, {}), ConfigError);
}

TEST(RunConfig, JsonRoundTrip) {
  ElicitConfig c;
  c.n = 12;
  c.seed = 9;
  c.model = {"m", "fam", 7e9};
  c.battery_path = "b.json";
  const ElicitConfig back = elicit_config_from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

}  // namespace
}  // namespace persona
