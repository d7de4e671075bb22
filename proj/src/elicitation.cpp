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

#include "persona/elicitation.hpp"

#include <set>

#include <fmt/format.h>

#include "persona/error.hpp"

namespace persona {

void refresh_tallies(RunManifest& manifest, const Battery& battery,
                     const std::vector<GenerationRecord>& records) {
  manifest.per_prompt.clear();
  for (const PromptSpec& p : battery.prompts) manifest.per_prompt[p.id] = {};
  manifest.tallies.generated = 0;
  manifest.tallies.failed = 0;
  for (const GenerationRecord& r : records) {
    PromptTally& t = manifest.per_prompt[r.prompt_id];
    if (r.ok()) {
      ++t.generated;
      ++manifest.tallies.generated;
    } else {
      ++t.failed;
      ++manifest.tallies.failed;
    }
  }
  manifest.status = manifest.tallies.generated == manifest.expected_records()
                        ? RunStatus::kComplete
                        : RunStatus::kIncomplete;
}

RunManifest run_battery(CompletionBackend& backend, const Battery& battery,
                        const SamplingConfig& config, std::size_t n,
                        RunStore& store, std::string_view run_id,
                        const ElicitOptions& options) {
  validate_battery(battery);
  config.validate();
  if (n < 1) throw ConfigError("n must be at least 1");
  RunManifest manifest = store.load_manifest(run_id);
  if (manifest.status == RunStatus::kComplete) return manifest;
  if (manifest.battery_version != battery.version || manifest.n != n) {
    throw ConfigError(fmt::format(
        "run {} was created for battery {} with n={}, not {} with n={}", run_id,
        manifest.battery_version, manifest.n, battery.version, n));
  }

  std::set<std::pair<std::string, std::size_t>> done;
  for (const GenerationRecord& r : store.read_run(run_id)) {
    if (r.ok()) done.emplace(r.prompt_id, r.completion_index);
  }

  GenerateOptions gen;
  gen.model_id = manifest.model.id;
  gen.parallelism = options.parallelism;
  gen.clock = options.clock ? options.clock : system_clock();

  std::size_t persisted = 0;
  auto finish = [&] {
    refresh_tallies(manifest, battery, store.read_run(run_id));
    store.save_manifest(manifest);
  };

  try {
    for (const PromptSpec& prompt : battery.prompts) {
      std::vector<std::size_t> missing;
      for (std::size_t i = 0; i < n; ++i) {
        if (!done.count({prompt.id, i})) missing.push_back(i);
      }
      if (missing.empty()) continue;
      const auto records = generate_indices(backend, prompt, config, missing, gen);
      store.append(run_id, records);
      persisted += records.size();
      if (options.on_persist) options.on_persist(persisted);
    }
  } catch (const AuthError&) {
    finish();
    throw;
  }
  finish();
  return manifest;
}

Battery resolve_battery(const RunManifest& manifest) {
  if (!manifest.battery_path.empty()) {
    Battery b = load_battery(manifest.battery_path);
    if (b.version != manifest.battery_version) {
      throw ConfigError(fmt::format("battery {} is version {}, run expects {}",
                                    manifest.battery_path, b.version,
                                    manifest.battery_version));
    }
    return b;
  }
  for (const Battery* b : {&default_battery(), &normalized_battery()}) {
    if (b->version == manifest.battery_version) return *b;
  }
  throw ConfigError(fmt::format("run uses unknown built-in battery {}",
                                manifest.battery_version));
}

}  // namespace persona
