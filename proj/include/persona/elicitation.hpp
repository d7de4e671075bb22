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

#include <functional>
#include <string_view>

#include "persona/battery.hpp"
#include "persona/generation.hpp"
#include "persona/run_store.hpp"

namespace persona {

struct ElicitOptions {
  std::size_t parallelism = 1;
  Clock clock;  // defaults to system_clock()
  // Called after each prompt's records are durable, with the running total
  // persisted in this call.
  std::function<void(std::size_t)> on_persist;
};

// Fills an existing run with n completions for every battery prompt.
// Only (prompt, index) pairs without a successful record are generated, so a
// rerun resumes an interrupted or partially failed run. Records are appended
// per prompt in index order. The manifest's tallies and status are rewritten
// at the end (and before an AuthError propagates); status is complete only
// when every pair has a successful record.
RunManifest run_battery(CompletionBackend& backend, const Battery& battery,
                        const SamplingConfig& config, std::size_t n,
                        RunStore& store, std::string_view run_id,
                        const ElicitOptions& options = {});

// Recomputes tallies and status from the stored records.
void refresh_tallies(RunManifest& manifest, const Battery& battery,
                     const std::vector<GenerationRecord>& records);

// The battery a run was generated from.
Battery resolve_battery(const RunManifest& manifest);

}  // namespace persona
