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

#include "persona/scoring.hpp"

#include <set>

#include <fmt/format.h>

#include "persona/elicitation.hpp"
#include "persona/error.hpp"

namespace persona {

ScoringState score_run(RunStore& store, std::string_view run_id,
                       const TraitClassifier& classifier,
                       const ScoreOptions& options) {
  if (options.batch_size < 1) throw ConfigError("batch size must be positive");
  RunManifest manifest = store.load_manifest(run_id);
  const std::string& id = classifier.classifier_id();

  if (manifest.scoring) {
    if (manifest.scoring->classifier_id != id || manifest.scoring->mode != options.mode) {
      if (!options.force) {
        throw ConfigError(fmt::format(
            "run {} is already scored by {}; pass --force to rescore with {}",
            run_id, manifest.scoring->classifier_id, id));
      }
      store.reset_scores(run_id);
      manifest = store.load_manifest(run_id);
    } else if (manifest.scoring->status == RunStatus::kComplete) {
      return *manifest.scoring;
    }
  }

  ScoringState state;
  state.classifier_id = id;
  state.mode = options.mode;
  manifest.scoring = state;
  manifest.classifier_id = id;
  store.save_manifest(manifest);

  const Battery battery = resolve_battery(manifest);
  const auto generations = store.read_run(run_id);
  std::set<std::pair<std::string, std::size_t>> scored;
  for (const ScoredRecord& r : store.read_scores(run_id)) {
    scored.emplace(r.prompt_id, r.completion_index);
  }

  BaselineCache baselines;
  std::size_t eligible = 0;
  std::vector<const GenerationRecord*> pending;
  for (const GenerationRecord& g : generations) {
    if (!g.ok()) continue;
    ++eligible;
    if (!is_scorable(g.sanitized_text)) {
      ++state.skipped_empty;
      continue;
    }
    if (!scored.count({g.prompt_id, g.completion_index})) pending.push_back(&g);
  }

  std::string last_error;
  for (std::size_t start = 0; start < pending.size(); start += options.batch_size) {
    const std::size_t end = std::min(pending.size(), start + options.batch_size);
    std::vector<std::string> texts;
    std::vector<const PromptBaseline*> bases;
    for (std::size_t k = start; k < end; ++k) {
      const GenerationRecord& g = *pending[k];
      const PromptSpec* prompt = battery.find(g.prompt_id);
      if (prompt == nullptr) {
        throw StoreError(fmt::format("record references unknown prompt {}", g.prompt_id));
      }
      const PromptBaseline& base = baselines.get(*prompt, classifier);
      bases.push_back(&base);
      texts.push_back(compose_sentence(base.prompt_text, g.sanitized_text, options.mode));
    }
    const auto results = classifier.score_batch(texts);
    std::vector<ScoredRecord> out;
    for (std::size_t k = 0; k < results.size(); ++k) {
      if (results[k].ok()) {
        out.push_back(make_scored_record(*pending[start + k], *bases[k], *results[k].scores));
      } else {
        ++state.failed;
        last_error = results[k].error;
      }
    }
    store.append(run_id, out);
  }

  state.scored = store.read_scores(run_id).size();
  state.status = state.scored + state.skipped_empty == eligible ? RunStatus::kComplete
                                                                : RunStatus::kIncomplete;
  manifest = store.load_manifest(run_id);
  manifest.scoring = state;
  manifest.tallies.skipped_empty = state.skipped_empty;
  store.save_manifest(manifest);
  if (state.failed > 0) {
    throw TransportError(fmt::format("{} completions could not be scored: {}",
                                     state.failed, last_error));
  }
  return state;
}

}  // namespace persona
