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

#include "persona/normalization.hpp"

#include <mutex>

#include <fmt/format.h>

#include "persona/error.hpp"
#include "persona/generation.hpp"

namespace persona {

TraitValues normalize_scores(const TraitScores& sentence,
                             const TraitScores& prompt) {
  TraitValues out{};
  for (Trait t : kAllTraits) {
    out[index_of(t)] = normalize_value(sentence[t], prompt[t]);
  }
  return out;
}

PromptBaseline baseline(const PromptSpec& prompt,
                        const TraitClassifier& classifier) {
  if (!is_scorable(prompt.text)) {
    throw ConfigError(fmt::format("prompt {} has an unscorable stem", prompt.id));
  }
  return {prompt.id, prompt.text, classifier.classifier_id(),
          classifier.score(prompt.text)};
}

const PromptBaseline& BaselineCache::get(const PromptSpec& prompt,
                                         const TraitClassifier& classifier) {
  const auto key = std::make_pair(prompt.id, classifier.classifier_id());
  {
    std::shared_lock lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  return entries_.emplace(key, baseline(prompt, classifier)).first->second;
}

std::size_t BaselineCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::string compose_sentence(std::string_view stem, std::string_view completion,
                             SentenceMode mode) {
  if (mode == SentenceMode::kCompletionOnly) return std::string(completion);
  std::string out(stem);
  if (!completion.empty()) {
    out += ' ';
    out += completion;
  }
  return out;
}

nlohmann::json trait_values_to_json(const TraitValues& v) {
  nlohmann::json j = nlohmann::json::object();
  for (Trait t : kAllTraits) j[std::string(trait_name(t))] = v[index_of(t)];
  return j;
}

TraitValues trait_values_from_json(const nlohmann::json& j) {
  TraitValues v{};
  for (Trait t : kAllTraits) v[index_of(t)] = j.at(std::string(trait_name(t))).get<double>();
  return v;
}

nlohmann::json ScoredRecord::to_json() const {
  // The raw block carries the derived stability too, for readers that do not
  // re-derive it.
  return {{"prompt_id", prompt_id},
          {"model_id", model_id},
          {"completion_index", completion_index},
          {"raw_scores", trait_values_to_json(raw_scores.values())},
          {"normalized", trait_values_to_json(normalized)},
          {"classifier_id", classifier_id}};
}

ScoredRecord ScoredRecord::from_json(const nlohmann::json& j) {
  ScoredRecord r;
  r.prompt_id = j.at("prompt_id").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.completion_index = j.at("completion_index").get<std::size_t>();
  const auto& raw = j.at("raw_scores");
  std::array<double, kHeadCount> heads{};
  for (Trait t : kHeadTraits) heads[index_of(t)] = raw.at(std::string(trait_name(t))).get<double>();
  r.raw_scores = TraitScores(heads);
  r.normalized = trait_values_from_json(j.at("normalized"));
  r.classifier_id = j.at("classifier_id").get<std::string>();
  return r;
}

ScoredRecord make_scored_record(const GenerationRecord& record,
                                const PromptBaseline& baseline,
                                const TraitScores& sentence) {
  ScoredRecord out;
  out.prompt_id = record.prompt_id;
  out.model_id = record.model_id;
  out.completion_index = record.completion_index;
  out.raw_scores = sentence;
  out.normalized = normalize_scores(sentence, baseline.scores);
  out.classifier_id = baseline.classifier_id;
  return out;
}

std::optional<ScoredRecord> normalize(const GenerationRecord& record,
                                      const PromptBaseline& baseline,
                                      const TraitClassifier& classifier,
                                      SentenceMode mode) {
  if (baseline.classifier_id != classifier.classifier_id()) {
    throw PreconditionError(fmt::format(
        "baseline for {} was computed by {}, not {}", baseline.prompt_id,
        baseline.classifier_id, classifier.classifier_id()));
  }
  if (baseline.prompt_id != record.prompt_id) {
    throw PreconditionError(fmt::format("baseline for {} applied to record of {}",
                                        baseline.prompt_id, record.prompt_id));
  }
  if (!is_scorable(record.sanitized_text)) return std::nullopt;
  const auto sentence =
      compose_sentence(baseline.prompt_text, record.sanitized_text, mode);
  return make_scored_record(record, baseline, classifier.score(sentence));
}

}  // namespace persona
