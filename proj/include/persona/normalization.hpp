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

#include <cstddef>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "persona/battery.hpp"
#include "persona/classifier.hpp"
#include "persona/trait.hpp"

namespace persona {

// Baseline-adjusted score for one trait:
//   score(sentence) - score(prompt) + 0.5
// Values are not clamped; they may fall outside [0, 1].
inline double normalize_value(double sentence, double prompt) {
  return sentence - prompt + 0.5;
}

// Applies normalize_value to all six traits. Emotional stability uses the
// already-derived stability values of sentence and prompt.
TraitValues normalize_scores(const TraitScores& sentence,
                             const TraitScores& prompt);

struct PromptBaseline {
  std::string prompt_id;
  std::string prompt_text;
  std::string classifier_id;
  TraitScores scores;
};

// Scores of bare prompt stems, computed once per (prompt, classifier).
// Concurrent readers share a lock; population takes it exclusively.
class BaselineCache {
 public:
  // Throws ConfigError if the stem is unscorable.
  const PromptBaseline& get(const PromptSpec& prompt,
                            const TraitClassifier& classifier);

  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, PromptBaseline> entries_;
};

PromptBaseline baseline(const PromptSpec& prompt,
                        const TraitClassifier& classifier);

// Which text stands for the "sentence".
enum class SentenceMode {
  kStemPlusCompletion,  // default: the stem followed by the completion
  kCompletionOnly,
};

std::string compose_sentence(std::string_view stem, std::string_view completion,
                             SentenceMode mode);

// One scored completion; the scores.jsonl line.
struct ScoredRecord {
  std::string prompt_id;
  std::string model_id;
  std::size_t completion_index = 0;
  TraitScores raw_scores;
  TraitValues normalized{};
  std::string classifier_id;

  nlohmann::json to_json() const;
  static ScoredRecord from_json(const nlohmann::json& j);
  friend bool operator==(const ScoredRecord&, const ScoredRecord&) = default;
};

struct GenerationRecord;

// Scores one generation against its prompt baseline. Returns nullopt (a skip)
// when the sanitized text is empty. Throws PreconditionError when the
// baseline came from a different classifier.
std::optional<ScoredRecord> normalize(const GenerationRecord& record,
                                      const PromptBaseline& baseline,
                                      const TraitClassifier& classifier,
                                      SentenceMode mode = SentenceMode::kStemPlusCompletion);

// The same, given already-computed sentence scores.
ScoredRecord make_scored_record(const GenerationRecord& record,
                                const PromptBaseline& baseline,
                                const TraitScores& sentence);

nlohmann::json trait_values_to_json(const TraitValues& v);
TraitValues trait_values_from_json(const nlohmann::json& j);

}  // namespace persona
