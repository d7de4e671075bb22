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

#include <string_view>

#include "persona/battery.hpp"
#include "persona/classifier.hpp"
#include "persona/normalization.hpp"
#include "persona/run_store.hpp"

namespace persona {

struct ScoreOptions {
  SentenceMode mode = SentenceMode::kStemPlusCompletion;
  std::size_t batch_size = 64;
  // Discard scores from a different classifier instead of refusing.
  bool force = false;
};

// Scores every successful generation of a run that is not scored yet and
// appends the results to scores.jsonl. Empty sanitized texts are skipped and
// tallied, never scored. Failed generations are ignored.
//
// Rescoring with the same classifier resumes (or is a no-op when complete).
// A different classifier is refused unless `force` is set. If any element
// fails to score, the manifest is saved with scoring incomplete and a
// TransportError is thrown; scores already appended are kept.
ScoringState score_run(RunStore& store, std::string_view run_id,
                       const TraitClassifier& classifier,
                       const ScoreOptions& options = {});

}  // namespace persona
