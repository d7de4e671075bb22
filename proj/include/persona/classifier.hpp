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

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/trait.hpp"

namespace persona {

// Outcome of scoring one element of a batch.
struct ScoreResult {
  std::optional<TraitScores> scores;
  std::string error;  // set when scores is empty

  bool ok() const { return scores.has_value(); }
};

// Uniform interface over the five per-trait binary classifiers.
// Implementations are immutable after construction and safe to call from
// several threads.
class TraitClassifier {
 public:
  virtual ~TraitClassifier() = default;

  // Stable identity of the weights (content hash or service version).
  virtual const std::string& classifier_id() const = 0;

  // Throws UnscorableError for empty text and TransportError for remote
  // failures.
  virtual TraitScores score(std::string_view text) const = 0;

  // Element-wise equal to calling score() on each text. Failures are
  // reported per element.
  virtual std::vector<ScoreResult> score_batch(
      std::span<const std::string> texts) const;
};

// Where to find a classifier.
struct ClassifierHandle {
  enum class Kind { kNative, kRemote };

  Kind kind = Kind::kNative;
  std::filesystem::path model_path;  // kNative: JSON model artifact
  std::string service_url;           // kRemote: base URL of the service
  std::chrono::milliseconds timeout{30000};
  std::size_t batch_size = 32;

  static ClassifierHandle native(std::filesystem::path path) {
    ClassifierHandle h;
    h.kind = Kind::kNative;
    h.model_path = std::move(path);
    return h;
  }
  static ClassifierHandle remote(std::string url) {
    ClassifierHandle h;
    h.kind = Kind::kRemote;
    h.service_url = std::move(url);
    return h;
  }
};

std::unique_ptr<TraitClassifier> open_classifier(const ClassifierHandle& handle);

// True when text has at least one non-whitespace character.
bool is_scorable(std::string_view text);

}  // namespace persona
