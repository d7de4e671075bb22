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
#include <string>

#include <nlohmann/json.hpp>

#include "persona/classifier.hpp"
#include "persona/url.hpp"

namespace persona {

// Client for a scoring service:
//   POST {base}/score  {"texts":[...]} -> {"scores":[{"openness":p, ...}]}
//   GET  {base}/health -> {"status":"ok","classifier_id":"..."}
// Emotional stability is derived locally, never read from the wire.
class RemoteClassifier final : public TraitClassifier {
 public:
  // Queries /health to learn the classifier id; throws TransportError if the
  // service is unreachable or not ready.
  RemoteClassifier(std::string base_url, std::chrono::milliseconds timeout,
                   std::size_t batch_size);

  const std::string& classifier_id() const override { return id_; }
  TraitScores score(std::string_view text) const override;
  // Sends chunks of at most batch_size texts; a failed chunk marks only its
  // own elements as failed.
  std::vector<ScoreResult> score_batch(
      std::span<const std::string> texts) const override;

 private:
  std::vector<TraitScores> post_chunk(std::span<const std::string> texts) const;

  ParsedUrl url_;
  std::chrono::milliseconds timeout_;
  std::size_t batch_size_;
  std::string id_;
};

// Decodes one element of a /score response.
TraitScores scores_from_wire(const nlohmann::json& j);
nlohmann::json scores_to_wire(const TraitScores& s);

}  // namespace persona
