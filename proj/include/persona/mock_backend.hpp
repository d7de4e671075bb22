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

#include <array>
#include <string>

#include "persona/generation.hpp"

namespace persona {

// Deterministic stand-in for a language model. A completion is a pure
// function of (seed, prompt id, completion index, sampling config): it draws
// `words_per_trait` words from every head's lexicon, choosing the high list
// with probability 0.5, shuffles them and strings them into short clauses.
//
// For a trait-activating prompt the target head's high-word probability
// becomes 0.5 + effect; an emotional-stability prompt instead lowers the
// neuroticism head's share to 0.5 - effect. Standard prompts are neutral.
class MockBackend final : public CompletionBackend {
 public:
  explicit MockBackend(MockBackendSpec spec) : spec_(spec) {}

  std::string_view kind() const override { return "mock"; }
  std::string complete(const PromptSpec& prompt, std::size_t index,
                       const SamplingConfig& config) override;

  // Probability of drawing a high word for each head under `category`.
  std::array<double, kHeadCount> high_word_share(
      const PromptCategory& category) const;

 private:
  MockBackendSpec spec_;
};

}  // namespace persona
