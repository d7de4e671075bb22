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

#include "persona/mock_backend.hpp"

#include <chrono>
#include <thread>

#include <fmt/format.h>

#include "persona/hash.hpp"
#include "persona/lexicon.hpp"
#include "persona/random.hpp"

namespace persona {

namespace {

constexpr std::array<std::string_view, 6> kOpeners = {
    "mostly", "people say i am", "i feel", "usually", "often", "i seem"};

std::uint64_t stream_seed(std::uint64_t seed, const PromptSpec& prompt,
                          std::size_t index, const SamplingConfig& config) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ fnv1a64(prompt.id));
  h = mix64(h ^ static_cast<std::uint64_t>(index));
  h = mix64(h ^ fnv1a64(config.to_json().dump()));
  return h;
}

}  // namespace

std::array<double, kHeadCount> MockBackend::high_word_share(
    const PromptCategory& category) const {
  std::array<double, kHeadCount> share{};
  share.fill(0.5);
  if (category.set == QuestionSet::kTraitActivating) {
    if (category.target == Trait::kEmotionalStability) {
      share[index_of(Trait::kNeuroticism)] -= spec_.effect;
    } else {
      share[index_of(category.target)] += spec_.effect;
    }
  }
  return share;
}

std::string MockBackend::complete(const PromptSpec& prompt, std::size_t index,
                                  const SamplingConfig& config) {
  if (spec_.latency_ms > 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(spec_.latency_ms));
  }
  Rng rng(stream_seed(spec_.seed, prompt, index, config));
  const auto share = high_word_share(prompt.category);

  std::vector<std::string_view> words;
  for (Trait t : kHeadTraits) {
    const TraitLexicon& lex = lexicon_for(t);
    for (int k = 0; k < spec_.words_per_trait; ++k) {
      const auto& pool = rng.bernoulli(share[index_of(t)]) ? lex.high : lex.low;
      words.push_back(pool[rng.index(pool.size())]);
    }
  }
  rng.shuffle(words);

  // Clauses of up to three lexicon words: "<opener> w1, w2 and w3."
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < words.size(); i += 3) {
    const std::string_view opener = kOpeners[rng.index(kOpeners.size())];
    std::size_t start = 0;
    while (start < opener.size()) {
      const auto space = opener.find(' ', start);
      const auto end = space == std::string_view::npos ? opener.size() : space;
      tokens.emplace_back(opener.substr(start, end - start));
      start = end + 1;
    }
    const std::size_t last = std::min(words.size(), i + 3) - 1;
    for (std::size_t k = i; k <= last; ++k) {
      std::string w(words[k]);
      if (k == last) {
        w += '.';
      } else if (k + 1 < last) {
        w += ',';
      }
      if (k == last && k > i) tokens.emplace_back("and");
      tokens.push_back(std::move(w));
    }
  }

  if (spec_.profile == MockProfile::kNoisy) {
    if (rng.bernoulli(0.25)) tokens.emplace_back("\xE2\x80\x94caf\xC3\xA9");
    if (rng.bernoulli(0.15)) tokens.emplace_back("qwertyuiopasdfghjklzxcvbnm");
    if (rng.bernoulli(0.25)) {
      for (int r = 0; r < 4; ++r) {
        tokens.emplace_back("and");
        tokens.emplace_back("so");
        tokens.emplace_back("on");
      }
    }
  }

  const std::size_t limit = static_cast<std::size_t>(config.max_tokens);
  if (tokens.size() > limit) tokens.resize(limit);
  std::string out;
  for (const std::string& tok : tokens) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

}  // namespace persona
