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
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "persona/classifier.hpp"
#include "persona/trait.hpp"

namespace persona {

enum class FeatureNorm { kL2, kNone };

// Recorded in every model artifact so scoring needs nothing else.
struct TokenizerSpec {
  bool lowercase = true;
  std::size_t min_length = 2;  // shorter tokens are dropped
  FeatureNorm norm = FeatureNorm::kL2;

  friend bool operator==(const TokenizerSpec&, const TokenizerSpec&) = default;
};

// Lowercases (if enabled), splits on every non-alphanumeric byte and drops
// short tokens. No stemming.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerSpec& spec);

// One logistic-regression head over TF-IDF features.
struct TraitHead {
  std::vector<std::string> vocab;  // index -> token
  std::vector<double> idf;
  std::vector<double> coef;
  double intercept = 0.0;

  friend bool operator==(const TraitHead&, const TraitHead&) = default;
};

// Term counts times idf, optionally L2-normalized. Tokens outside the
// vocabulary contribute nothing.
std::vector<double> tfidf_features(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::size_t>& index,
    const std::vector<double>& idf, FeatureNorm norm);

double logistic(double x);

// TF-IDF + per-trait logistic regression. The JSON artifact round-trips bit
// for bit and its SHA-256 is the classifier id.
class NativeModel final : public TraitClassifier {
 public:
  NativeModel(TokenizerSpec tokenizer, std::array<TraitHead, kHeadCount> heads);

  static NativeModel load(const std::filesystem::path& path);
  static NativeModel from_json(const nlohmann::json& j);

  nlohmann::json to_json() const;
  // Canonical serialization; the classifier id hashes exactly these bytes.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  const std::string& classifier_id() const override { return id_; }
  TraitScores score(std::string_view text) const override;
  std::vector<ScoreResult> score_batch(
      std::span<const std::string> texts) const override;

  const TokenizerSpec& tokenizer() const { return tokenizer_; }
  const TraitHead& head(Trait t) const { return heads_.at(index_of(t)); }

 private:
  TraitScores score_tokens(const std::vector<std::string>& tokens) const;

  TokenizerSpec tokenizer_;
  std::array<TraitHead, kHeadCount> heads_;
  std::array<std::unordered_map<std::string, std::size_t>, kHeadCount> index_;
  std::string id_;
};

// Model whose heads are all zero: every text scores 0.5 on every head.
NativeModel zero_model();

// Known-answer companion to the trait-biased mock generator. Each head puts
// weight +gain on its high lexicon and -gain on its low lexicon, with raw
// counts and no normalization. The gain is solved so that a completion with
// `words_per_trait` lexicon words, each drawn high with probability
// 0.5 + shift, has expected head probability exactly 0.5 + shift.
NativeModel calibrated_lexicon_model(int words_per_trait, double shift);

// Expected head probability under the lexicon model for the mock's
// binomial word draw; exposed for tests.
double lexicon_expected_probability(int words_per_trait, double p_high,
                                    double gain);

}  // namespace persona
