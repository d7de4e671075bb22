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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "persona/battery.hpp"
#include "persona/error.hpp"
#include "persona/lexicon.hpp"
#include "persona/native_model.hpp"
#include "persona/training.hpp"
#include "../support/temp_dir.hpp"

namespace persona {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(Tokenize, SplitsLowercasesAndDropsShortTokens) {
  EXPECT_EQ(tokenize("Hello, WORLD a1 b x-ray", TokenizerSpec{}),
            (std::vector<std::string>{"hello", "world", "a1", "ray"}));
  TokenizerSpec keep_case;
  keep_case.lowercase = false;
  keep_case.min_length = 1;
  EXPECT_EQ(tokenize("Hi b", keep_case), (std::vector<std::string>{"Hi", "b"}));
}

TEST(Tfidf, HandComputedFeatures) {
  const std::unordered_map<std::string, std::size_t> index = {{"calm", 0}, {"kind", 1}};
  const std::vector<double> idf = {2.0, 1.0};
  const std::vector<std::string> tokens = {"calm", "kind", "calm", "other"};
  const auto raw = tfidf_features(tokens, index, idf, FeatureNorm::kNone);
  EXPECT_EQ(raw, (std::vector<double>{4.0, 1.0}));
  const auto l2 = tfidf_features(tokens, index, idf, FeatureNorm::kL2);
  EXPECT_DOUBLE_EQ(l2[0], 4.0 / std::sqrt(17.0));
  EXPECT_DOUBLE_EQ(l2[1], 1.0 / std::sqrt(17.0));
  const auto none = tfidf_features({"zzz"}, index, idf, FeatureNorm::kL2);
  EXPECT_EQ(none, (std::vector<double>{0.0, 0.0}));
}

TEST(Logistic, StableAtExtremes) {
  EXPECT_EQ(logistic(0.0), 0.5);
  EXPECT_EQ(logistic(-1000.0), 0.0);
  EXPECT_EQ(logistic(1000.0), 1.0);
  EXPECT_NEAR(logistic(1.3), sigmoid(1.3), 1e-15);
  EXPECT_NEAR(logistic(-2.7), sigmoid(-2.7), 1e-15);
}

TEST(NativeModel, ZeroModelScoresHalf) {
  const NativeModel m = zero_model();
  const TraitScores s = m.score("My strengths are");
  for (Trait t : kAllTraits) EXPECT_EQ(s[t], 0.5);
}

TEST(NativeModel, EmptyTextUnscorable) {
  EXPECT_THROW(zero_model().score(""), UnscorableError);
  EXPECT_THROW(zero_model().score(" \n\t"), UnscorableError);
}

TEST(NativeModel, BatchEqualsLoop) {
  const NativeModel m = train(synthetic_corpus(3, 200), TrainOptions{}).model;
  const std::vector<std::string> texts = {"I am organized and calm", "",
                                          "chaotic nervous loud", "x"};
  const auto batch = m.score_batch(texts);
  ASSERT_EQ(batch.size(), texts.size());
  EXPECT_FALSE(batch[1].ok());
  for (std::size_t i : {0u, 2u, 3u}) {
    ASSERT_TRUE(batch[i].ok());
    EXPECT_EQ(*batch[i].scores, m.score(texts[i]));
  }
}

TEST(NativeModel, TrainedModelPrefersMarkedWords) {
  const NativeModel m = train(synthetic_corpus(3, 200), TrainOptions{}).model;
  EXPECT_GT(m.score("organized").conscientiousness(), m.score("chaotic").conscientiousness());
  EXPECT_GT(m.score("calm").emotional_stability(), m.score("nervous").emotional_stability());
}

TEST(NativeModel, JsonRoundTripIsExact) {
  const NativeModel m = train(synthetic_corpus(5, 200), TrainOptions{}).model;
  const NativeModel back = NativeModel::from_json(nlohmann::json::parse(m.serialize()));
  EXPECT_EQ(back.serialize(), m.serialize());
  EXPECT_EQ(back.classifier_id(), m.classifier_id());
  for (Trait t : kHeadTraits) EXPECT_EQ(back.head(t), m.head(t));
}

TEST(NativeModel, SaveLoadKeepsId) {
  testing::TempDir dir;
  const NativeModel m = calibrated_lexicon_model(6, 0.2);
  m.save(dir / "model.json");
  const NativeModel back = NativeModel::load(dir / "model.json");
  EXPECT_EQ(back.classifier_id(), m.classifier_id());
  EXPECT_EQ(back.score("calm patient"), m.score("calm patient"));
}

TEST(NativeModel, IdIsContentHash) {
  const NativeModel a = calibrated_lexicon_model(6, 0.2);
  const NativeModel b = calibrated_lexicon_model(6, 0.2);
  EXPECT_EQ(a.classifier_id(), b.classifier_id());
  EXPECT_EQ(a.classifier_id().rfind("sha256:", 0), 0u);
  EXPECT_EQ(a.classifier_id().size(), 7u + 64u);
  auto j = a.to_json();
  j["per_trait"]["openness"]["intercept"] = 0.125;
  EXPECT_NE(NativeModel::from_json(j).classifier_id(), a.classifier_id());
}

TEST(NativeModel, RejectsMalformedArtifact) {
  auto j = zero_model().to_json();
  j["format"] = "other";
  EXPECT_THROW(NativeModel::from_json(j), ParseError);
  auto k = calibrated_lexicon_model(6, 0.2).to_json();
  k["per_trait"]["openness"]["coef"] = nlohmann::json::array();
  EXPECT_THROW(NativeModel::from_json(k), Error);
}

TEST(Lexicon, DisjointAndAbsentFromStems) {
  std::set<std::string> words;
  std::size_t total = 0;
  for (Trait t : kHeadTraits) {
    for (auto w : lexicon_for(t).high) words.emplace(w), ++total;
    for (auto w : lexicon_for(t).low) words.emplace(w), ++total;
  }
  for (const Battery* b : {&default_battery(), &normalized_battery()}) {
    for (const auto& p : b->prompts) {
      for (const auto& tok : tokenize(p.text, TokenizerSpec{})) {
        EXPECT_FALSE(words.contains(tok)) << tok << " in " << p.id;
      }
    }
  }
  // Fillers may occur in stems but never carry trait weight.
  for (auto w : filler_words()) words.emplace(w), ++total;
  EXPECT_EQ(words.size(), total) << "a word appears in two lists";
  const NativeModel m = calibrated_lexicon_model(6, 0.2);
  for (Trait t : kHeadTraits) {
    const auto& head = m.head(t);
    for (std::size_t i = 0; i < head.vocab.size(); ++i) {
      const bool filler = std::find(filler_words().begin(), filler_words().end(),
                                    head.vocab[i]) != filler_words().end();
      if (filler) {
        EXPECT_EQ(head.coef[i], 0.0) << head.vocab[i];
      }
    }
  }
}

TEST(LexiconModel, StemsScoreNeutral) {
  const NativeModel m = calibrated_lexicon_model(6, 0.2);
  for (const auto& p : default_battery().prompts) {
    for (Trait t : kAllTraits) EXPECT_EQ(m.score(p.text)[t], 0.5) << p.id;
  }
}

// Expected probability by direct enumeration of the word draws.
double enumerate_expected(int m, double p, double gain) {
  double total = 0.0;
  for (int mask = 0; mask < (1 << m); ++mask) {
    const int high = __builtin_popcount(static_cast<unsigned>(mask));
    const double prob = std::pow(p, high) * std::pow(1.0 - p, m - high);
    total += prob * sigmoid(gain * (high - (m - high)));
  }
  return total;
}

TEST(LexiconModel, GainCalibratedToShift) {
  for (int m : {1, 4, 6}) {
    for (double shift : {0.1, 0.2, 0.3}) {
      const NativeModel model = calibrated_lexicon_model(m, shift);
      const double gain = model.head(Trait::kOpenness).coef.front();
      EXPECT_NEAR(enumerate_expected(m, 0.5 + shift, gain), 0.5 + shift, 1e-9);
      EXPECT_NEAR(lexicon_expected_probability(m, 0.5 + shift, gain),
                  enumerate_expected(m, 0.5 + shift, gain), 1e-12);
      // Symmetric draw lowers the head by the same amount.
      EXPECT_NEAR(enumerate_expected(m, 0.5 - shift, gain), 0.5 - shift, 1e-9);
    }
  }
}

TEST(LexiconModel, ScoresCountDifference) {
  const NativeModel model = calibrated_lexicon_model(6, 0.2);
  const double gain = model.head(Trait::kConscientiousness).coef.front();
  const auto& lex = lexicon_for(Trait::kConscientiousness);
  const std::string text = std::string(lex.high[0]) + " " + std::string(lex.high[1]) + ", " +
                           std::string(lex.low[0]) + " and " + std::string(lex.high[0]);
  EXPECT_NEAR(model.score(text).conscientiousness(), sigmoid(2.0 * gain), 1e-15);
  EXPECT_EQ(model.score(text).openness(), 0.5);
}

}  // namespace
}  // namespace persona
