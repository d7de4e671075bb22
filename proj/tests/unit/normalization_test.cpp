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

#include <atomic>
#include <random>

#include <gtest/gtest.h>

#include "persona/error.hpp"
#include "persona/generation.hpp"
#include "persona/native_model.hpp"
#include "persona/normalization.hpp"

namespace persona {
namespace {

TEST(Normalize, ValueArithmetic) {
  EXPECT_NEAR(normalize_value(0.9, 0.2), 1.2, 1e-15);
  EXPECT_NEAR(normalize_value(0.0, 0.6), -0.1, 1e-15);
  EXPECT_GT(normalize_value(0.9, 0.2), 1.0);
  EXPECT_LT(normalize_value(0.0, 0.6), 0.0);
}

TEST(Normalize, IdentityIsExactlyHalf) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = d(rng);
    EXPECT_EQ(normalize_value(p, p), 0.5);
  }
}

TEST(Normalize, Antisymmetric) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = d(rng);
    const double p = d(rng);
    EXPECT_NEAR(normalize_value(s, p) - 0.5, -(normalize_value(p, s) - 0.5), 1e-15);
  }
}

TEST(Normalize, StabilityIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const TraitScores s(d(rng), d(rng), d(rng), d(rng), d(rng));
    const TraitScores p(d(rng), d(rng), d(rng), d(rng), d(rng));
    const TraitValues v = normalize_scores(s, p);
    EXPECT_NEAR(v[index_of(Trait::kEmotionalStability)],
                1.0 - v[index_of(Trait::kNeuroticism)], 1e-15);
    EXPECT_NEAR(v[index_of(Trait::kEmotionalStability)],
                (1.0 - s.neuroticism()) - (1.0 - p.neuroticism()) + 0.5, 1e-15);
  }
}

// Counts score() calls and returns fixed values.
class CountingClassifier final : public TraitClassifier {
 public:
  explicit CountingClassifier(std::string id) : id_(std::move(id)) {}
  const std::string& classifier_id() const override { return id_; }
  TraitScores score(std::string_view text) const override {
    if (!is_scorable(text)) throw UnscorableError("empty");
    ++calls;
    return TraitScores(0.9, 0.2, 0.5, 0.5, 0.3);
  }
  mutable std::atomic<int> calls{0};

 private:
  std::string id_;
};

TEST(BaselineCache, ComputesOncePerPromptAndClassifier) {
  BaselineCache cache;
  CountingClassifier a("a");
  CountingClassifier b("b");
  const PromptSpec p{"std.pressure.1", "When I have a deadline coming up, I",
                     PromptCategory::standard(Theme::kPressure)};
  const PromptSpec q{"std.pressure.2", "If I am working on many projects at once, I",
                     PromptCategory::standard(Theme::kPressure)};
  cache.get(p, a);
  cache.get(p, a);
  EXPECT_EQ(a.calls, 1);
  EXPECT_EQ(cache.size(), 1u);
  cache.get(p, b);
  cache.get(q, a);
  EXPECT_EQ(cache.size(), 3u);
  EXPECT_EQ(cache.get(q, a).classifier_id, "a");
}

TEST(Compose, Modes) {
  EXPECT_EQ(compose_sentence("My strengths are", "patience.", SentenceMode::kStemPlusCompletion),
            "My strengths are patience.");
  EXPECT_EQ(compose_sentence("My strengths are", "patience.", SentenceMode::kCompletionOnly),
            "patience.");
}

GenerationRecord record(std::string prompt_id, std::string text) {
  GenerationRecord r;
  r.prompt_id = std::move(prompt_id);
  r.model_id = "m";
  r.completion_index = 3;
  r.raw_text = text;
  r.sanitized_text = std::move(text);
  return r;
}

TEST(NormalizeRecord, ZeroModelGivesHalf) {
  const NativeModel zero = zero_model();
  const PromptSpec p{"std.strengths_weaknesses.1", "My strengths are",
                     PromptCategory::standard(Theme::kStrengthsWeaknesses)};
  const auto base = baseline(p, zero);
  for (Trait t : kAllTraits) EXPECT_EQ(base.scores[t], 0.5);
  const auto out = normalize(record(p.id, "patience"), base, zero);
  ASSERT_TRUE(out.has_value());
  for (Trait t : kAllTraits) EXPECT_EQ(out->normalized[index_of(t)], 0.5);
  EXPECT_EQ(out->completion_index, 3u);
  EXPECT_EQ(out->classifier_id, zero.classifier_id());
}

TEST(NormalizeRecord, EmptyIsSkipped) {
  CountingClassifier c("c");
  const PromptSpec p{"std.pressure.1", "When I have a deadline coming up, I",
                     PromptCategory::standard(Theme::kPressure)};
  const auto base = baseline(p, c);
  EXPECT_FALSE(normalize(record(p.id, ""), base, c).has_value());
  EXPECT_FALSE(normalize(record(p.id, "   "), base, c).has_value());
  EXPECT_EQ(c.calls, 1);
}

TEST(NormalizeRecord, MismatchesRejected) {
  CountingClassifier a("a");
  CountingClassifier b("b");
  const PromptSpec p{"std.pressure.1", "When I have a deadline coming up, I",
                     PromptCategory::standard(Theme::kPressure)};
  const auto base = baseline(p, a);
  EXPECT_THROW(normalize(record(p.id, "x"), base, b), PreconditionError);
  EXPECT_THROW(normalize(record("std.pressure.2", "x"), base, a), PreconditionError);
}

TEST(ScoredRecord, JsonRoundTrip) {
  ScoredRecord r;
  r.prompt_id = "act.openness.2";
  r.model_id = "m";
  r.completion_index = 7;
  r.raw_scores = TraitScores(0.1, 0.2, 0.3, 0.4, 0.25);
  r.normalized = normalize_scores(r.raw_scores, TraitScores(0.5, 0.5, 0.5, 0.5, 0.5));
  r.classifier_id = "sha256:x";
  const auto j = r.to_json();
  EXPECT_EQ(j["raw_scores"]["emotional_stability"], 0.75);
  EXPECT_EQ(ScoredRecord::from_json(nlohmann::json::parse(j.dump())), r);
}

}  // namespace
}  // namespace persona
