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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "persona/error.hpp"
#include "persona/training.hpp"

namespace persona {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Metrics, F1FromCounts) {
  ConfusionCounts c{2, 1, 1, 0};
  EXPECT_DOUBLE_EQ(f1_score(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(precision(c), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(recall(c), 2.0 / 3.0);
  EXPECT_EQ(f1_score(ConfusionCounts{}), 0.0);
  EXPECT_EQ(precision(ConfusionCounts{0, 0, 3, 1}), 0.0);
  EXPECT_EQ(f1_score(ConfusionCounts{4, 0, 0, 4}), 1.0);
}

TEST(Corpus, LabelAliases) {
  EXPECT_EQ(parse_binary_label("y"), 1);
  EXPECT_EQ(parse_binary_label("Y"), 1);
  EXPECT_EQ(parse_binary_label("n"), 0);
  EXPECT_EQ(parse_binary_label("1"), 1);
  EXPECT_EQ(parse_binary_label("0"), 0);
  EXPECT_FALSE(parse_binary_label("maybe").has_value());
  EXPECT_FALSE(parse_binary_label("").has_value());
}

TEST(Corpus, ParsesAnyColumnOrder) {
  const auto c = parse_corpus(
      "cOPN,text,cNEU,cEXT,cCON,cAGR,extra\n"
      "y,\"I am calm, kind\",n,1,0,Y,ignored\n");
  ASSERT_EQ(c.rows.size(), 1u);
  EXPECT_EQ(c.rows[0].text, "I am calm, kind");
  EXPECT_EQ(c.rows[0].labels, (std::array<int, 5>{1, 0, 1, 1, 0}));
}

TEST(Corpus, MissingColumnNamed) {
  try {
    parse_corpus("text,cEXT,cAGR,cCON,cOPN\nhello,1,1,1,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("missing column \"cNEU\""), std::string::npos);
  }
}

TEST(Corpus, BadLabelNamesLine) {
  try {
    parse_corpus("text,cEXT,cNEU,cAGR,cCON,cOPN\na,1,1,1,1,1\nb,1,x,1,1,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Corpus, CsvRoundTrip) {
  const LabeledCorpus c = synthetic_corpus(11, 40);
  const LabeledCorpus back = parse_corpus(corpus_to_csv(c));
  ASSERT_EQ(back.rows.size(), c.rows.size());
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].text, c.rows[i].text);
    EXPECT_EQ(back.rows[i].labels, c.rows[i].labels);
  }
}

TEST(Corpus, ShippedFileMatchesGenerator) {
  const std::string shipped = read_file(std::string(PERSONA_DATA_DIR) + "/synthetic_corpus.csv");
  EXPECT_EQ(shipped, corpus_to_csv(synthetic_corpus(7, 200)));
}

TEST(Train, ShippedCorpusReachesHighF1) {
  const auto corpus = ingest_corpus(std::string(PERSONA_DATA_DIR) + "/synthetic_corpus.csv");
  const TrainResult r = train(corpus, TrainOptions{});
  EXPECT_EQ(r.report.evaluated, 40u);
  for (Trait t : kHeadTraits) EXPECT_GE(r.report.at(t).f1, 0.9) << trait_name(t);
}

TEST(Train, DeterministicUnderSeed) {
  const auto corpus = synthetic_corpus(7, 200);
  const TrainResult a = train(corpus, TrainOptions{});
  const TrainResult b = train(corpus, TrainOptions{});
  EXPECT_EQ(a.model.serialize(), b.model.serialize());
  EXPECT_EQ(a.report.to_json(), b.report.to_json());
  TrainOptions other;
  other.seed = 2;
  EXPECT_NE(train(corpus, other).model.serialize(), a.model.serialize());
}

TEST(Train, TooFewRowsPerClassNamesTrait) {
  LabeledCorpus c = synthetic_corpus(1, 100);
  for (auto& row : c.rows) row.labels[index_of(Trait::kAgreeableness)] = 1;
  try {
    train(c, TrainOptions{});
    FAIL();
  } catch (const TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("agreeableness"), std::string::npos) << e.what();
  }
}

TEST(Train, ReportRecordsSplitAndThreshold) {
  const TrainResult r = train(synthetic_corpus(7, 200), TrainOptions{});
  const auto j = r.report.to_json();
  EXPECT_EQ(j["threshold"], 0.5);
  EXPECT_EQ(j["split"]["seed"], 1);
  EXPECT_TRUE(j["per_trait"].contains("neuroticism"));
}

TEST(Evaluate, ThresholdStability) {
  const auto corpus = synthetic_corpus(9, 60);
  const NativeModel m = train(synthetic_corpus(7, 200), TrainOptions{}).model;
  bool all_away = true;
  for (const auto& row : corpus.rows) {
    for (Trait t : kHeadTraits) all_away &= std::abs(m.score(row.text)[t] - 0.5) > 1e-6;
  }
  ASSERT_TRUE(all_away);
  EXPECT_EQ(evaluate(m, corpus, 0.5).to_json()["per_trait"],
            evaluate(m, corpus, 0.5 + 1e-9).to_json()["per_trait"]);
}

TEST(Evaluate, ThresholdOutsideRangeRejected) {
  EXPECT_THROW(evaluate(zero_model(), synthetic_corpus(1, 5), 0.0), PreconditionError);
  EXPECT_THROW(evaluate(zero_model(), synthetic_corpus(1, 5), 1.0), PreconditionError);
}

TEST(Evaluate, ZeroModelPredictsAllPositive) {
  const auto corpus = synthetic_corpus(4, 50);
  const EvalReport r = evaluate(zero_model(), corpus, 0.5);
  for (Trait t : kHeadTraits) {
    EXPECT_EQ(r.at(t).counts.fn, 0u);
    EXPECT_EQ(r.at(t).counts.tn, 0u);
    EXPECT_EQ(r.at(t).counts.tp + r.at(t).counts.fp, 50u);
  }
}

}  // namespace
}  // namespace persona
