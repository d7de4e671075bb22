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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "persona/classifier.hpp"
#include "persona/native_model.hpp"
#include "persona/trait.hpp"

namespace persona {

struct LabeledDocument {
  std::string text;
  std::array<int, kHeadCount> labels{};  // 0/1 per head, indexed by index_of
};

struct LabeledCorpus {
  std::vector<LabeledDocument> rows;
};

// CSV with header text,cEXT,cNEU,cAGR,cCON,cOPN (any column order, extra
// columns ignored). Labels accept 0/1/y/n in either case.
LabeledCorpus ingest_corpus(const std::filesystem::path& path);
LabeledCorpus parse_corpus(std::string_view csv_text);
std::string corpus_to_csv(const LabeledCorpus& corpus);

// Label alias map; nullopt for anything that is not a binary label.
std::optional<int> parse_binary_label(std::string_view raw);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

// Zero when the denominator is zero.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
// 2TP / (2TP + FP + FN).
double f1_score(const ConfusionCounts& c);

struct TraitEval {
  ConfusionCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // positive rows evaluated
  std::size_t negatives = 0;  // negative rows evaluated
};

struct EvalReport {
  std::array<TraitEval, kHeadCount> per_trait{};
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
  double threshold = 0.5;
  std::size_t evaluated = 0;
  std::size_t excluded_unscorable = 0;

  const TraitEval& at(Trait t) const { return per_trait.at(index_of(t)); }
  nlohmann::json to_json() const;
};

// Predictions are head probability >= threshold.
EvalReport evaluate(const TraitClassifier& model, const LabeledCorpus& corpus,
                    double threshold = 0.5);

struct TrainOptions {
  std::uint64_t seed = 1;
  double train_fraction = 0.8;
  double l2 = 1e-3;
  int iterations = 500;
  double learning_rate = 2.0;
  std::size_t min_rows_per_class = 10;
};

struct TrainResult {
  NativeModel model;
  EvalReport report;  // on the held-out split
};

// Deterministic: seeded shuffle, fixed-iteration batch gradient descent with
// L2 on the weights (not the intercept). Heads train concurrently.
TrainResult train(const LabeledCorpus& corpus, const TrainOptions& options);

// Documents built from the trait lexicons: each head's label selects words
// from its high or low list, so the corpus is linearly separable.
LabeledCorpus synthetic_corpus(std::uint64_t seed, std::size_t docs);

}  // namespace persona
