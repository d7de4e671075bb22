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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persona/battery.hpp"
#include "persona/run_store.hpp"
#include "persona/trait.hpp"

namespace persona {

// Which records a summary covers.
enum class QuestionScope { kStandard, kTraitActivating, kBoth };

std::string_view scope_name(QuestionScope scope);
std::optional<QuestionScope> parse_scope(std::string_view name);

enum class ScoreView { kNormalized, kRaw };

// One eligible completion as seen by the analyses. `values` is empty when the
// completion was skipped for having no text after sanitization.
struct AnalysisRecord {
  std::string model_id;
  std::string prompt_id;
  PromptCategory category;
  std::string classifier_id;
  std::optional<TraitValues> values;
};

struct ModelMeta {
  std::string id;
  std::string family;
  std::optional<double> parameter_count;
};

struct AnalysisInput {
  std::vector<AnalysisRecord> records;
  std::vector<ModelMeta> models;  // sorted by id
};

// Joins generations and scores of fully scored runs. Throws AnalysisError if
// a run is not fully scored or the runs disagree on the classifier.
AnalysisInput load_analysis_input(std::span<const std::filesystem::path> run_dirs,
                                  ScoreView view = ScoreView::kNormalized);

// Streaming mean / population standard deviation. Values are summed in
// 2^-48 fixed point with 128-bit accumulators, so results do not depend on
// insertion order and accumulators merge exactly.
class TraitAccumulator {
 public:
  void add(double value);
  void merge(const TraitAccumulator& other);

  std::size_t count() const { return n_; }
  std::optional<double> mean() const;
  std::optional<double> population_std() const;

 private:
  __int128 sum_ = 0;
  __int128 sum_sq_ = 0;
  std::size_t n_ = 0;
};

struct GroupBy {
  QuestionScope scope = QuestionScope::kBoth;
  bool by_category = false;
  bool by_prompt = false;  // implies by_category
};

struct TraitSummary {
  std::string model_id;
  Trait trait = Trait::kOpenness;
  QuestionScope scope = QuestionScope::kBoth;
  std::optional<PromptCategory> category;
  std::optional<std::string> prompt_id;
  std::optional<double> mean;  // empty when n == 0
  std::optional<double> std;   // population
  std::size_t n = 0;
  std::size_t skipped = 0;
};

// One summary per (model, group, trait) over all six traits. Ordered by
// model id, then category (themes, then targets), then prompt id, then trait.
// Groups with no eligible records are omitted, except that a model with no
// eligible records in the scope still gets n = 0 rows when grouping only by
// scope. Throws AnalysisError on mixed classifier ids.
std::vector<TraitSummary> summarize(std::span<const AnalysisRecord> records,
                                    const GroupBy& group_by = {});

// Mean over one target's activating prompts minus the mean over all standard
// prompts, for a given trait.
struct ActivationDelta {
  std::string model_id;
  Trait target = Trait::kOpenness;
  Trait trait = Trait::kOpenness;
  double activating_mean = 0.0;
  double standard_mean = 0.0;
  double delta = 0.0;  // activating_mean - standard_mean
  std::size_t activating_n = 0;
  std::size_t standard_n = 0;
};

// Per model and target, the delta on the targeted trait. Throws AnalysisError
// naming the missing question set or category.
std::vector<ActivationDelta> activation_deltas(std::span<const AnalysisRecord> records);

// Every (target, report trait) combination; the diagonal equals
// activation_deltas().
std::vector<ActivationDelta> activation_matrix(std::span<const AnalysisRecord> records);

enum class RankMark { kNone, kHighest, kSecond };

struct RankEntry {
  std::string model_id;
  std::optional<double> mean;
  std::size_t position = 0;
  RankMark mark = RankMark::kNone;
  bool tied = false;  // another model has exactly the same mean
};

struct TraitRanking {
  Trait trait = Trait::kOpenness;
  std::vector<RankEntry> entries;  // best first
};

struct RankingTable {
  std::vector<TraitRanking> per_trait;

  RankMark mark_for(std::string_view model_id, Trait trait) const;
  const TraitRanking* find(Trait trait) const;
};

// Orders models by mean, descending, per trait; equal means fall back to
// model id order and are flagged. Models with no data rank last, unmarked.
// Input must hold one ungrouped summary per (model, trait) for a single
// scope and at least two models; otherwise PreconditionError.
RankingTable rank(std::span<const TraitSummary> summaries);

struct ModelPair {
  std::string base;
  std::string variant;
};

struct PairDelta {
  std::string base;
  std::string variant;
  Trait trait = Trait::kOpenness;
  std::optional<double> base_mean;
  std::optional<double> variant_mean;
  std::optional<double> delta;  // variant_mean - base_mean, when both exist
};

// One row per pair and report trait, from ungrouped summaries. Throws
// ConfigError for a model id with no summary.
std::vector<PairDelta> compare_pairs(std::span<const TraitSummary> summaries,
                                     std::span<const ModelPair> pairs);

// Parses "base=variant" items.
std::vector<ModelPair> parse_pairs(std::span<const std::string> items);

}  // namespace persona
