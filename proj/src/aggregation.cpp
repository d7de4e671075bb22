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

#include "persona/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "persona/classifier.hpp"
#include "persona/error.hpp"

namespace persona {
namespace {

constexpr int kFractionBits = 48;
constexpr double kMaxMagnitude = 16.0;
constexpr std::size_t kMaxCount = std::size_t{1} << 22;

std::size_t category_rank(const PromptCategory& c) {
  const auto cats = all_categories();
  for (std::size_t i = 0; i < cats.size(); ++i) {
    if (cats[i] == c) return i;
  }
  return cats.size();
}

// Trailing ".<n>" of a prompt id, for natural ordering.
long prompt_index(std::string_view id) {
  const auto dot = id.rfind('.');
  if (dot == std::string_view::npos) return -1;
  long v = 0;
  for (char c : id.substr(dot + 1)) {
    if (c < '0' || c > '9') return -1;
    v = v * 10 + (c - '0');
  }
  return v;
}

bool in_scope(const PromptCategory& c, QuestionScope scope) {
  switch (scope) {
    case QuestionScope::kStandard: return c.set == QuestionSet::kStandard;
    case QuestionScope::kTraitActivating: return c.set == QuestionSet::kTraitActivating;
    case QuestionScope::kBoth: return true;
  }
  return false;
}

void check_single_classifier(std::span<const AnalysisRecord> records) {
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (r.values && !r.classifier_id.empty()) ids.insert(r.classifier_id);
  }
  if (ids.size() > 1) {
    std::string joined;
    for (const auto& id : ids) joined += (joined.empty() ? "" : ", ") + id;
    throw AnalysisError(fmt::format(
        "records were scored by different classifiers ({}); rescore them "
        "with one classifier",
        joined));
  }
}

struct GroupKey {
  std::string model_id;
  std::size_t category = 0;
  long index = 0;
  std::string prompt_id;

  friend bool operator<(const GroupKey& a, const GroupKey& b) {
    return std::tie(a.model_id, a.category, a.index, a.prompt_id) <
           std::tie(b.model_id, b.category, b.index, b.prompt_id);
  }
};

struct Group {
  std::optional<PromptCategory> category;
  std::optional<std::string> prompt_id;
  std::array<TraitAccumulator, kTraitCount> acc;
  std::size_t skipped = 0;

  void add(const AnalysisRecord& r) {
    if (!r.values) {
      ++skipped;
      return;
    }
    for (Trait t : kAllTraits) acc[index_of(t)].add((*r.values)[index_of(t)]);
  }
};

}  // namespace

std::string_view scope_name(QuestionScope scope) {
  switch (scope) {
    case QuestionScope::kStandard: return "standard";
    case QuestionScope::kTraitActivating: return "trait_activating";
    case QuestionScope::kBoth: return "both";
  }
  return "both";
}

std::optional<QuestionScope> parse_scope(std::string_view name) {
  for (auto s : {QuestionScope::kStandard, QuestionScope::kTraitActivating,
                 QuestionScope::kBoth}) {
    if (scope_name(s) == name) return s;
  }
  return std::nullopt;
}

void TraitAccumulator::add(double value) {
  if (!std::isfinite(value) || std::fabs(value) > kMaxMagnitude) {
    throw AnalysisError(fmt::format("score {} is outside the supported range", value));
  }
  if (n_ >= kMaxCount) throw AnalysisError("too many records in one group");
  const auto q = static_cast<std::int64_t>(std::llround(std::ldexp(value, kFractionBits)));
  sum_ += q;
  sum_sq_ += static_cast<__int128>(q) * q;
  ++n_;
}

void TraitAccumulator::merge(const TraitAccumulator& other) {
  if (n_ + other.n_ > kMaxCount) throw AnalysisError("too many records in one group");
  sum_ += other.sum_;
  sum_sq_ += other.sum_sq_;
  n_ += other.n_;
}

std::optional<double> TraitAccumulator::mean() const {
  if (n_ == 0) return std::nullopt;
  const long double m = static_cast<long double>(sum_) / static_cast<long double>(n_);
  return static_cast<double>(std::ldexp(m, -kFractionBits));
}

std::optional<double> TraitAccumulator::population_std() const {
  if (n_ == 0) return std::nullopt;
  const auto n = static_cast<long double>(n_);
  // Exact integer moments; only the final combination rounds.
  const long double m1 = static_cast<long double>(sum_) / n;
  const long double m2 = static_cast<long double>(sum_sq_) / n;
  long double var = m2 - m1 * m1;
  if (var < 0) var = 0;
  return static_cast<double>(std::ldexp(std::sqrt(var), -kFractionBits));
}

AnalysisInput load_analysis_input(std::span<const std::filesystem::path> run_dirs,
                                  ScoreView view) {
  AnalysisInput input;
  std::map<std::string, ModelMeta> models;
  std::optional<std::string> classifier;
  for (const auto& dir : run_dirs) {
    auto [store, run_id] = RunStore::for_run_dir(dir);
    const RunManifest manifest = store.load_manifest(run_id);
    if (!manifest.scoring || manifest.scoring->status != RunStatus::kComplete) {
      throw AnalysisError(fmt::format("run {} is not fully scored", run_id));
    }
    if (classifier && *classifier != manifest.scoring->classifier_id) {
      throw AnalysisError(fmt::format(
          "run {} was scored by {} but earlier runs by {}; rescore them with "
          "one classifier",
          run_id, manifest.scoring->classifier_id, *classifier));
    }
    classifier = manifest.scoring->classifier_id;
    models.try_emplace(manifest.model.id,
                       ModelMeta{manifest.model.id, manifest.model.family,
                                 manifest.model.parameter_count});

    std::map<std::pair<std::string, std::size_t>, ScoredRecord> scores;
    for (auto& s : store.read_scores(run_id)) {
      auto key = std::make_pair(s.prompt_id, s.completion_index);
      scores.emplace(std::move(key), std::move(s));
    }
    for (const auto& g : store.read_run(run_id)) {
      if (!g.ok()) continue;
      const auto category = category_from_id(g.prompt_id);
      if (!category) {
        throw AnalysisError(fmt::format("run {}: unknown prompt id {}", run_id, g.prompt_id));
      }
      AnalysisRecord rec{g.model_id, g.prompt_id, *category, manifest.scoring->classifier_id,
                         std::nullopt};
      const auto it = scores.find({g.prompt_id, g.completion_index});
      if (it != scores.end()) {
        rec.values = view == ScoreView::kNormalized ? it->second.normalized
                                                    : it->second.raw_scores.values();
      } else if (is_scorable(g.sanitized_text)) {
        throw AnalysisError(fmt::format("run {}: {} #{} has no score", run_id,
                                        g.prompt_id, g.completion_index));
      }
      input.records.push_back(std::move(rec));
    }
  }
  for (auto& [id, meta] : models) input.models.push_back(std::move(meta));
  return input;
}

std::vector<TraitSummary> summarize(std::span<const AnalysisRecord> records,
                                    const GroupBy& group_by) {
  check_single_classifier(records);
  const bool by_prompt = group_by.by_prompt;
  const bool by_category = group_by.by_category || by_prompt;

  std::map<GroupKey, Group> groups;
  if (!by_category) {
    for (const auto& r : records) groups.try_emplace(GroupKey{r.model_id, 0, 0, ""});
  }
  for (const auto& r : records) {
    if (!in_scope(r.category, group_by.scope)) continue;
    GroupKey key{r.model_id, 0, 0, ""};
    if (by_category) key.category = category_rank(r.category);
    if (by_prompt) {
      key.index = prompt_index(r.prompt_id);
      key.prompt_id = r.prompt_id;
    }
    auto& g = groups[key];
    if (by_category) g.category = r.category;
    if (by_prompt) g.prompt_id = r.prompt_id;
    g.add(r);
  }

  std::vector<TraitSummary> out;
  out.reserve(groups.size() * kTraitCount);
  for (const auto& [key, g] : groups) {
    for (Trait t : kAllTraits) {
      const auto& acc = g.acc[index_of(t)];
      out.push_back(TraitSummary{key.model_id, t, group_by.scope, g.category,
                                 g.prompt_id, acc.mean(), acc.population_std(),
                                 acc.count(), g.skipped});
    }
  }
  return out;
}

namespace {

struct ModelActivation {
  std::array<TraitAccumulator, kTraitCount> standard;
  std::map<std::size_t, std::array<TraitAccumulator, kTraitCount>> by_target;
};

std::map<std::string, ModelActivation> collect_activation(
    std::span<const AnalysisRecord> records) {
  check_single_classifier(records);
  std::map<std::string, ModelActivation> models;
  for (const auto& r : records) {
    auto& m = models[r.model_id];
    if (!r.values) continue;
    auto& acc = r.category.set == QuestionSet::kStandard
                    ? m.standard
                    : m.by_target[index_of(r.category.target)];
    for (Trait t : kAllTraits) acc[index_of(t)].add((*r.values)[index_of(t)]);
  }
  for (const auto& [id, m] : models) {
    if (m.standard[0].count() == 0) {
      throw AnalysisError(fmt::format("model {} has no scored {} prompts", id,
                                      question_set_name(QuestionSet::kStandard)));
    }
    for (Trait target : kActivationTargets) {
      const auto it = m.by_target.find(index_of(target));
      if (it == m.by_target.end() || it->second[0].count() == 0) {
        throw AnalysisError(fmt::format("model {} has no scored prompts in {}", id,
                                        PromptCategory::activating(target).describe()));
      }
    }
  }
  return models;
}

ActivationDelta make_delta(const std::string& model, Trait target, Trait trait,
                           const ModelActivation& m) {
  const auto& act = m.by_target.at(index_of(target))[index_of(trait)];
  const auto& std_acc = m.standard[index_of(trait)];
  ActivationDelta d;
  d.model_id = model;
  d.target = target;
  d.trait = trait;
  d.activating_mean = *act.mean();
  d.standard_mean = *std_acc.mean();
  d.delta = d.activating_mean - d.standard_mean;
  d.activating_n = act.count();
  d.standard_n = std_acc.count();
  return d;
}

}  // namespace

std::vector<ActivationDelta> activation_deltas(std::span<const AnalysisRecord> records) {
  std::vector<ActivationDelta> out;
  for (const auto& [id, m] : collect_activation(records)) {
    for (Trait target : kActivationTargets) out.push_back(make_delta(id, target, target, m));
  }
  return out;
}

std::vector<ActivationDelta> activation_matrix(std::span<const AnalysisRecord> records) {
  std::vector<ActivationDelta> out;
  for (const auto& [id, m] : collect_activation(records)) {
    for (Trait target : kActivationTargets) {
      for (Trait trait : kReportTraits) out.push_back(make_delta(id, target, trait, m));
    }
  }
  return out;
}

const TraitRanking* RankingTable::find(Trait trait) const {
  for (const auto& r : per_trait) {
    if (r.trait == trait) return &r;
  }
  return nullptr;
}

RankMark RankingTable::mark_for(std::string_view model_id, Trait trait) const {
  const auto* r = find(trait);
  if (r == nullptr) return RankMark::kNone;
  for (const auto& e : r->entries) {
    if (e.model_id == model_id) return e.mark;
  }
  return RankMark::kNone;
}

RankingTable rank(std::span<const TraitSummary> summaries) {
  std::set<std::string> models;
  std::set<QuestionScope> scopes;
  std::map<Trait, std::vector<RankEntry>> by_trait;
  std::set<std::pair<std::string, Trait>> seen;
  for (const auto& s : summaries) {
    if (s.category || s.prompt_id) {
      throw PreconditionError("ranking needs summaries that are not grouped by category or prompt");
    }
    if (!seen.insert({s.model_id, s.trait}).second) {
      throw PreconditionError(fmt::format("duplicate summary for {} / {}", s.model_id,
                                          trait_name(s.trait)));
    }
    models.insert(s.model_id);
    scopes.insert(s.scope);
    by_trait[s.trait].push_back(RankEntry{s.model_id, s.mean, 0, RankMark::kNone, false});
  }
  if (scopes.size() > 1) throw PreconditionError("ranking needs summaries from one question set");
  if (models.size() < 2) {
    throw PreconditionError(fmt::format("ranking needs at least two models, got {}", models.size()));
  }

  RankingTable table;
  for (Trait t : kAllTraits) {
    const auto it = by_trait.find(t);
    if (it == by_trait.end()) continue;
    auto entries = std::move(it->second);
    std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
      if (a.mean.has_value() != b.mean.has_value()) return a.mean.has_value();
      if (a.mean && *a.mean != *b.mean) return *a.mean > *b.mean;
      return a.model_id < b.model_id;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto& e = entries[i];
      e.position = i;
      if (!e.mean) continue;
      if (i == 0) e.mark = RankMark::kHighest;
      if (i == 1) e.mark = RankMark::kSecond;
      const bool eq_prev = i > 0 && entries[i - 1].mean == e.mean;
      const bool eq_next = i + 1 < entries.size() && entries[i + 1].mean == e.mean;
      e.tied = eq_prev || eq_next;
    }
    table.per_trait.push_back(TraitRanking{t, std::move(entries)});
  }
  return table;
}

std::vector<PairDelta> compare_pairs(std::span<const TraitSummary> summaries,
                                     std::span<const ModelPair> pairs) {
  std::map<std::pair<std::string, Trait>, std::optional<double>> means;
  std::set<std::string> models;
  for (const auto& s : summaries) {
    if (s.category || s.prompt_id) continue;
    means[{s.model_id, s.trait}] = s.mean;
    models.insert(s.model_id);
  }
  std::vector<PairDelta> out;
  for (const auto& p : pairs) {
    for (const auto* id : {&p.base, &p.variant}) {
      if (!models.contains(*id)) {
        throw ConfigError(fmt::format("pair {}={}: no results for model \"{}\"", p.base,
                                      p.variant, *id));
      }
    }
    for (Trait t : kReportTraits) {
      PairDelta d;
      d.base = p.base;
      d.variant = p.variant;
      d.trait = t;
      d.base_mean = means[{p.base, t}];
      d.variant_mean = means[{p.variant, t}];
      if (d.base_mean && d.variant_mean) d.delta = *d.variant_mean - *d.base_mean;
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<ModelPair> parse_pairs(std::span<const std::string> items) {
  std::vector<ModelPair> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ConfigError(fmt::format("pair \"{}\" must look like base=variant", item));
    }
    out.push_back(ModelPair{item.substr(0, eq), item.substr(eq + 1)});
  }
  return out;
}

}  // namespace persona
