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

#include "persona/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "persona/csv.hpp"
#include "persona/error.hpp"

namespace persona {
namespace {

constexpr std::string_view kUndefined = "\xE2\x80\x94";  // U+2014

std::size_t display_width(std::string_view s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++w;
  }
  return w;
}

enum class Align { kLeft, kRight };

std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows,
                           const std::vector<Align>& align) {
  std::vector<std::size_t> width(header.size(), 3);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], display_width(row[i]));
    }
  };
  widen(header);
  for (const auto& r : rows) widen(r);

  auto line = [&](const std::vector<std::string>& row) {
    std::string out = "|";
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string pad(width[i] - display_width(row[i]), ' ');
      out += ' ';
      out += align[i] == Align::kRight ? pad + row[i] : row[i] + pad;
      out += " |";
    }
    return out + "\n";
  };

  std::string out = line(header);
  out += "|";
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += align[i] == Align::kRight ? " " + std::string(width[i] - 1, '-') + ": |"
                                     : " " + std::string(width[i], '-') + " |";
  }
  out += "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(fields[i]);
  }
  return out + "\n";
}

std::string number(std::optional<double> v) { return v ? fmt::format("{}", *v) : ""; }

std::string mark(std::string text, RankMark m) {
  switch (m) {
    case RankMark::kHighest: return "**" + text + "**";
    case RankMark::kSecond: return "*" + text + "*";
    case RankMark::kNone: break;
  }
  return text;
}

std::string_view mark_name(RankMark m) {
  switch (m) {
    case RankMark::kHighest: return "highest";
    case RankMark::kSecond: return "second";
    case RankMark::kNone: break;
  }
  return "";
}

std::vector<std::string> order_models(const std::set<std::string>& present,
                                      const std::vector<std::string>& preferred) {
  std::vector<std::string> out;
  for (const auto& id : preferred) {
    if (!present.contains(id)) {
      throw ConfigError(fmt::format("model order names unknown model \"{}\"", id));
    }
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  for (const auto& id : present) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  }
  return out;
}

std::vector<std::string> trait_header(std::string first) {
  std::vector<std::string> h{std::move(first)};
  for (Trait t : kReportTraits) h.emplace_back(trait_title(t));
  return h;
}

std::vector<Align> trait_align(std::size_t leading) {
  std::vector<Align> a(leading, Align::kLeft);
  a.resize(leading + kReportTraits.size(), Align::kRight);
  return a;
}

std::string_view scope_phrase(QuestionScope scope) {
  switch (scope) {
    case QuestionScope::kStandard: return "standard prompts";
    case QuestionScope::kTraitActivating: return "trait-activating prompts";
    case QuestionScope::kBoth: break;
  }
  return "all prompts";
}

}  // namespace

std::string format_percent(std::optional<double> value, bool clamp) {
  if (!value) return std::string(kUndefined);
  if (clamp && *value > 1.0) return "100.00+%";
  return fmt::format("{:.2f}%", *value * 100.0);
}

std::string format_points(std::optional<double> delta) {
  if (!delta) return std::string(kUndefined);
  std::string s = fmt::format("{:+.2f}", *delta * 100.0);
  if (s == "-0.00") s = "+0.00";
  return s;
}

Rendered render_summary(std::span<const TraitSummary> summaries,
                        const RankingTable* ranking, const ReportOptions& options) {
  std::set<std::string> present;
  std::map<std::pair<std::string, Trait>, const TraitSummary*> cell;
  std::optional<QuestionScope> scope;
  for (const auto& s : summaries) {
    if (s.category || s.prompt_id) continue;
    present.insert(s.model_id);
    cell[{s.model_id, s.trait}] = &s;
    scope = s.scope;
  }
  const auto models = order_models(present, options.model_order);

  Rendered out;
  out.markdown = fmt::format(
      "Mean normalized trait probability over {}. Highest per trait in bold, "
      "second-highest in italics.\n\n",
      scope_phrase(scope.value_or(QuestionScope::kBoth)));
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : models) {
    std::vector<std::string> row{m};
    for (Trait t : kReportTraits) {
      const auto it = cell.find({m, t});
      const std::optional<double> mean = it == cell.end() ? std::nullopt : it->second->mean;
      std::string text = format_percent(mean, options.clamp_display);
      if (ranking != nullptr) text = mark(std::move(text), ranking->mark_for(m, t));
      row.push_back(std::move(text));
    }
    rows.push_back(std::move(row));
  }
  out.markdown += markdown_table(trait_header("Model"), rows, trait_align(1));

  out.csv = csv_line({"model_id", "question_set", "trait", "mean", "std_population", "n",
                      "skipped", "mark"});
  for (const auto& m : models) {
    for (Trait t : kAllTraits) {
      const auto it = cell.find({m, t});
      if (it == cell.end()) continue;
      const auto& s = *it->second;
      const RankMark mk = ranking != nullptr ? ranking->mark_for(m, t) : RankMark::kNone;
      out.csv += csv_line({m, std::string(scope_name(s.scope)), std::string(trait_name(t)),
                           number(s.mean), number(s.std), std::to_string(s.n),
                           std::to_string(s.skipped), std::string(mark_name(mk))});
    }
  }
  return out;
}

Rendered render_activation(std::span<const ActivationDelta> matrix,
                           const ReportOptions& options) {
  std::set<std::string> present;
  std::map<std::pair<std::string, Trait>, double> diagonal;
  for (const auto& d : matrix) {
    present.insert(d.model_id);
    if (d.target == d.trait) diagonal[{d.model_id, d.target}] = d.delta;
  }
  const auto models = order_models(present, options.model_order);

  Rendered out;
  out.markdown =
      "Change of each targeted trait on its trait-activating prompts relative to all "
      "standard prompts, in percentage points.\n\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : models) {
    std::vector<std::string> row{m};
    for (Trait t : kReportTraits) {
      const auto it = diagonal.find({m, t});
      row.push_back(format_points(it == diagonal.end() ? std::nullopt
                                                       : std::optional<double>(it->second)));
    }
    rows.push_back(std::move(row));
  }
  out.markdown += markdown_table(trait_header("Model"), rows, trait_align(1));

  out.csv = csv_line({"model_id", "target", "trait", "activating_mean", "standard_mean",
                      "delta", "activating_n", "standard_n"});
  for (const auto& m : models) {
    for (const auto& d : matrix) {
      if (d.model_id != m) continue;
      out.csv += csv_line({m, std::string(trait_name(d.target)), std::string(trait_name(d.trait)),
                           number(d.activating_mean), number(d.standard_mean),
                           number(d.delta), std::to_string(d.activating_n),
                           std::to_string(d.standard_n)});
    }
  }
  return out;
}

Rendered render_ranking(const RankingTable& ranking) {
  Rendered out;
  out.markdown = "Models ordered by mean per trait; equal means are ordered by model id.\n\n";
  std::vector<std::vector<std::string>> rows;
  out.csv = csv_line({"trait", "position", "model_id", "mean", "mark", "tied"});
  for (const auto& r : ranking.per_trait) {
    for (const auto& e : r.entries) {
      const std::string tied = e.tied ? "yes" : "no";
      out.csv += csv_line({std::string(trait_name(r.trait)), std::to_string(e.position + 1),
                           e.model_id, number(e.mean), std::string(mark_name(e.mark)), tied});
      if (r.trait == Trait::kNeuroticism) continue;  // CSV only
      rows.push_back({std::string(trait_title(r.trait)), std::to_string(e.position + 1),
                      e.model_id, mark(format_percent(e.mean), e.mark), tied});
    }
  }
  out.markdown += markdown_table({"Trait", "Rank", "Model", "Mean", "Tied"}, rows,
                                 {Align::kLeft, Align::kRight, Align::kLeft, Align::kRight,
                                  Align::kLeft});
  return out;
}

Rendered render_pairs(std::span<const PairDelta> deltas) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::pair<std::string, std::string>, std::map<Trait, const PairDelta*>> cells;
  for (const auto& d : deltas) {
    const auto key = std::make_pair(d.base, d.variant);
    if (!cells.contains(key)) pairs.push_back(key);
    cells[key][d.trait] = &d;
  }

  Rendered out;
  out.markdown = "Variant mean minus base mean, in percentage points.\n\n";
  std::vector<std::vector<std::string>> rows;
  out.csv = csv_line({"base", "variant", "trait", "base_mean", "variant_mean", "delta"});
  for (const auto& key : pairs) {
    std::vector<std::string> row{key.first, key.second};
    for (Trait t : kReportTraits) {
      const auto it = cells[key].find(t);
      if (it == cells[key].end()) {
        row.emplace_back(kUndefined);
        continue;
      }
      const auto& d = *it->second;
      row.push_back(format_points(d.delta));
      out.csv += csv_line({d.base, d.variant, std::string(trait_name(t)), number(d.base_mean),
                           number(d.variant_mean), number(d.delta)});
    }
    rows.push_back(std::move(row));
  }
  auto header = trait_header("Base");
  header.insert(header.begin() + 1, "Variant");
  out.markdown += markdown_table(header, rows, trait_align(2));
  return out;
}

namespace {

nlohmann::json values_json(const std::array<TraitAccumulator, kTraitCount>& acc) {
  nlohmann::json v = nlohmann::json::object();
  for (Trait t : kReportTraits) {
    const auto m = acc[index_of(t)].mean();
    v[std::string(trait_name(t))] = m ? nlohmann::json(*m) : nlohmann::json(nullptr);
  }
  return v;
}

nlohmann::json std_json(const std::array<TraitAccumulator, kTraitCount>& acc) {
  nlohmann::json v = nlohmann::json::object();
  for (Trait t : kReportTraits) {
    const auto s = acc[index_of(t)].population_std();
    v[std::string(trait_name(t))] = s ? nlohmann::json(*s) : nlohmann::json(nullptr);
  }
  return v;
}

struct Cell {
  std::array<TraitAccumulator, kTraitCount> acc;
  std::size_t skipped = 0;

  void add(const AnalysisRecord& r) {
    if (!r.values) {
      ++skipped;
      return;
    }
    for (Trait t : kAllTraits) acc[index_of(t)].add((*r.values)[index_of(t)]);
  }
  nlohmann::json to_json() const {
    return {{"n", acc[0].count()},
            {"skipped", skipped},
            {"values", values_json(acc)},
            {"std", std_json(acc)}};
  }
};

}  // namespace

nlohmann::json plot_data(const AnalysisInput& input) {
  // Reuse the classifier guard of summarize().
  (void)summarize(input.records, GroupBy{});
  std::optional<std::string> classifier;
  for (const auto& r : input.records) {
    if (r.values) {
      classifier = r.classifier_id;
      break;
    }
  }

  std::map<std::string, ModelMeta> meta;
  for (const auto& m : input.models) meta[m.id] = m;
  for (const auto& r : input.records) meta.try_emplace(r.model_id, ModelMeta{r.model_id, "", {}});
  auto family_of = [&](const std::string& id) {
    const auto& f = meta[id].family;
    return f.empty() ? id : f;
  };

  // model -> set -> category rank -> (cell, prompt -> cell)
  struct CategoryCells {
    PromptCategory category;
    Cell all;
    std::map<std::pair<long, std::string>, Cell> prompts;
  };
  std::map<std::string, std::map<int, std::map<std::size_t, CategoryCells>>> tree;
  std::map<std::string, Cell> activating;
  const auto cats = all_categories();
  for (const auto& r : input.records) {
    std::size_t rank = 0;
    while (rank < cats.size() && !(cats[rank] == r.category)) ++rank;
    auto& cc = tree[r.model_id][static_cast<int>(r.category.set)][rank];
    cc.category = r.category;
    cc.all.add(r);
    long idx = -1;
    if (const auto dot = r.prompt_id.rfind('.'); dot != std::string::npos) {
      idx = std::strtol(r.prompt_id.c_str() + dot + 1, nullptr, 10);
    }
    cc.prompts[{idx, r.prompt_id}].add(r);
    if (r.category.set == QuestionSet::kTraitActivating) activating[r.model_id].add(r);
  }

  std::map<std::string, nlohmann::json> families;
  for (const auto& [model, sets] : tree) {
    nlohmann::json model_j{{"model_id", model}, {"question_sets", nlohmann::json::array()}};
    for (const auto& [set, categories] : sets) {
      nlohmann::json set_j{
          {"question_set", question_set_name(static_cast<QuestionSet>(set))},
          {"categories", nlohmann::json::array()}};
      for (const auto& [rank, cc] : categories) {
        nlohmann::json cat_j = cc.all.to_json();
        cat_j["category"] = cc.category.slug();
        cat_j["label"] = cc.category.describe();
        nlohmann::json points = nlohmann::json::array();
        for (const auto& [key, cell] : cc.prompts) {
          nlohmann::json p = cell.to_json();
          p["prompt_id"] = key.second;
          points.push_back(std::move(p));
        }
        cat_j["prompts"] = std::move(points);
        set_j["categories"].push_back(std::move(cat_j));
      }
      model_j["question_sets"].push_back(std::move(set_j));
    }
    auto& fam = families[family_of(model)];
    if (fam.is_null()) fam = nlohmann::json::array();
    fam.push_back(std::move(model_j));
  }

  nlohmann::json radar = nlohmann::json::array();
  for (auto& [family, models] : families) {
    radar.push_back({{"family", family}, {"models", std::move(models)}});
  }

  nlohmann::json scatter = nlohmann::json::array();
  for (const auto& [id, m] : meta) {
    nlohmann::json point = activating.contains(id) ? activating[id].to_json() : Cell{}.to_json();
    point["model_id"] = id;
    point["family"] = family_of(id);
    point["parameter_count"] =
        m.parameter_count ? nlohmann::json(*m.parameter_count) : nlohmann::json(nullptr);
    point["question_set"] = question_set_name(QuestionSet::kTraitActivating);
    scatter.push_back(std::move(point));
  }

  return {{"format", "persona-plotdata-v1"},
          {"score", "normalized"},
          {"std", "population"},
          {"classifier_id", classifier ? nlohmann::json(*classifier) : nlohmann::json(nullptr)},
          {"radar", std::move(radar)},
          {"scatter", std::move(scatter)}};
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace persona
