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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "persona/aggregation.hpp"

namespace persona {

struct ReportOptions {
  // Render values above 1 as "100.00+%" instead of their exact percentage.
  bool clamp_display = false;
  // Listed models come first, in this order; the rest follow by id.
  std::vector<std::string> model_order;
};

// A rendered view: an aligned markdown table and a long-format CSV.
struct Rendered {
  std::string markdown;
  std::string csv;
};

// "51.91%"; "100.00+%" above 1 when clamping; "—" when undefined.
std::string format_percent(std::optional<double> value, bool clamp = false);
// Difference in percentage points with an explicit sign: "+16.41", "-9.57".
std::string format_points(std::optional<double> delta);

// Model-by-trait mean table over the report traits. Marks come from
// `ranking` when given (bold highest, italic second).
Rendered render_summary(std::span<const TraitSummary> summaries,
                        const RankingTable* ranking,
                        const ReportOptions& options = {});

// Delta of each target on its own trait in the table; the CSV holds the full
// target-by-trait matrix.
Rendered render_activation(std::span<const ActivationDelta> matrix,
                           const ReportOptions& options = {});

Rendered render_ranking(const RankingTable& ranking);

Rendered render_pairs(std::span<const PairDelta> deltas);

// Radar data per family, model, question set and category (with per-prompt
// points) and a scatter of declared parameter count against the
// trait-activating means.
nlohmann::json plot_data(const AnalysisInput& input);

// Pretty-printed with a trailing newline; stable bytes for equal input.
std::string dump_json(const nlohmann::json& j);

}  // namespace persona
