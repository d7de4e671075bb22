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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "persona/trait.hpp"

namespace persona {

// Themes of the standard interview questions.
enum class Theme {
  kAboutYourself = 0,
  kCulturalFit = 1,
  kStrengthsWeaknesses = 2,
  kFuturePlans = 3,
  kPressure = 4,
};

inline constexpr std::array<Theme, 5> kThemes = {
    Theme::kAboutYourself, Theme::kCulturalFit, Theme::kStrengthsWeaknesses,
    Theme::kFuturePlans, Theme::kPressure};

// Traits that trait-activating prompts target. The fifth set targets
// emotional stability directly rather than neuroticism.
inline constexpr std::array<Trait, 5> kActivationTargets = kReportTraits;

inline constexpr std::size_t kPromptsPerCategory = 5;
inline constexpr std::size_t kBatterySize = 50;

std::string_view theme_name(Theme theme);
std::optional<Theme> parse_theme(std::string_view name);

enum class QuestionSet { kStandard, kTraitActivating };

std::string_view question_set_name(QuestionSet set);

struct PromptCategory {
  QuestionSet set = QuestionSet::kStandard;
  Theme theme = Theme::kAboutYourself;  // meaningful for kStandard
  Trait target = Trait::kOpenness;      // meaningful for kTraitActivating

  static PromptCategory standard(Theme theme) {
    return {QuestionSet::kStandard, theme, Trait::kOpenness};
  }
  static PromptCategory activating(Trait target) {
    return {QuestionSet::kTraitActivating, Theme::kAboutYourself, target};
  }

  // "std.<theme>" or "act.<target>"; prefix of every prompt id.
  std::string slug() const;
  // Human-readable, e.g. "Standard theme pressure".
  std::string describe() const;

  friend bool operator==(const PromptCategory& a, const PromptCategory& b) {
    if (a.set != b.set) return false;
    return a.set == QuestionSet::kStandard ? a.theme == b.theme
                                           : a.target == b.target;
  }
};

// All ten categories: five themes then five activation targets.
std::vector<PromptCategory> all_categories();

// Parses a category slug ("std.pressure") or a prompt id
// ("std.pressure.3"); the trailing index is ignored.
std::optional<PromptCategory> category_from_id(std::string_view id);

struct PromptSpec {
  std::string id;
  std::string text;
  PromptCategory category;
};

struct Battery {
  std::string version;
  std::vector<PromptSpec> prompts;

  const PromptSpec* find(std::string_view id) const;
};

// The canonical 50-stem battery, typos included.
const Battery& default_battery();
// Same battery with the two spelling slips corrected.
const Battery& normalized_battery();

// Throws ParseError (malformed JSON or fields) or ValidationError (shape).
Battery load_battery(const std::filesystem::path& path);
Battery parse_battery(std::string_view json_text);
Battery battery_from_json(const nlohmann::json& j);
nlohmann::json battery_to_json(const Battery& battery);

// Checks the 5 x 5 x 2 shape, id uniqueness and format, and ASCII text.
void validate_battery(const Battery& battery);

// Prompts whose category matches, in battery order. nullopt selects all.
std::vector<PromptSpec> prompts_for(const Battery& battery,
                                    const std::optional<PromptCategory>& filter);
std::vector<PromptSpec> prompts_in(const Battery& battery, QuestionSet set);

}  // namespace persona
