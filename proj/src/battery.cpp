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

#include "persona/battery.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "persona/error.hpp"

namespace persona {

namespace {

constexpr std::array<std::string_view, 5> kThemeNames = {
    "about_yourself", "cultural_fit", "strengths_weaknesses", "future_plans",
    "pressure"};

struct Stem {
  PromptCategory category;
  std::array<std::string_view, kPromptsPerCategory> texts;
};

// Order matches the published appendix: five themes, then five targets.
const std::array<Stem, 10>& canonical_stems() {
  static const std::array<Stem, 10> stems = {{
      {PromptCategory::standard(Theme::kAboutYourself),
       {"I would describe myself as", "Others would describe me as",
        "My hobbies are", "After work, I like to",
        "At the weekend, I usually"}},
      {PromptCategory::standard(Theme::kCulturalFit),
       {"My idea workplace would be", "I think that working as a team is",
        "When I am involved in a conflict in the workplace, I",
        "I think that workplace socials are",
        "When I am in the office, I like to"}},
      {PromptCategory::standard(Theme::kStrengthsWeaknesses),
       {"My strengths are", "My weaknesses are",
        "When presented with a challenge, I", "I am skilled at",
        "My best quality is"}},
      {PromptCategory::standard(Theme::kFuturePlans),
       {"When I think of the future, I", "I think that career progression is",
        "In the future, I would like to", "I think that the future will be",
        "Through my work, I hope to"}},
      {PromptCategory::standard(Theme::kPressure),
       {"When I have a deadline coming up, I",
        "If I am working on many projects at once, I",
        "Being able to priorities tasks is", "When I feel stressed at work, I",
        "When working under pressure, I typically"}},
      {PromptCategory::activating(Trait::kOpenness),
       {"Learning new information makes me", "I think that art is",
        "When I go on vacation, I typically",
        "Trying new foods is something that I",
        "I think that daydreaming is"}},
      {PromptCategory::activating(Trait::kConscientiousness),
       {"I think that perfectionism is",
        "To motivate myself to work, I usually",
        "When it comes to being organised, I typically",
        "I think that having work-related goals is",
        "When making decisions, I typically"}},
      {PromptCategory::activating(Trait::kExtraversion),
       {"I think that being active is",
        "During a social situation, I think of myself as",
        "When I am in charge of others, I feel",
        "When I am with a group of people, I", "When I am alone, I"}},
      {PromptCategory::activating(Trait::kAgreeableness),
       {"When I achieve something, others should",
        "When someone needs help, I", "I think that rules are",
        "Confrontations with others are", "I feel sympathy for"}},
      {PromptCategory::activating(Trait::kEmotionalStability),
       {"When I encounter a stressful situation, I",
        "Being the center of attention makes me feel",
        "My mood most of the time is", "My opinion of myself is",
        "When I am craving something, I usually"}},
  }};
  return stems;
}

Battery build_battery(std::string version,
                      const std::map<std::string_view, std::string_view>& fixes) {
  Battery battery;
  battery.version = std::move(version);
  for (const Stem& stem : canonical_stems()) {
    for (std::size_t i = 0; i < stem.texts.size(); ++i) {
      std::string_view text = stem.texts[i];
      if (auto it = fixes.find(text); it != fixes.end()) text = it->second;
      battery.prompts.push_back(
          {fmt::format("{}.{}", stem.category.slug(), i + 1), std::string(text),
           stem.category});
    }
  }
  return battery;
}

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + byte, '\n'));
}

const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                              const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(fmt::format("battery: missing field {}.{}", where, key));
  }
  return obj.at(key);
}

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) {
    throw ParseError(
        fmt::format("battery: field {}.{} must be a string", where, key));
  }
  return v.get<std::string>();
}

PromptCategory parse_category(const nlohmann::json& j, const std::string& where) {
  const std::string kind = require_string(j, "kind", where);
  if (kind == "standard") {
    const std::string theme = require_string(j, "theme", where);
    auto parsed = parse_theme(theme);
    if (!parsed) {
      throw ParseError(
          fmt::format("battery: {}.theme: unknown theme \"{}\"", where, theme));
    }
    return PromptCategory::standard(*parsed);
  }
  if (kind == "trait_activating") {
    const std::string target = require_string(j, "target", where);
    auto parsed = parse_trait(target);
    if (!parsed || *parsed == Trait::kNeuroticism) {
      throw ParseError(fmt::format(
          "battery: {}.target: \"{}\" is not an activation target", where,
          target));
    }
    return PromptCategory::activating(*parsed);
  }
  throw ParseError(fmt::format(
      "battery: {}.kind: expected \"standard\" or \"trait_activating\", got "
      "\"{}\"",
      where, kind));
}

bool is_printable_ascii(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x20 && u <= 0x7E;
  });
}

}  // namespace

std::string_view theme_name(Theme theme) {
  return kThemeNames[static_cast<std::size_t>(theme)];
}

std::optional<Theme> parse_theme(std::string_view name) {
  for (Theme t : kThemes) {
    if (theme_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view question_set_name(QuestionSet set) {
  return set == QuestionSet::kStandard ? "standard" : "trait_activating";
}

std::string PromptCategory::slug() const {
  return set == QuestionSet::kStandard
             ? fmt::format("std.{}", theme_name(theme))
             : fmt::format("act.{}", trait_name(target));
}

std::string PromptCategory::describe() const {
  return set == QuestionSet::kStandard
             ? fmt::format("Standard theme {}", theme_name(theme))
             : fmt::format("Trait-activating target {}", trait_name(target));
}

std::vector<PromptCategory> all_categories() {
  std::vector<PromptCategory> out;
  for (Theme t : kThemes) out.push_back(PromptCategory::standard(t));
  for (Trait t : kActivationTargets) out.push_back(PromptCategory::activating(t));
  return out;
}

std::optional<PromptCategory> category_from_id(std::string_view id) {
  for (const PromptCategory& c : all_categories()) {
    const std::string slug = c.slug();
    if (id.substr(0, slug.size()) != slug) continue;
    if (id.size() == slug.size() || id[slug.size()] == '.') return c;
  }
  return std::nullopt;
}

const PromptSpec* Battery::find(std::string_view id) const {
  auto it = std::find_if(prompts.begin(), prompts.end(),
                         [&](const PromptSpec& p) { return p.id == id; });
  return it == prompts.end() ? nullptr : &*it;
}

const Battery& default_battery() {
  static const Battery battery = build_battery("interview-50-v1", {});
  return battery;
}

const Battery& normalized_battery() {
  static const Battery battery = build_battery(
      "interview-50-v1-normalized",
      {{"My idea workplace would be", "My ideal workplace would be"},
       {"Being able to priorities tasks is",
        "Being able to prioritise tasks is"}});
  return battery;
}

Battery battery_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("battery: top level must be an object");
  Battery battery;
  battery.version = require_string(j, "version", "battery");
  const auto& prompts = require(j, "prompts", "battery");
  if (!prompts.is_array()) {
    throw ParseError("battery: field battery.prompts must be an array");
  }
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    const std::string where = fmt::format("prompts[{}]", i);
    const auto& p = prompts[i];
    PromptSpec spec;
    spec.id = require_string(p, "id", where);
    spec.text = require_string(p, "text", where);
    spec.category = parse_category(require(p, "category", where),
                                   where + ".category");
    battery.prompts.push_back(std::move(spec));
  }
  validate_battery(battery);
  return battery;
}

Battery parse_battery(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("battery: line {}: {}",
                                 line_of_byte(json_text, e.byte), e.what()));
  }
  return battery_from_json(j);
}

Battery load_battery(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(
        fmt::format("cannot open battery file {}", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_battery(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

nlohmann::json battery_to_json(const Battery& battery) {
  nlohmann::json prompts = nlohmann::json::array();
  for (const PromptSpec& p : battery.prompts) {
    nlohmann::json category;
    if (p.category.set == QuestionSet::kStandard) {
      category = {{"kind", "standard"}, {"theme", theme_name(p.category.theme)}};
    } else {
      category = {{"kind", "trait_activating"},
                  {"target", trait_name(p.category.target)}};
    }
    prompts.push_back({{"id", p.id}, {"text", p.text}, {"category", category}});
  }
  return {{"version", battery.version}, {"prompts", prompts}};
}

void validate_battery(const Battery& battery) {
  std::set<std::string> ids;
  for (const PromptSpec& p : battery.prompts) {
    if (p.text.empty()) {
      throw ValidationError(fmt::format("prompt {} has empty text", p.id));
    }
    if (!is_printable_ascii(p.text)) {
      throw ValidationError(
          fmt::format("prompt {} text is not printable ASCII", p.id));
    }
    if (!ids.insert(p.id).second) {
      throw ValidationError(fmt::format("duplicate prompt id {}", p.id));
    }
    // Ids carry their category so stored runs can be analyzed without the
    // battery file.
    auto from_id = category_from_id(p.id);
    if (!from_id || !(*from_id == p.category) ||
        p.id.size() <= p.category.slug().size() + 1) {
      throw ValidationError(fmt::format(
          "prompt id {} must have the form {}.<n>", p.id, p.category.slug()));
    }
  }
  for (const PromptCategory& c : all_categories()) {
    const auto count = std::count_if(
        battery.prompts.begin(), battery.prompts.end(),
        [&](const PromptSpec& p) { return p.category == c; });
    if (static_cast<std::size_t>(count) != kPromptsPerCategory) {
      throw ValidationError(fmt::format("{} has {} prompts, expected {}",
                                        c.describe(), count,
                                        kPromptsPerCategory));
    }
  }
}

std::vector<PromptSpec> prompts_for(const Battery& battery,
                                    const std::optional<PromptCategory>& filter) {
  std::vector<PromptSpec> out;
  for (const PromptSpec& p : battery.prompts) {
    if (!filter || p.category == *filter) out.push_back(p);
  }
  return out;
}

std::vector<PromptSpec> prompts_in(const Battery& battery, QuestionSet set) {
  std::vector<PromptSpec> out;
  for (const PromptSpec& p : battery.prompts) {
    if (p.category.set == set) out.push_back(p);
  }
  return out;
}

}  // namespace persona
