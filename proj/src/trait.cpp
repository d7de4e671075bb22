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

#include "persona/trait.hpp"

namespace persona {

namespace {

constexpr std::array<std::string_view, kTraitCount> kNames = {
    "openness",      "conscientiousness", "extraversion",
    "agreeableness", "neuroticism",       "emotional_stability"};

constexpr std::array<std::string_view, kTraitCount> kTitles = {
    "Openness",      "Conscientiousness", "Extraversion",
    "Agreeableness", "Neuroticism",       "Emotional Stability"};

constexpr std::array<std::string_view, kHeadCount> kLabels = {
    "cOPN", "cCON", "cEXT", "cAGR", "cNEU"};

}  // namespace

std::string_view trait_name(Trait t) { return kNames[index_of(t)]; }

std::string_view trait_title(Trait t) { return kTitles[index_of(t)]; }

std::string_view trait_label(Trait t) {
  return is_head(t) ? kLabels[index_of(t)] : std::string_view{};
}

std::optional<Trait> parse_trait(std::string_view name) {
  for (Trait t : kAllTraits) {
    if (kNames[index_of(t)] == name) return t;
  }
  return std::nullopt;
}

std::optional<Trait> parse_trait_label(std::string_view label) {
  for (Trait t : kHeadTraits) {
    if (kLabels[index_of(t)] == label) return t;
  }
  return std::nullopt;
}

TraitValues TraitScores::values() const {
  TraitValues out{};
  for (Trait t : kAllTraits) out[index_of(t)] = (*this)[t];
  return out;
}

}  // namespace persona
