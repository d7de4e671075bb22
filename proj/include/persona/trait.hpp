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
#include <cstddef>
#include <optional>
#include <string_view>

namespace persona {

// The five classifier heads plus the derived emotional stability score.
enum class Trait {
  kOpenness = 0,
  kConscientiousness = 1,
  kExtraversion = 2,
  kAgreeableness = 3,
  kNeuroticism = 4,
  kEmotionalStability = 5,
};

inline constexpr std::size_t kHeadCount = 5;
inline constexpr std::size_t kTraitCount = 6;

// Heads in classifier order (one binary classifier each).
inline constexpr std::array<Trait, kHeadCount> kHeadTraits = {
    Trait::kOpenness, Trait::kConscientiousness, Trait::kExtraversion,
    Trait::kAgreeableness, Trait::kNeuroticism};

// Traits shown in reports; emotional stability replaces neuroticism.
inline constexpr std::array<Trait, 5> kReportTraits = {
    Trait::kOpenness, Trait::kConscientiousness, Trait::kExtraversion,
    Trait::kAgreeableness, Trait::kEmotionalStability};

inline constexpr std::array<Trait, kTraitCount> kAllTraits = {
    Trait::kOpenness,      Trait::kConscientiousness, Trait::kExtraversion,
    Trait::kAgreeableness, Trait::kNeuroticism,       Trait::kEmotionalStability};

constexpr std::size_t index_of(Trait t) { return static_cast<std::size_t>(t); }

constexpr bool is_head(Trait t) { return t != Trait::kEmotionalStability; }

// snake_case name used in every file format ("emotional_stability").
std::string_view trait_name(Trait t);
// Column title used in rendered tables ("Emotional Stability").
std::string_view trait_title(Trait t);
// Corpus column label for a head (cOPN, cCON, cEXT, cAGR, cNEU).
std::string_view trait_label(Trait t);

std::optional<Trait> parse_trait(std::string_view name);
std::optional<Trait> parse_trait_label(std::string_view label);

// One value per trait, indexed by index_of(Trait).
using TraitValues = std::array<double, kTraitCount>;

// Probabilities from the five heads. Emotional stability is not stored; it is
// always computed as 1 - neuroticism so every path derives it identically.
class TraitScores {
 public:
  TraitScores() = default;
  TraitScores(double openness, double conscientiousness, double extraversion,
              double agreeableness, double neuroticism)
      : heads_{openness, conscientiousness, extraversion, agreeableness,
               neuroticism} {}
  explicit TraitScores(const std::array<double, kHeadCount>& heads)
      : heads_(heads) {}

  double openness() const { return heads_[0]; }
  double conscientiousness() const { return heads_[1]; }
  double extraversion() const { return heads_[2]; }
  double agreeableness() const { return heads_[3]; }
  double neuroticism() const { return heads_[4]; }
  double emotional_stability() const { return 1.0 - heads_[4]; }

  double operator[](Trait t) const {
    return t == Trait::kEmotionalStability ? emotional_stability()
                                           : heads_[index_of(t)];
  }

  const std::array<double, kHeadCount>& heads() const { return heads_; }
  TraitValues values() const;

  friend bool operator==(const TraitScores&, const TraitScores&) = default;

 private:
  std::array<double, kHeadCount> heads_{};
};

}  // namespace persona
