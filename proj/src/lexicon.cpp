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

#include "persona/lexicon.hpp"

#include <array>

#include "persona/error.hpp"

namespace persona {

namespace {

constexpr std::array<std::string_view, 12> kOpennessHigh = {
    "curious",  "imaginative", "creative", "artistic", "inventive", "poetic",
    "original", "visionary",   "novel",    "exploring", "philosophical",
    "adventurous"};
constexpr std::array<std::string_view, 12> kOpennessLow = {
    "conventional", "routine",   "familiar", "traditional", "predictable",
    "literal",      "habitual",  "ordinary", "unchanging",  "narrow",
    "cautious",     "repetitive"};

constexpr std::array<std::string_view, 12> kConscientiousnessHigh = {
    "organized", "diligent", "punctual", "thorough", "disciplined", "careful",
    "methodical", "reliable", "tidy",    "precise",  "planned",     "responsible"};
constexpr std::array<std::string_view, 12> kConscientiousnessLow = {
    "chaotic",  "careless",     "messy",    "lazy",      "sloppy",    "forgetful",
    "disorganized", "impulsive", "tardy",   "haphazard", "negligent", "scattered"};

constexpr std::array<std::string_view, 12> kExtraversionHigh = {
    "outgoing", "talkative", "energetic",  "sociable",  "lively",    "partying",
    "bold",     "enthusiastic", "gregarious", "loud",   "assertive", "chatty"};
constexpr std::array<std::string_view, 12> kExtraversionLow = {
    "quiet",   "reserved", "shy",     "solitary", "withdrawn", "introverted",
    "silent",  "private",  "aloof",   "timid",    "passive",   "distant"};

constexpr std::array<std::string_view, 12> kAgreeablenessHigh = {
    "kind",     "warm",     "generous", "helpful", "compassionate", "friendly",
    "trusting", "gentle",   "caring",   "patient", "forgiving",     "polite"};
constexpr std::array<std::string_view, 12> kAgreeablenessLow = {
    "rude",    "hostile",  "selfish",  "cold",     "harsh",    "critical",
    "stubborn", "cynical", "arrogant", "spiteful", "demanding", "blunt"};

constexpr std::array<std::string_view, 12> kNeuroticismHigh = {
    "anxious", "worried", "nervous", "tense",     "moody",    "insecure",
    "fearful", "upset",   "irritable", "panicked", "gloomy",  "restless"};
constexpr std::array<std::string_view, 12> kNeuroticismLow = {
    "calm",    "relaxed", "steady", "secure",    "composed",   "serene",
    "content", "stable",  "peaceful", "confident", "unbothered", "resilient"};

constexpr std::array<std::string_view, 16> kFillers = {
    "and", "also", "mostly", "quite", "very", "often", "being", "usually",
    "people", "say", "feel", "seem", "rather", "really", "sometimes", "the"};

const std::array<TraitLexicon, kHeadCount> kLexicons = {{
    {kOpennessHigh, kOpennessLow},
    {kConscientiousnessHigh, kConscientiousnessLow},
    {kExtraversionHigh, kExtraversionLow},
    {kAgreeablenessHigh, kAgreeablenessLow},
    {kNeuroticismHigh, kNeuroticismLow},
}};

}  // namespace

const TraitLexicon& lexicon_for(Trait head) {
  if (!is_head(head)) {
    throw PreconditionError("emotional stability has no lexicon of its own");
  }
  return kLexicons[index_of(head)];
}

std::span<const std::string_view> filler_words() { return kFillers; }

}  // namespace persona
