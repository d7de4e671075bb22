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

#include <span>
#include <string_view>

#include "persona/trait.hpp"

namespace persona {

// Trait-marked vocabulary shared by the mock generator, the synthetic
// training corpus and the calibrated lexicon model. No word here appears in
// any battery stem, so stems score as neutral under the lexicon model.
struct TraitLexicon {
  std::span<const std::string_view> high;  // marks a high score on the head
  std::span<const std::string_view> low;   // marks a low score on the head
};

// Lexicon for one classifier head (not emotional stability).
const TraitLexicon& lexicon_for(Trait head);

// Trait-neutral connective words.
std::span<const std::string_view> filler_words();

}  // namespace persona
