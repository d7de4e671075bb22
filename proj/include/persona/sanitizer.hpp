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

#include <cstddef>
#include <string>
#include <string_view>

namespace persona {

// Longest whitespace-delimited token kept in sanitized text.
inline constexpr std::size_t kMaxTokenLength = 20;
// Largest trailing block (in tokens) considered for repetition trimming.
inline constexpr std::size_t kMaxRepeatBlock = 5;
// A trailing block must occur at least this many times in a row to be trimmed.
inline constexpr std::size_t kMinRepeats = 3;

struct SanitizeReport {
  std::string input_text;
  std::string output_text;
  std::size_t removed_non_ascii = 0;
  bool trimmed_repetition = false;
  std::size_t removed_long_tokens = 0;
};

// Cleans generated text before classification, in three passes:
//   1. delete every byte outside 0x20-0x7E except '\n' and '\t';
//   2. drop whitespace-delimited tokens longer than kMaxTokenLength;
//   3. collapse a trailing block of 1-5 tokens repeated three or more times
//      in a row down to its first occurrence, repeating until no such block
//      remains. When several blocks qualify, the one covering the longest
//      trailing span wins, ties going to the shorter block.
// The result is idempotent and clean input comes back unchanged.
SanitizeReport sanitize(std::string_view text);

}  // namespace persona
