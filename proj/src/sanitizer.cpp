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

#include "persona/sanitizer.hpp"

#include <vector>

namespace persona {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n'; }

bool keep_byte(unsigned char c) {
  return (c >= 0x20 && c <= 0x7E) || c == '\n' || c == '\t';
}

// Byte range of one whitespace-delimited token.
struct Span {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const { return end - begin; }
};

std::vector<Span> token_spans(std::string_view text) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i == text.size()) break;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    out.push_back({begin, i});
  }
  return out;
}

std::string drop_long_tokens(std::string_view text, std::size_t& removed) {
  const auto spans = token_spans(text);
  std::string out;
  out.reserve(text.size());
  std::size_t cursor = 0;
  bool kept_any = false;
  for (const Span& s : spans) {
    if (s.size() <= kMaxTokenLength) {
      // Whitespace before the first kept token is the original leading run;
      // otherwise it is the run that preceded this token.
      out.append(text.substr(cursor, s.end - cursor));
      kept_any = true;
    } else {
      ++removed;
      if (!kept_any) {
        // Keep the leading whitespace, drop the token and the run after it.
        std::size_t j = s.end;
        while (j < text.size() && is_space(text[j])) ++j;
        out.append(text.substr(cursor, s.begin - cursor));
        cursor = j;
        continue;
      }
    }
    cursor = s.end;
  }
  out.append(text.substr(cursor));
  return out;
}

// Number of tokens removed by collapsing the best trailing repetition, and
// the index of the last token to keep. Returns false if nothing qualifies.
bool find_trailing_repeat(std::string_view text, const std::vector<Span>& spans,
                          std::size_t& keep_until) {
  const std::size_t n = spans.size();
  auto tok = [&](std::size_t i) {
    return text.substr(spans[i].begin, spans[i].size());
  };
  std::size_t best_span = 0;
  std::size_t best_block = 0;
  for (std::size_t block = 1; block <= kMaxRepeatBlock && block <= n; ++block) {
    std::size_t repeats = 1;
    while ((repeats + 1) * block <= n) {
      const std::size_t start = n - (repeats + 1) * block;
      bool same = true;
      for (std::size_t k = 0; k < block && same; ++k) {
        same = tok(start + k) == tok(n - block + k);
      }
      if (!same) break;
      ++repeats;
    }
    if (repeats >= kMinRepeats && repeats * block > best_span) {
      best_span = repeats * block;
      best_block = block;
    }
  }
  if (best_block == 0) return false;
  keep_until = n - best_span + best_block - 1;
  return true;
}

}  // namespace

SanitizeReport sanitize(std::string_view text) {
  SanitizeReport report;
  report.input_text = std::string(text);

  std::string ascii;
  ascii.reserve(text.size());
  for (char c : text) {
    if (keep_byte(static_cast<unsigned char>(c))) {
      ascii.push_back(c);
    } else {
      ++report.removed_non_ascii;
    }
  }

  std::string out = drop_long_tokens(ascii, report.removed_long_tokens);

  for (;;) {
    const auto spans = token_spans(out);
    std::size_t keep_until = 0;
    if (!find_trailing_repeat(out, spans, keep_until)) break;
    out.resize(spans[keep_until].end);
    report.trimmed_repetition = true;
  }

  report.output_text = std::move(out);
  return report;
}

}  // namespace persona
