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

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "persona/battery.hpp"

namespace persona {

// Sampling parameters sent with every completion request.
struct SamplingConfig {
  double temperature = 1.0;
  int top_k = 40;
  double top_p = 0.95;
  int max_tokens = 128;

  // Throws ConfigError naming the offending field.
  void validate() const;
  nlohmann::json to_json() const;
  // Missing fields keep their defaults.
  static SamplingConfig from_json(const nlohmann::json& j);
  friend bool operator==(const SamplingConfig&, const SamplingConfig&) = default;
};

enum class WireStyle {
  kCompletion,  // {model, prompt, ...} -> choices[0].text
  kChat,        // stem wrapped in a user message -> choices[0].message.content
};

struct HttpBackendSpec {
  std::string endpoint;  // absolute URL of the completion route
  std::string model;
  std::string auth_env;  // name of the variable holding the bearer token
  std::chrono::milliseconds timeout{60000};
  int max_retries = 2;          // attempts = max_retries + 1
  double backoff_base_s = 0.5;  // first retry waits about this long
  std::size_t max_concurrent = 4;
  WireStyle style = WireStyle::kCompletion;
};

enum class MockProfile {
  kTraitBiased,  // lexicon words only
  kNoisy,        // also emits artifacts the sanitizer removes
};

struct MockBackendSpec {
  std::uint64_t seed = 0;
  MockProfile profile = MockProfile::kTraitBiased;
  double effect = 0.2;        // shift of the target head's high-word share
  int words_per_trait = 6;    // lexicon words per head per completion
  int latency_ms = 0;         // artificial per-completion delay
};

struct BackendSpec {
  std::variant<HttpBackendSpec, MockBackendSpec> config;

  bool is_mock() const { return std::holds_alternative<MockBackendSpec>(config); }
  // "mock" or "http_completion".
  std::string_view kind() const;
  // Never contains a secret, only the auth variable's name.
  nlohmann::json to_json() const;
  static BackendSpec from_json(const nlohmann::json& j);
};

// One sanitized completion. Failed completions keep their slot with `error`
// set and empty text, so counts are conserved.
struct GenerationRecord {
  std::string prompt_id;
  std::string model_id;
  std::size_t completion_index = 0;
  std::string raw_text;
  std::string sanitized_text;
  std::string created_at;  // UTC, ISO 8601
  std::string backend_kind;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
  nlohmann::json to_json() const;
  static GenerationRecord from_json(const nlohmann::json& j);
  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

// Source of created_at timestamps.
using Clock = std::function<std::string()>;
Clock system_clock();
Clock fixed_clock(std::string timestamp);

// A completion endpoint. Implementations must be callable concurrently.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string_view kind() const = 0;
  // Returns the completion only, without the stem. Throws TransportError for
  // a failed completion (after retries) and AuthError for rejected
  // credentials.
  virtual std::string complete(const PromptSpec& prompt, std::size_t index,
                               const SamplingConfig& config) = 0;
};

// `run_seed` seeds retry jitter for HTTP backends.
std::unique_ptr<CompletionBackend> make_backend(const BackendSpec& spec,
                                                std::uint64_t run_seed = 0);

struct GenerateOptions {
  std::string model_id;
  std::size_t parallelism = 1;
  Clock clock;  // defaults to system_clock()
};

// Exactly one record per requested index, in the order given, regardless of
// completion order. Transport failures become error records; an AuthError
// stops the fan-out and is rethrown.
std::vector<GenerationRecord> generate_indices(CompletionBackend& backend,
                                               const PromptSpec& prompt,
                                               const SamplingConfig& config,
                                               std::span<const std::size_t> indices,
                                               const GenerateOptions& options);

// Indices 0..n-1.
std::vector<GenerationRecord> generate(CompletionBackend& backend,
                                       const PromptSpec& prompt,
                                       const SamplingConfig& config,
                                       std::size_t n,
                                       const GenerateOptions& options);

// Number of whitespace-delimited tokens.
std::size_t count_tokens(std::string_view text);

}  // namespace persona
