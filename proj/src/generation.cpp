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

#include "persona/generation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "persona/error.hpp"
#include "persona/http_backend.hpp"
#include "persona/mock_backend.hpp"
#include "persona/sanitizer.hpp"
#include "persona/url.hpp"

namespace persona {

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(fmt::format("field {} has the wrong type", key));
  }
}

std::string_view profile_name(MockProfile p) {
  return p == MockProfile::kNoisy ? "noisy" : "trait_biased";
}

std::string_view style_name(WireStyle s) {
  return s == WireStyle::kChat ? "chat" : "completion";
}

}  // namespace

void SamplingConfig::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ConfigError(fmt::format("sampling.temperature must be positive, got {}", temperature));
  }
  if (top_k < 1) {
    throw ConfigError(fmt::format("sampling.top_k must be a positive integer, got {}", top_k));
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) {
    throw ConfigError(fmt::format("sampling.top_p must lie in (0, 1], got {}", top_p));
  }
  if (max_tokens < 1) {
    throw ConfigError(fmt::format("sampling.max_tokens must be a positive integer, got {}",
                                  max_tokens));
  }
}

nlohmann::json SamplingConfig::to_json() const {
  return {{"temperature", temperature},
          {"top_k", top_k},
          {"top_p", top_p},
          {"max_tokens", max_tokens}};
}

SamplingConfig SamplingConfig::from_json(const nlohmann::json& j) {
  SamplingConfig c;
  c.temperature = get_or(j, "temperature", c.temperature);
  c.top_k = get_or(j, "top_k", c.top_k);
  c.top_p = get_or(j, "top_p", c.top_p);
  c.max_tokens = get_or(j, "max_tokens", c.max_tokens);
  c.validate();
  return c;
}

std::string_view BackendSpec::kind() const {
  return is_mock() ? "mock" : "http_completion";
}

nlohmann::json BackendSpec::to_json() const {
  if (const auto* m = std::get_if<MockBackendSpec>(&config)) {
    return {{"kind", "mock"},
            {"seed", m->seed},
            {"profile", profile_name(m->profile)},
            {"effect", m->effect},
            {"words_per_trait", m->words_per_trait},
            {"latency_ms", m->latency_ms}};
  }
  const auto& h = std::get<HttpBackendSpec>(config);
  return {{"kind", "http_completion"},
          {"endpoint", h.endpoint},
          {"model", h.model},
          {"auth_env", h.auth_env},
          {"timeout_ms", h.timeout.count()},
          {"max_retries", h.max_retries},
          {"backoff_base_s", h.backoff_base_s},
          {"max_concurrent", h.max_concurrent},
          {"style", style_name(h.style)}};
}

BackendSpec BackendSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("backend must be an object");
  const auto kind = get_or<std::string>(j, "kind", "");
  if (kind == "mock") {
    MockBackendSpec m;
    m.seed = get_or<std::uint64_t>(j, "seed", m.seed);
    const auto profile = get_or<std::string>(j, "profile", "trait_biased");
    if (profile == "trait_biased") {
      m.profile = MockProfile::kTraitBiased;
    } else if (profile == "noisy") {
      m.profile = MockProfile::kNoisy;
    } else {
      throw ConfigError(fmt::format("backend.profile: unknown mock profile \"{}\"", profile));
    }
    m.effect = get_or(j, "effect", m.effect);
    m.words_per_trait = get_or(j, "words_per_trait", m.words_per_trait);
    m.latency_ms = get_or(j, "latency_ms", m.latency_ms);
    if (!(std::abs(m.effect) < 0.5)) {
      throw ConfigError("backend.effect must lie in (-0.5, 0.5)");
    }
    if (m.words_per_trait < 1) throw ConfigError("backend.words_per_trait must be positive");
    if (m.latency_ms < 0) throw ConfigError("backend.latency_ms must not be negative");
    return {m};
  }
  if (kind == "http_completion") {
    HttpBackendSpec h;
    h.endpoint = get_or<std::string>(j, "endpoint", "");
    if (h.endpoint.empty()) throw ConfigError("backend.endpoint is required");
    try {
      parse_url(h.endpoint);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("backend.endpoint: {}", e.what()));
    }
    h.model = get_or<std::string>(j, "model", "");
    if (h.model.empty()) throw ConfigError("backend.model is required");
    h.auth_env = get_or<std::string>(j, "auth_env", "");
    h.timeout = std::chrono::milliseconds(get_or<long long>(j, "timeout_ms", h.timeout.count()));
    h.max_retries = get_or(j, "max_retries", h.max_retries);
    if (h.max_retries < 0) throw ConfigError("backend.max_retries must be >= 0");
    h.backoff_base_s = get_or(j, "backoff_base_s", h.backoff_base_s);
    if (h.backoff_base_s < 0.0) throw ConfigError("backend.backoff_base_s must be >= 0");
    h.max_concurrent = get_or<std::size_t>(j, "max_concurrent", h.max_concurrent);
    if (h.max_concurrent < 1) throw ConfigError("backend.max_concurrent must be positive");
    const auto style = get_or<std::string>(j, "style", "completion");
    if (style == "completion") {
      h.style = WireStyle::kCompletion;
    } else if (style == "chat") {
      h.style = WireStyle::kChat;
    } else {
      throw ConfigError(fmt::format("backend.style: unknown style \"{}\"", style));
    }
    return {h};
  }
  throw ConfigError(fmt::format(
      "backend.kind: expected \"mock\" or \"http_completion\", got \"{}\"", kind));
}

nlohmann::json GenerationRecord::to_json() const {
  nlohmann::json j = {{"prompt_id", prompt_id},
                      {"model_id", model_id},
                      {"completion_index", completion_index},
                      {"raw_text", raw_text},
                      {"sanitized_text", sanitized_text},
                      {"created_at", created_at},
                      {"backend_kind", backend_kind}};
  j["error"] = error ? nlohmann::json(*error) : nlohmann::json(nullptr);
  return j;
}

GenerationRecord GenerationRecord::from_json(const nlohmann::json& j) {
  GenerationRecord r;
  r.prompt_id = j.at("prompt_id").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.completion_index = j.at("completion_index").get<std::size_t>();
  r.raw_text = j.at("raw_text").get<std::string>();
  r.sanitized_text = j.at("sanitized_text").get<std::string>();
  r.created_at = j.at("created_at").get<std::string>();
  r.backend_kind = j.at("backend_kind").get<std::string>();
  if (j.contains("error") && !j.at("error").is_null()) {
    r.error = j.at("error").get<std::string>();
  }
  return r;
}

Clock system_clock() {
  return [] {
    const auto now = std::chrono::system_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        now.time_since_epoch()) % 1000;
    return fmt::format("{:%Y-%m-%dT%H:%M:%S}.{:03d}Z",
                       fmt::gmtime(std::chrono::system_clock::to_time_t(now)),
                       static_cast<int>(ms.count()));
  };
}

Clock fixed_clock(std::string timestamp) {
  return [ts = std::move(timestamp)] { return ts; };
}

std::size_t count_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

std::unique_ptr<CompletionBackend> make_backend(const BackendSpec& spec,
                                                std::uint64_t run_seed) {
  if (const auto* m = std::get_if<MockBackendSpec>(&spec.config)) {
    return std::make_unique<MockBackend>(*m);
  }
  return std::make_unique<HttpBackend>(std::get<HttpBackendSpec>(spec.config),
                                       run_seed);
}

std::vector<GenerationRecord> generate_indices(CompletionBackend& backend,
                                               const PromptSpec& prompt,
                                               const SamplingConfig& config,
                                               std::span<const std::size_t> indices,
                                               const GenerateOptions& options) {
  config.validate();
  if (options.parallelism < 1) throw ConfigError("parallelism must be positive");
  const Clock clock = options.clock ? options.clock : system_clock();

  std::vector<GenerationRecord> out(indices.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr auth_failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t slot = next.fetch_add(1);
      if (slot >= indices.size()) return;
      GenerationRecord& rec = out[slot];
      rec.prompt_id = prompt.id;
      rec.model_id = options.model_id;
      rec.completion_index = indices[slot];
      rec.backend_kind = std::string(backend.kind());
      try {
        rec.raw_text = backend.complete(prompt, indices[slot], config);
        rec.sanitized_text = sanitize(rec.raw_text).output_text;
      } catch (const TransportError& e) {
        rec.error = e.cause();
      } catch (const AuthError&) {
        std::lock_guard lock(failure_mu);
        if (!auth_failure) auth_failure = std::current_exception();
        abort.store(true);
        return;
      }
      rec.created_at = clock();
    }
  };

  const std::size_t threads = std::min(options.parallelism, indices.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (auth_failure) std::rethrow_exception(auth_failure);
  return out;
}

std::vector<GenerationRecord> generate(CompletionBackend& backend,
                                       const PromptSpec& prompt,
                                       const SamplingConfig& config,
                                       std::size_t n,
                                       const GenerateOptions& options) {
  if (n < 1) throw ConfigError("n must be at least 1");
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  return generate_indices(backend, prompt, config, indices, options);
}

}  // namespace persona
