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

#include <mutex>
#include <semaphore>
#include <string>

#include <nlohmann/json.hpp>

#include "persona/generation.hpp"
#include "persona/random.hpp"
#include "persona/url.hpp"

namespace persona {

// Delay before retry number `attempt` (0-based): base * 2^attempt scaled by a
// jitter factor in [0.5, 1), capped at 30 s.
std::chrono::duration<double> backoff_delay(double base_s, int attempt,
                                            double jitter_unit);

// One JSON request per completion against an OpenAI-style endpoint, with
// retries on 429, 5xx and transport failures. 401/403 raise AuthError. At
// most `max_concurrent` requests are in flight per backend.
class HttpBackend final : public CompletionBackend {
 public:
  // Reads the bearer token from the environment variable named by auth_env;
  // throws ConfigError if it is named but unset.
  HttpBackend(HttpBackendSpec spec, std::uint64_t seed);

  std::string_view kind() const override { return "http_completion"; }
  std::string complete(const PromptSpec& prompt, std::size_t index,
                       const SamplingConfig& config) override;

  static nlohmann::json request_body(const HttpBackendSpec& spec,
                                     const PromptSpec& prompt,
                                     const SamplingConfig& config);
  // Extracts the completion and strips an echoed stem. Throws
  // TransportError("bad response") on an unexpected shape.
  static std::string parse_response(WireStyle style, const PromptSpec& prompt,
                                    const std::string& body);

 private:
  double next_jitter();

  HttpBackendSpec spec_;
  ParsedUrl url_;
  std::string token_;
  std::counting_semaphore<> slots_;
  std::mutex rng_mu_;
  Rng rng_;
};

}  // namespace persona
