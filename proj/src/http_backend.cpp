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

#include "persona/http_backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>

#include "persona/error.hpp"

namespace persona {

namespace {

constexpr double kMaxBackoffSeconds = 30.0;

constexpr std::string_view kChatInstruction =
    "Complete the following sentence. Reply with the continuation only, "
    "without repeating the beginning.\n\n";

// Releases a semaphore slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

std::string transport_cause(httplib::Error err) {
  switch (err) {
    case httplib::Error::ConnectionTimeout:
    case httplib::Error::Read:
    case httplib::Error::Write:
      return "timeout";
    case httplib::Error::Connection:
      return "connection failed";
    default:
      return fmt::format("transport error: {}", httplib::to_string(err));
  }
}

}  // namespace

std::chrono::duration<double> backoff_delay(double base_s, int attempt,
                                            double jitter_unit) {
  const double raw = base_s * std::ldexp(1.0, attempt) * (0.5 + 0.5 * jitter_unit);
  return std::chrono::duration<double>(std::min(raw, kMaxBackoffSeconds));
}

HttpBackend::HttpBackend(HttpBackendSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)),
      url_(parse_url(spec_.endpoint)),
      slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, spec_.max_concurrent))),
      rng_(seed) {
  if (!spec_.auth_env.empty()) {
    const char* token = std::getenv(spec_.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ConfigError(fmt::format("environment variable {} (backend.auth_env) is not set",
                                    spec_.auth_env));
    }
    token_ = token;
  }
}

double HttpBackend::next_jitter() {
  std::lock_guard lock(rng_mu_);
  return rng_.uniform();
}

nlohmann::json HttpBackend::request_body(const HttpBackendSpec& spec,
                                         const PromptSpec& prompt,
                                         const SamplingConfig& config) {
  nlohmann::json body = {{"model", spec.model},
                         {"temperature", config.temperature},
                         {"top_k", config.top_k},
                         {"top_p", config.top_p},
                         {"max_tokens", config.max_tokens},
                         {"n", 1}};
  if (spec.style == WireStyle::kChat) {
    body["messages"] = nlohmann::json::array(
        {{{"role", "user"},
          {"content", std::string(kChatInstruction) + prompt.text}}});
  } else {
    body["prompt"] = prompt.text;
  }
  return body;
}

std::string HttpBackend::parse_response(WireStyle style, const PromptSpec& prompt,
                                        const std::string& body) {
  std::string text;
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& choice = j.at("choices").at(0);
    text = style == WireStyle::kChat
               ? choice.at("message").at("content").get<std::string>()
               : choice.at("text").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw TransportError("bad response");
  }
  if (text.rfind(prompt.text, 0) == 0) text.erase(0, prompt.text.size());
  return text;
}

std::string HttpBackend::complete(const PromptSpec& prompt, std::size_t /*index*/,
                                  const SamplingConfig& config) {
  SlotGuard slot(slots_);
  const std::string body = request_body(spec_, prompt, config).dump();
  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  std::string cause;
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          backoff_delay(spec_.backoff_base_s, attempt - 1, next_jitter()));
    }
    httplib::Client client(url_.origin);
    client.set_connection_timeout(spec_.timeout);
    client.set_read_timeout(spec_.timeout);
    client.set_write_timeout(spec_.timeout);
    auto res = client.Post(url_.path, headers, body, "application/json");
    if (!res) {
      cause = transport_cause(res.error());
      continue;
    }
    const int status = res->status;
    if (status == 200) return parse_response(spec_.style, prompt, res->body);
    if (status == 401 || status == 403) {
      throw AuthError(fmt::format("{} rejected the credentials (HTTP {})",
                                  spec_.endpoint, status));
    }
    if (status == 429) {
      cause = "rate limited";
    } else if (status >= 500) {
      cause = "server error";
    } else {
      throw TransportError(fmt::format("client error {}", status));
    }
  }
  throw TransportError(cause);
}

}  // namespace persona
