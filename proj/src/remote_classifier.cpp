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

#include "persona/remote_classifier.hpp"

#include <httplib.h>

#include <fmt/format.h>

#include "persona/error.hpp"

namespace persona {

namespace {

std::unique_ptr<httplib::Client> make_client(const ParsedUrl& url,
                                             std::chrono::milliseconds timeout) {
  auto client = std::make_unique<httplib::Client>(url.origin);
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  return client;
}

std::string describe(const httplib::Result& res) {
  if (!res) return fmt::format("transport: {}", httplib::to_string(res.error()));
  return fmt::format("HTTP {}", res->status);
}

}  // namespace

ParsedUrl parse_url(std::string_view url) {
  const auto sep = url.find("://");
  if (sep == std::string_view::npos) {
    throw ConfigError(fmt::format("\"{}\" is not an absolute URL", url));
  }
  ParsedUrl out;
  out.scheme = std::string(url.substr(0, sep));
  if (out.scheme != "http" && out.scheme != "https") {
    throw ConfigError(fmt::format("unsupported URL scheme in \"{}\"", url));
  }
  const auto rest = url.substr(sep + 3);
  const auto slash = rest.find('/');
  const auto host = rest.substr(0, slash);
  if (host.empty()) {
    throw ConfigError(fmt::format("URL \"{}\" has no host", url));
  }
  out.origin = fmt::format("{}://{}", out.scheme, host);
  out.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  return out;
}

std::string join_path(std::string_view base, std::string_view suffix) {
  std::string out(base);
  while (!out.empty() && out.back() == '/') out.pop_back();
  if (!suffix.empty() && suffix.front() != '/') out.push_back('/');
  out.append(suffix);
  return out;
}

TraitScores scores_from_wire(const nlohmann::json& j) {
  std::array<double, kHeadCount> heads{};
  for (Trait t : kHeadTraits) {
    const auto& v = j.at(std::string(trait_name(t)));
    if (!v.is_number()) {
      throw ParseError(fmt::format("score field {} is not a number",
                                   trait_name(t)));
    }
    const double p = v.get<double>();
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ParseError(fmt::format("score field {} = {} is outside [0, 1]",
                                   trait_name(t), p));
    }
    heads[index_of(t)] = p;
  }
  return TraitScores(heads);
}

nlohmann::json scores_to_wire(const TraitScores& s) {
  nlohmann::json j = nlohmann::json::object();
  for (Trait t : kHeadTraits) j[std::string(trait_name(t))] = s[t];
  return j;
}

RemoteClassifier::RemoteClassifier(std::string base_url,
                                   std::chrono::milliseconds timeout,
                                   std::size_t batch_size)
    : url_(parse_url(base_url)), timeout_(timeout), batch_size_(batch_size) {
  if (batch_size_ == 0) throw ConfigError("scoring batch size must be positive");
  auto client = make_client(url_, timeout_);
  auto res = client->Get(join_path(url_.path, "health"));
  if (!res || res->status != 200) {
    throw TransportError(fmt::format("scoring service {} not ready ({})",
                                     base_url, describe(res)));
  }
  try {
    const auto j = nlohmann::json::parse(res->body);
    if (j.at("status").get<std::string>() != "ok") {
      throw TransportError("scoring service reports status " +
                           j.at("status").get<std::string>());
    }
    id_ = j.at("classifier_id").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(fmt::format("bad /health response: {}", e.what()));
  }
}

std::vector<TraitScores> RemoteClassifier::post_chunk(
    std::span<const std::string> texts) const {
  nlohmann::json body = {{"texts", nlohmann::json::array()}};
  for (const std::string& t : texts) body["texts"].push_back(t);
  auto client = make_client(url_, timeout_);
  auto res = client->Post(join_path(url_.path, "score"), body.dump(),
                          "application/json");
  if (!res || res->status != 200) {
    throw TransportError(fmt::format("/score failed: {}", describe(res)));
  }
  std::vector<TraitScores> out;
  try {
    const auto j = nlohmann::json::parse(res->body);
    const auto& scores = j.at("scores");
    if (!scores.is_array() || scores.size() != texts.size()) {
      throw TransportError(fmt::format(
          "/score returned {} scores for {} texts",
          scores.is_array() ? scores.size() : 0, texts.size()));
    }
    for (const auto& s : scores) out.push_back(scores_from_wire(s));
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(fmt::format("bad /score response: {}", e.what()));
  } catch (const ParseError& e) {
    throw TransportError(fmt::format("bad /score response: {}", e.what()));
  }
  return out;
}

TraitScores RemoteClassifier::score(std::string_view text) const {
  if (!is_scorable(text)) throw UnscorableError("text is empty");
  const std::string copy(text);
  return post_chunk(std::span<const std::string>(&copy, 1)).front();
}

std::vector<ScoreResult> RemoteClassifier::score_batch(
    std::span<const std::string> texts) const {
  std::vector<ScoreResult> out(texts.size());
  // Empty texts never go over the wire.
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (is_scorable(texts[i])) {
      pending.push_back(i);
    } else {
      out[i].error = "text is empty";
    }
  }
  for (std::size_t start = 0; start < pending.size(); start += batch_size_) {
    const std::size_t end = std::min(pending.size(), start + batch_size_);
    std::vector<std::string> chunk;
    for (std::size_t k = start; k < end; ++k) chunk.push_back(texts[pending[k]]);
    try {
      auto scores = post_chunk(chunk);
      for (std::size_t k = start; k < end; ++k) {
        out[pending[k]].scores = scores[k - start];
      }
    } catch (const TransportError& e) {
      for (std::size_t k = start; k < end; ++k) out[pending[k]].error = e.cause();
    }
  }
  return out;
}

}  // namespace persona
