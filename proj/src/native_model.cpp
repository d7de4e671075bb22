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

#include "persona/native_model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "persona/error.hpp"
#include "persona/hash.hpp"
#include "persona/kernels.hpp"
#include "persona/lexicon.hpp"

namespace persona {

namespace {

constexpr std::string_view kFormat = "persona-native-v1";

nlohmann::json tokenizer_to_json(const TokenizerSpec& t) {
  return {{"lowercase", t.lowercase},
          {"split", "non_alphanumeric"},
          {"min_length", t.min_length},
          {"norm", t.norm == FeatureNorm::kL2 ? "l2" : "none"}};
}

TokenizerSpec tokenizer_from_json(const nlohmann::json& j) {
  TokenizerSpec t;
  t.lowercase = j.at("lowercase").get<bool>();
  if (j.at("split").get<std::string>() != "non_alphanumeric") {
    throw ParseError("model: unsupported tokenizer split rule");
  }
  t.min_length = j.at("min_length").get<std::size_t>();
  const auto norm = j.at("norm").get<std::string>();
  if (norm == "l2") {
    t.norm = FeatureNorm::kL2;
  } else if (norm == "none") {
    t.norm = FeatureNorm::kNone;
  } else {
    throw ParseError(fmt::format("model: unknown norm \"{}\"", norm));
  }
  return t;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerSpec& spec) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.size() >= spec.min_length) out.push_back(current);
    current.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current.push_back(spec.lowercase ? static_cast<char>(std::tolower(u)) : c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<double> tfidf_features(
    const std::vector<std::string>& tokens,
    const std::unordered_map<std::string, std::size_t>& index,
    const std::vector<double>& idf, FeatureNorm norm) {
  std::vector<double> x(idf.size(), 0.0);
  for (const std::string& tok : tokens) {
    if (auto it = index.find(tok); it != index.end()) x[it->second] += 1.0;
  }
  for (std::size_t j = 0; j < x.size(); ++j) x[j] *= idf[j];
  if (norm == FeatureNorm::kL2) {
    const double sq = kernels::dot(x, x);
    if (sq > 0.0) kernels::scale(1.0 / std::sqrt(sq), x);
  }
  return x;
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

NativeModel::NativeModel(TokenizerSpec tokenizer,
                         std::array<TraitHead, kHeadCount> heads)
    : tokenizer_(tokenizer), heads_(std::move(heads)) {
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    const TraitHead& head = heads_[h];
    const std::string_view name = trait_name(kHeadTraits[h]);
    if (head.idf.size() != head.vocab.size() ||
        head.coef.size() != head.vocab.size()) {
      throw ValidationError(fmt::format(
          "model head {}: vocab ({}), idf ({}) and coef ({}) lengths differ",
          name, head.vocab.size(), head.idf.size(), head.coef.size()));
    }
    for (std::size_t j = 0; j < head.vocab.size(); ++j) {
      if (!index_[h].emplace(head.vocab[j], j).second) {
        throw ValidationError(fmt::format("model head {}: duplicate token \"{}\"",
                                          name, head.vocab[j]));
      }
    }
  }
  id_ = "sha256:" + sha256_hex(serialize());
}

NativeModel NativeModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw ParseError("model: unsupported format");
    }
    TokenizerSpec tokenizer = tokenizer_from_json(j.at("tokenizer"));
    std::array<TraitHead, kHeadCount> heads;
    const auto& per_trait = j.at("per_trait");
    for (Trait t : kHeadTraits) {
      const auto& h = per_trait.at(std::string(trait_name(t)));
      TraitHead& head = heads[index_of(t)];
      head.vocab = h.at("vocab").get<std::vector<std::string>>();
      head.idf = h.at("idf").get<std::vector<double>>();
      head.coef = h.at("coef").get<std::vector<double>>();
      head.intercept = h.at("intercept").get<double>();
    }
    return NativeModel(tokenizer, std::move(heads));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("model: {}", e.what()));
  }
}

NativeModel NativeModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(fmt::format("cannot open model file {}", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(nlohmann::json::parse(buf.str()));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

nlohmann::json NativeModel::to_json() const {
  nlohmann::json per_trait = nlohmann::json::object();
  for (Trait t : kHeadTraits) {
    const TraitHead& h = head(t);
    per_trait[std::string(trait_name(t))] = {{"vocab", h.vocab},
                                             {"idf", h.idf},
                                             {"coef", h.coef},
                                             {"intercept", h.intercept}};
  }
  return {{"format", kFormat},
          {"tokenizer", tokenizer_to_json(tokenizer_)},
          {"per_trait", per_trait}};
}

std::string NativeModel::serialize() const { return to_json().dump(); }

void NativeModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError(fmt::format("cannot write model file {}", path.string()));
  }
  out << serialize() << '\n';
}

TraitScores NativeModel::score_tokens(
    const std::vector<std::string>& tokens) const {
  std::array<double, kHeadCount> p{};
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    const TraitHead& head = heads_[h];
    const auto x = tfidf_features(tokens, index_[h], head.idf, tokenizer_.norm);
    p[h] = logistic(head.intercept + kernels::dot(head.coef, x));
  }
  return TraitScores(p);
}

TraitScores NativeModel::score(std::string_view text) const {
  if (!is_scorable(text)) throw UnscorableError("text is empty");
  return score_tokens(tokenize(text, tokenizer_));
}

std::vector<ScoreResult> NativeModel::score_batch(
    std::span<const std::string> texts) const {
  std::vector<ScoreResult> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    if (!is_scorable(text)) {
      out.push_back({std::nullopt, "text is empty"});
    } else {
      out.push_back({score_tokens(tokenize(text, tokenizer_)), {}});
    }
  }
  return out;
}

NativeModel zero_model() {
  return NativeModel(TokenizerSpec{}, std::array<TraitHead, kHeadCount>{});
}

double lexicon_expected_probability(int words_per_trait, double p_high,
                                    double gain) {
  // k ~ Binomial(m, p_high) high words; logit = gain * (k - (m - k)).
  const int m = words_per_trait;
  double expected = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double log_choose =
        std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
    const double pk = std::exp(log_choose + k * std::log(p_high) +
                               (m - k) * std::log1p(-p_high));
    expected += pk * logistic(gain * (2.0 * k - m));
  }
  return expected;
}

NativeModel calibrated_lexicon_model(int words_per_trait, double shift) {
  if (words_per_trait < 1 || !(std::abs(shift) > 0.0) || std::abs(shift) >= 0.5) {
    throw PreconditionError(
        "lexicon model needs words_per_trait >= 1 and 0 < |shift| < 0.5");
  }
  const double p_high = 0.5 + std::abs(shift);
  const double target = p_high;
  // Expected probability rises monotonically with the gain.
  double lo = 0.0;
  double hi = 1.0;
  while (lexicon_expected_probability(words_per_trait, p_high, hi) < target) {
    hi *= 2.0;
    if (hi > 1e6) {
      throw PreconditionError(fmt::format(
          "lexicon model: shift {} is unreachable with {} words per trait",
          shift, words_per_trait));
    }
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (lexicon_expected_probability(words_per_trait, p_high, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double gain = 0.5 * (lo + hi);

  TokenizerSpec tokenizer;
  tokenizer.norm = FeatureNorm::kNone;
  std::array<TraitHead, kHeadCount> heads;
  for (Trait t : kHeadTraits) {
    TraitHead& head = heads[index_of(t)];
    const TraitLexicon& lex = lexicon_for(t);
    for (std::string_view w : lex.high) {
      head.vocab.emplace_back(w);
      head.coef.push_back(gain);
    }
    for (std::string_view w : lex.low) {
      head.vocab.emplace_back(w);
      head.coef.push_back(-gain);
    }
    head.idf.assign(head.vocab.size(), 1.0);
  }
  return NativeModel(tokenizer, std::move(heads));
}

}  // namespace persona
