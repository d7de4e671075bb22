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

#include <set>

#include <gtest/gtest.h>

#include "persona/battery.hpp"
#include "persona/error.hpp"
#include "persona/generation.hpp"
#include "persona/lexicon.hpp"
#include "persona/mock_backend.hpp"
#include "persona/native_model.hpp"
#include "persona/sanitizer.hpp"

namespace persona {
namespace {

const PromptSpec& prompt(std::string_view id) { return *default_battery().find(id); }

TEST(Sampling, DefaultsAndValidation) {
  const SamplingConfig c;
  EXPECT_EQ(c.temperature, 1.0);
  EXPECT_EQ(c.top_k, 40);
  EXPECT_EQ(c.top_p, 0.95);
  EXPECT_EQ(c.max_tokens, 128);
  EXPECT_NO_THROW(c.validate());
  SamplingConfig bad;
  bad.top_p = 0.0;
  try {
    bad.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("top_p"), std::string::npos);
  }
  bad = SamplingConfig{};
  bad.top_p = 1.0;
  EXPECT_NO_THROW(bad.validate());
  bad.temperature = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = SamplingConfig{};
  bad.top_k = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = SamplingConfig{};
  bad.max_tokens = -1;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Sampling, JsonRoundTripAndPartial) {
  SamplingConfig c;
  c.temperature = 0.7;
  c.max_tokens = 32;
  EXPECT_EQ(SamplingConfig::from_json(c.to_json()), c);
  const auto partial = SamplingConfig::from_json(nlohmann::json{{"top_k", 5}});
  EXPECT_EQ(partial.top_k, 5);
  EXPECT_EQ(partial.temperature, 1.0);
}

TEST(BackendSpec, JsonRoundTripWithoutSecrets) {
  HttpBackendSpec h;
  h.endpoint = "https://api.example/v1/completions";
  h.model = "gpt2";
  h.auth_env = "MY_TOKEN";
  h.style = WireStyle::kChat;
  const BackendSpec spec{h};
  const auto j = spec.to_json();
  EXPECT_EQ(j["kind"], "http_completion");
  EXPECT_EQ(j["auth_env"], "MY_TOKEN");
  const BackendSpec back = BackendSpec::from_json(j);
  EXPECT_EQ(back.to_json(), j);

  MockBackendSpec m;
  m.seed = 9;
  m.profile = MockProfile::kNoisy;
  EXPECT_EQ(BackendSpec::from_json(BackendSpec{m}.to_json()).to_json(), BackendSpec{m}.to_json());
}

TEST(BackendSpec, ErrorsNameField) {
  try {
    BackendSpec::from_json(nlohmann::json{{"kind", "http_completion"}, {"model", "x"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("backend.endpoint"), std::string::npos);
  }
  EXPECT_THROW(BackendSpec::from_json(nlohmann::json{{"kind", "carrier-pigeon"}}), ConfigError);
}

TEST(Mock, DeterministicPerIndex) {
  MockBackend a(MockBackendSpec{});
  MockBackend b(MockBackendSpec{});
  const SamplingConfig c;
  EXPECT_EQ(a.complete(prompt("std.pressure.1"), 0, c), b.complete(prompt("std.pressure.1"), 0, c));
  EXPECT_NE(a.complete(prompt("std.pressure.1"), 0, c), a.complete(prompt("std.pressure.1"), 1, c));
  EXPECT_NE(a.complete(prompt("std.pressure.1"), 0, c), a.complete(prompt("std.pressure.2"), 0, c));
  MockBackendSpec other;
  other.seed = 1;
  EXPECT_NE(MockBackend(other).complete(prompt("std.pressure.1"), 0, c),
            a.complete(prompt("std.pressure.1"), 0, c));
}

TEST(Mock, RespectsMaxTokens) {
  MockBackendSpec spec;
  spec.profile = MockProfile::kNoisy;
  MockBackend m(spec);
  for (int max_tokens : {1, 2, 5, 17, 128}) {
    SamplingConfig c;
    c.max_tokens = max_tokens;
    for (std::size_t i = 0; i < 50; ++i) {
      EXPECT_LE(count_tokens(m.complete(prompt("act.openness.1"), i, c)),
                static_cast<std::size_t>(max_tokens));
    }
  }
}

TEST(Mock, TraitBiasedOutputIsClean) {
  MockBackend m(MockBackendSpec{});
  for (std::size_t i = 0; i < 100; ++i) {
    const std::string text = m.complete(prompt("act.agreeableness.2"), i, SamplingConfig{});
    EXPECT_EQ(sanitize(text).output_text, text);
  }
}

TEST(Mock, NoisyOutputNeedsSanitizing) {
  MockBackendSpec spec;
  spec.profile = MockProfile::kNoisy;
  MockBackend m(spec);
  int changed = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const std::string text = m.complete(prompt("std.about_yourself.1"), i, SamplingConfig{});
    changed += sanitize(text).output_text != text;
  }
  EXPECT_GT(changed, 50);
  EXPECT_LT(changed, 200);
}

TEST(Mock, HighWordShare) {
  MockBackend m(MockBackendSpec{});
  const auto neutral = m.high_word_share(PromptCategory::standard(Theme::kPressure));
  for (double s : neutral) EXPECT_EQ(s, 0.5);
  const auto open = m.high_word_share(PromptCategory::activating(Trait::kOpenness));
  EXPECT_DOUBLE_EQ(open[index_of(Trait::kOpenness)], 0.7);
  EXPECT_EQ(open[index_of(Trait::kExtraversion)], 0.5);
  const auto stable = m.high_word_share(PromptCategory::activating(Trait::kEmotionalStability));
  EXPECT_DOUBLE_EQ(stable[index_of(Trait::kNeuroticism)], 0.3);
}

TEST(Mock, EmpiricalShareMatches) {
  MockBackend m(MockBackendSpec{});
  const auto& lex = lexicon_for(Trait::kConscientiousness);
  const std::set<std::string> high(lex.high.begin(), lex.high.end());
  const std::set<std::string> low(lex.low.begin(), lex.low.end());
  std::size_t h = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < 2000; ++i) {
    for (const auto& tok :
         tokenize(m.complete(prompt("act.conscientiousness.1"), i, SamplingConfig{}),
                  TokenizerSpec{})) {
      h += high.contains(tok);
      total += high.contains(tok) || low.contains(tok);
    }
  }
  EXPECT_EQ(total, 2000u * 6u);
  EXPECT_NEAR(static_cast<double>(h) / total, 0.7, 0.02);
}

// Fails chosen indices and counts calls.
class ScriptedBackend final : public CompletionBackend {
 public:
  std::set<std::size_t> fail;
  std::set<std::size_t> auth_fail;
  std::string_view kind() const override { return "scripted"; }
  std::string complete(const PromptSpec& p, std::size_t index, const SamplingConfig&) override {
    if (auth_fail.contains(index)) throw AuthError("denied");
    if (fail.contains(index)) throw TransportError("server error");
    return p.id + " #" + std::to_string(index) + " \xC3\xA9";
  }
};

TEST(Generate, OrderedRecordsWithErrors) {
  ScriptedBackend b;
  b.fail = {2, 5};
  GenerateOptions opt;
  opt.model_id = "m";
  opt.parallelism = 4;
  opt.clock = fixed_clock("2026-01-01T00:00:00.000Z");
  const auto recs = generate(b, prompt("std.pressure.1"), SamplingConfig{}, 8, opt);
  ASSERT_EQ(recs.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(recs[i].completion_index, i);
    EXPECT_EQ(recs[i].model_id, "m");
    EXPECT_EQ(recs[i].created_at, "2026-01-01T00:00:00.000Z");
    EXPECT_EQ(recs[i].backend_kind, "scripted");
    if (i == 2 || i == 5) {
      EXPECT_EQ(recs[i].error, "server error");
      EXPECT_EQ(recs[i].sanitized_text, "");
    } else {
      EXPECT_TRUE(recs[i].ok());
      EXPECT_EQ(recs[i].sanitized_text, "std.pressure.1 #" + std::to_string(i) + " ");
    }
  }
}

TEST(Generate, ParallelEqualsSerial) {
  MockBackend m(MockBackendSpec{});
  GenerateOptions serial;
  serial.model_id = "m";
  serial.clock = fixed_clock("t");
  GenerateOptions parallel = serial;
  parallel.parallelism = 8;
  EXPECT_EQ(generate(m, prompt("act.openness.4"), SamplingConfig{}, 40, serial),
            generate(m, prompt("act.openness.4"), SamplingConfig{}, 40, parallel));
}

TEST(Generate, AuthErrorAborts) {
  ScriptedBackend b;
  b.auth_fail = {3};
  GenerateOptions opt;
  opt.parallelism = 2;
  EXPECT_THROW(generate(b, prompt("std.pressure.1"), SamplingConfig{}, 6, opt), AuthError);
}

TEST(Generate, RecordJsonRoundTrip) {
  GenerationRecord r;
  r.prompt_id = "std.pressure.1";
  r.model_id = "m";
  r.completion_index = 4;
  r.raw_text = "x\xC3\xA9";
  r.sanitized_text = "x";
  r.created_at = "2026-01-01T00:00:00.000Z";
  r.backend_kind = "mock";
  EXPECT_EQ(GenerationRecord::from_json(nlohmann::json::parse(r.to_json().dump())), r);
  EXPECT_TRUE(r.to_json()["error"].is_null());
  r.error = "timeout";
  EXPECT_EQ(GenerationRecord::from_json(r.to_json()), r);
}

TEST(Clock, SystemClockFormat) {
  const std::string ts = system_clock()();
  ASSERT_EQ(ts.size(), 24u) << ts;
  EXPECT_EQ(ts[10], 'T');
  EXPECT_EQ(ts.back(), 'Z');
}

TEST(CountTokens, Whitespace) {
  EXPECT_EQ(count_tokens(""), 0u);
  EXPECT_EQ(count_tokens("  a\tb\nc  "), 3u);
}

}  // namespace
}  // namespace persona
