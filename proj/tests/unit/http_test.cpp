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

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <gtest/gtest.h>

#include "persona/battery.hpp"
#include "persona/classifier.hpp"
#include "persona/error.hpp"
#include "persona/http_backend.hpp"
#include "persona/native_model.hpp"
#include "persona/remote_classifier.hpp"
#include "../support/stub_server.hpp"

namespace persona {
namespace {

using testing::StubServer;

const PromptSpec& stem() { return *default_battery().find("std.strengths_weaknesses.1"); }

HttpBackendSpec spec_for(const StubServer& s, WireStyle style = WireStyle::kCompletion) {
  HttpBackendSpec h;
  h.endpoint = s.url("/v1/completions");
  h.model = "tiny";
  h.timeout = std::chrono::milliseconds(2000);
  h.max_retries = 2;
  h.backoff_base_s = 0.001;
  h.style = style;
  return h;
}

TEST(Backoff, DoublesWithJitterAndCap) {
  EXPECT_DOUBLE_EQ(backoff_delay(0.5, 0, 0.0).count(), 0.25);
  EXPECT_DOUBLE_EQ(backoff_delay(0.5, 2, 0.0).count(), 1.0);
  EXPECT_DOUBLE_EQ(backoff_delay(0.5, 2, 0.5).count(), 1.5);
  EXPECT_DOUBLE_EQ(backoff_delay(0.5, 20, 0.9).count(), 30.0);
}

TEST(HttpBackend, CompletionStyleRequestAndResponse) {
  StubServer s;
  std::string seen_body;
  std::string seen_auth;
  s.server().Post("/v1/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    seen_auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"text":"My strengths are patience and care."}]})",
                    "application/json");
  });
  s.start();
  setenv("PERSONA_TEST_TOKEN", "sekret", 1);
  auto h = spec_for(s);
  h.auth_env = "PERSONA_TEST_TOKEN";
  HttpBackend b(h, 1);
  EXPECT_EQ(b.complete(stem(), 0, SamplingConfig{}), " patience and care.");
  EXPECT_EQ(seen_auth, "Bearer sekret");
  const auto body = nlohmann::json::parse(seen_body);
  EXPECT_EQ(body["prompt"], "My strengths are");
  EXPECT_EQ(body["model"], "tiny");
  EXPECT_EQ(body["temperature"], 1.0);
  EXPECT_EQ(body["top_k"], 40);
  EXPECT_EQ(body["top_p"], 0.95);
  EXPECT_EQ(body["max_tokens"], 128);
  EXPECT_EQ(body["n"], 1);
  EXPECT_EQ(BackendSpec{h}.to_json().dump().find("sekret"), std::string::npos);
}

TEST(HttpBackend, ChatStyle) {
  StubServer s;
  std::string seen_body;
  s.server().Post("/v1/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"kindness"}}]})",
                    "application/json");
  });
  s.start();
  HttpBackend b(spec_for(s, WireStyle::kChat), 1);
  EXPECT_EQ(b.complete(stem(), 0, SamplingConfig{}), "kindness");
  const auto body = nlohmann::json::parse(seen_body);
  ASSERT_EQ(body["messages"].size(), 1u);
  EXPECT_EQ(body["messages"][0]["role"], "user");
  const std::string content = body["messages"][0]["content"];
  EXPECT_TRUE(content.ends_with("My strengths are"));
  EXPECT_FALSE(body.contains("prompt"));
}

TEST(HttpBackend, ServerErrorRetriedThenFails) {
  StubServer s;
  std::atomic<int> calls{0};
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 500;
  });
  s.start();
  HttpBackend b(spec_for(s), 1);
  try {
    b.complete(stem(), 0, SamplingConfig{});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.cause(), "server error");
  }
  EXPECT_EQ(calls, 3);
}

TEST(HttpBackend, RateLimitRecovers) {
  StubServer s;
  std::atomic<int> calls{0};
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls == 1) {
      res.status = 429;
      return;
    }
    res.set_content(R"({"choices":[{"text":"ok"}]})", "application/json");
  });
  s.start();
  HttpBackend b(spec_for(s), 1);
  EXPECT_EQ(b.complete(stem(), 0, SamplingConfig{}), "ok");
  EXPECT_EQ(calls, 2);
}

TEST(HttpBackend, AuthFailureNotRetried) {
  StubServer s;
  std::atomic<int> calls{0};
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 401;
  });
  s.start();
  HttpBackend b(spec_for(s), 1);
  EXPECT_THROW(b.complete(stem(), 0, SamplingConfig{}), AuthError);
  EXPECT_EQ(calls, 1);
}

TEST(HttpBackend, ClientErrorNotRetried) {
  StubServer s;
  std::atomic<int> calls{0};
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
  });
  s.start();
  HttpBackend b(spec_for(s), 1);
  try {
    b.complete(stem(), 0, SamplingConfig{});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.cause(), "client error 400");
  }
  EXPECT_EQ(calls, 1);
}

TEST(HttpBackend, BadResponseShape) {
  StubServer s;
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"nope":1})", "application/json");
  });
  s.start();
  HttpBackend b(spec_for(s), 1);
  try {
    b.complete(stem(), 0, SamplingConfig{});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.cause(), "bad response");
  }
}

TEST(HttpBackend, Timeout) {
  StubServer s;
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::milliseconds(600));
    res.set_content(R"({"choices":[{"text":"late"}]})", "application/json");
  });
  s.start();
  auto h = spec_for(s);
  h.timeout = std::chrono::milliseconds(150);
  h.max_retries = 0;
  HttpBackend b(h, 1);
  try {
    b.complete(stem(), 0, SamplingConfig{});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.cause(), "timeout");
  }
}

TEST(HttpBackend, ConnectionRefused) {
  int port = 0;
  {
    StubServer s;
    s.start();
    port = s.port();
  }
  HttpBackendSpec h;
  h.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/completions";
  h.model = "tiny";
  h.max_retries = 1;
  h.backoff_base_s = 0.001;
  HttpBackend b(h, 1);
  try {
    b.complete(stem(), 0, SamplingConfig{});
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_EQ(e.cause(), "connection failed");
  }
}

TEST(HttpBackend, MissingTokenIsConfigError) {
  HttpBackendSpec h;
  h.endpoint = "http://127.0.0.1:1/v1/completions";
  h.model = "tiny";
  h.auth_env = "PERSONA_TEST_UNSET_VARIABLE";
  unsetenv("PERSONA_TEST_UNSET_VARIABLE");
  EXPECT_THROW(HttpBackend(h, 1), ConfigError);
}

TEST(HttpBackend, ConcurrencyCapped) {
  StubServer s;
  std::atomic<int> in_flight{0};
  std::atomic<int> peak{0};
  s.server().new_task_queue = [] { return new httplib::ThreadPool(8); };
  s.server().Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    const int now = ++in_flight;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --in_flight;
    res.set_content(R"({"choices":[{"text":"x"}]})", "application/json");
  });
  s.start();
  auto h = spec_for(s);
  h.max_concurrent = 2;
  HttpBackend b(h, 1);
  GenerateOptions opt;
  opt.parallelism = 6;
  const auto recs = generate(b, stem(), SamplingConfig{}, 12, opt);
  for (const auto& r : recs) EXPECT_TRUE(r.ok());
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

// ---- remote classifier ----

void serve_fixed_scores(StubServer& s, std::atomic<int>* batches = nullptr) {
  s.server().Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok","classifier_id":"stub-v1"})", "application/json");
  });
  s.server().Post("/score", [batches](const httplib::Request& req, httplib::Response& res) {
    if (batches) ++*batches;
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& t : body["texts"]) {
      if (t.get<std::string>().find("FAIL") != std::string::npos) {
        res.status = 400;
        res.set_content(R"({"error":"bad"})", "application/json");
        return;
      }
      scores.push_back({{"openness", 0.1}, {"conscientiousness", 0.2}, {"extraversion", 0.3},
                        {"agreeableness", 0.4}, {"neuroticism", 0.5}});
    }
    res.set_content(nlohmann::json{{"scores", scores}}.dump(), "application/json");
  });
}

TEST(RemoteClassifier, HealthGivesIdAndScoresDeriveStability) {
  StubServer s;
  serve_fixed_scores(s);
  s.start();
  RemoteClassifier c(s.url(), std::chrono::milliseconds(2000), 4);
  EXPECT_EQ(c.classifier_id(), "stub-v1");
  const TraitScores sc = c.score("I am here");
  EXPECT_EQ(sc.openness(), 0.1);
  EXPECT_EQ(sc.neuroticism(), 0.5);
  EXPECT_EQ(sc.emotional_stability(), 0.5);
  EXPECT_THROW(c.score(""), UnscorableError);
}

TEST(RemoteClassifier, BatchChunksAndPartialFailure) {
  StubServer s;
  std::atomic<int> batches{0};
  serve_fixed_scores(s, &batches);
  s.start();
  RemoteClassifier c(s.url("/"), std::chrono::milliseconds(2000), 2);
  const std::vector<std::string> texts = {"a", "", "b", "FAIL", "c"};
  const auto out = c.score_batch(texts);
  ASSERT_EQ(out.size(), 5u);
  EXPECT_TRUE(out[0].ok());
  EXPECT_FALSE(out[1].ok());
  // {a, b} is one chunk, {FAIL, c} the other.
  EXPECT_TRUE(out[2].ok());
  EXPECT_FALSE(out[3].ok());
  EXPECT_FALSE(out[4].ok());
  EXPECT_EQ(batches, 2);
}

TEST(RemoteClassifier, NotReadyIsTransportError) {
  StubServer s;
  s.server().Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
  });
  s.start();
  EXPECT_THROW(RemoteClassifier(s.url(), std::chrono::milliseconds(1000), 4), TransportError);
}

TEST(RemoteClassifier, WireRejectsOutOfRange) {
  EXPECT_THROW(scores_from_wire(nlohmann::json{{"openness", 1.5},
                                               {"conscientiousness", 0.2},
                                               {"extraversion", 0.3},
                                               {"agreeableness", 0.4},
                                               {"neuroticism", 0.5}}),
               ParseError);
  const TraitScores t(0.1, 0.2, 0.3, 0.4, 0.5);
  const auto wire = scores_to_wire(t);
  EXPECT_FALSE(wire.contains("emotional_stability"));
  EXPECT_EQ(scores_from_wire(wire), t);
}

TEST(RemoteClassifier, ReplayOfNativeScoresIsExact) {
  const NativeModel native = calibrated_lexicon_model(6, 0.2);
  StubServer s;
  s.server().Get("/health", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"status", "ok"}, {"classifier_id", native.classifier_id()}}.dump(),
                    "application/json");
  });
  s.server().Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& t : body["texts"]) scores.push_back(scores_to_wire(native.score(t.get<std::string>())));
    res.set_content(nlohmann::json{{"scores", scores}}.dump(), "application/json");
  });
  s.start();
  RemoteClassifier remote(s.url(), std::chrono::milliseconds(2000), 3);
  EXPECT_EQ(remote.classifier_id(), native.classifier_id());
  const std::vector<std::string> texts = {"I would describe myself as curious and calm",
                                          "", "My strengths are order and focus",
                                          "quiet", "warm kind friendly"};
  const auto a = native.score_batch(texts);
  const auto b = remote.score_batch(texts);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ok(), b[i].ok()) << i;
    if (a[i].ok()) {
      EXPECT_EQ(*a[i].scores, *b[i].scores) << i;
    }
  }
}

TEST(ClassifierHandle, OpensRemote) {
  StubServer s;
  serve_fixed_scores(s);
  s.start();
  auto c = open_classifier(ClassifierHandle::remote(s.url()));
  EXPECT_EQ(c->classifier_id(), "stub-v1");
}

}  // namespace
}  // namespace persona
