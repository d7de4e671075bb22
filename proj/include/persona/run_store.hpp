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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "persona/battery.hpp"
#include "persona/generation.hpp"
#include "persona/normalization.hpp"

namespace persona {

enum class RunStatus { kIncomplete, kComplete };

std::string_view run_status_name(RunStatus s);

struct ModelInfo {
  std::string id;
  std::string family;                     // optional grouping for plots
  std::optional<double> parameter_count;  // declared, never inferred
};

struct Tallies {
  std::size_t generated = 0;
  std::size_t failed = 0;
  std::size_t skipped_empty = 0;
};

struct PromptTally {
  std::size_t generated = 0;
  std::size_t failed = 0;
};

struct ScoringState {
  std::string classifier_id;
  RunStatus status = RunStatus::kIncomplete;
  SentenceMode mode = SentenceMode::kStemPlusCompletion;
  std::size_t scored = 0;
  std::size_t skipped_empty = 0;
  std::size_t failed = 0;
};

struct RunManifest {
  std::string run_id;
  std::string battery_version;
  std::string battery_path;  // empty for the built-in battery
  std::size_t battery_size = kBatterySize;
  BackendSpec backend;
  ModelInfo model;
  SamplingConfig sampling;
  std::size_t n = 1;
  std::size_t parallelism = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> classifier_id;
  RunStatus status = RunStatus::kIncomplete;
  Tallies tallies;
  std::map<std::string, PromptTally> per_prompt;
  std::string created_at;
  std::optional<ScoringState> scoring;

  std::size_t expected_records() const { return battery_size * n; }
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Restricts read results. Empty members match everything.
struct RecordFilter {
  std::optional<QuestionSet> set;
  std::optional<PromptCategory> category;
  std::optional<std::string> model_id;

  bool matches(std::string_view prompt_id, std::string_view model_id) const;
};

// Runs live in <root>/<run_id>/ as manifest.json, generations.jsonl and
// scores.jsonl. JSONL files are append-only; each append is fsync'ed before
// it returns. A trailing line without a newline is a torn write from a crash:
// readers ignore it and the next append cuts it off.
//
// Reads return one record per (prompt_id, completion_index), the most recent
// append winning, sorted by that key. One writer per run; any number of
// readers.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  // Opens the parent of `run_dir` as the store; returns the store and run id.
  static std::pair<RunStore, std::string> for_run_dir(const std::filesystem::path& run_dir);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path run_dir(std::string_view run_id) const;
  bool exists(std::string_view run_id) const;

  // Throws StoreError if the run already exists.
  void create_run(const RunManifest& manifest);
  RunManifest load_manifest(std::string_view run_id) const;
  // Atomic replace.
  void save_manifest(const RunManifest& manifest);

  // Rejected once the run's generation status is complete.
  void append(std::string_view run_id, std::span<const GenerationRecord> records);
  void append(std::string_view run_id, const GenerationRecord& record);
  // Rejected once scoring is complete.
  void append(std::string_view run_id, std::span<const ScoredRecord> records);
  void append(std::string_view run_id, const ScoredRecord& record);

  std::vector<GenerationRecord> read_run(std::string_view run_id,
                                         const RecordFilter& filter = {}) const;
  std::vector<ScoredRecord> read_scores(std::string_view run_id,
                                        const RecordFilter& filter = {}) const;

  // Discards scores so the run can be rescored with another classifier.
  void reset_scores(std::string_view run_id);

 private:
  void require_run(std::string_view run_id) const;
  void append_lines(const std::filesystem::path& path,
                    const std::vector<std::string>& lines);

  std::filesystem::path root_;
};

// Fresh random UUID (version 4).
std::string new_run_id();

}  // namespace persona
