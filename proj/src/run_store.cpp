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

#include "persona/run_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "persona/error.hpp"

namespace persona {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kGenerations = "generations.jsonl";
constexpr const char* kScores = "scores.jsonl";

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  int get() const { return fd_; }

 private:
  int fd_;
};

[[noreturn]] void throw_errno(std::string_view what, const fs::path& path) {
  throw StoreError(fmt::format("{} {}: {}", what, path.string(), std::strerror(errno)));
}

void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write", path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Cuts a torn final line so the next append starts on a fresh line.
void repair_tail(const fs::path& path) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec || size == 0) return;
  const std::string data = read_file(path);
  if (data.back() == '\n') return;
  const auto last_newline = data.rfind('\n');
  const std::size_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
  fs::resize_file(path, keep);
}

template <typename Record>
std::vector<Record> read_jsonl(const fs::path& path, const RecordFilter& filter) {
  const std::string data = read_file(path);
  std::map<std::pair<std::string, std::size_t>, Record> latest;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    const auto nl = data.find('\n', pos);
    if (nl == std::string::npos) break;  // torn final line
    ++line_no;
    const std::string_view line(data.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    Record rec;
    try {
      rec = Record::from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw StoreError(fmt::format("{}:{}: corrupted record: {}", path.string(),
                                   line_no, e.what()));
    }
    if (!filter.matches(rec.prompt_id, rec.model_id)) continue;
    auto key = std::make_pair(rec.prompt_id, rec.completion_index);
    latest.insert_or_assign(std::move(key), std::move(rec));
  }
  std::vector<Record> out;
  out.reserve(latest.size());
  for (auto& [key, rec] : latest) out.push_back(std::move(rec));
  return out;
}

RunStatus parse_status(const std::string& s) {
  if (s == "complete") return RunStatus::kComplete;
  if (s == "incomplete") return RunStatus::kIncomplete;
  throw ParseError(fmt::format("manifest: unknown status \"{}\"", s));
}

}  // namespace

std::string_view run_status_name(RunStatus s) {
  return s == RunStatus::kComplete ? "complete" : "incomplete";
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [id, t] : per_prompt) {
    per[id] = {{"generated", t.generated}, {"failed", t.failed}};
  }
  nlohmann::json model_json = {{"id", model.id}, {"family", model.family}};
  model_json["parameter_count"] =
      model.parameter_count ? nlohmann::json(*model.parameter_count) : nlohmann::json(nullptr);
  nlohmann::json j = {
      {"run_id", run_id},
      {"battery_version", battery_version},
      {"battery_path", battery_path},
      {"battery_size", battery_size},
      {"backend", backend.to_json()},
      {"model", model_json},
      {"sampling", sampling.to_json()},
      {"n", n},
      {"parallelism", parallelism},
      {"seed", seed},
      {"status", run_status_name(status)},
      {"tallies",
       {{"generated", tallies.generated},
        {"failed", tallies.failed},
        {"skipped_empty", tallies.skipped_empty}}},
      {"per_prompt", per},
      {"created_at", created_at}};
  j["classifier_id"] = classifier_id ? nlohmann::json(*classifier_id) : nlohmann::json(nullptr);
  if (scoring) {
    j["scoring"] = {{"classifier_id", scoring->classifier_id},
                    {"status", run_status_name(scoring->status)},
                    {"mode", scoring->mode == SentenceMode::kCompletionOnly
                                 ? "completion_only"
                                 : "stem_plus_completion"},
                    {"scored", scoring->scored},
                    {"skipped_empty", scoring->skipped_empty},
                    {"failed", scoring->failed}};
  } else {
    j["scoring"] = nullptr;
  }
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.battery_version = j.at("battery_version").get<std::string>();
    m.battery_path = j.at("battery_path").get<std::string>();
    m.battery_size = j.at("battery_size").get<std::size_t>();
    m.backend = BackendSpec::from_json(j.at("backend"));
    const auto& model = j.at("model");
    m.model.id = model.at("id").get<std::string>();
    m.model.family = model.at("family").get<std::string>();
    if (!model.at("parameter_count").is_null()) {
      m.model.parameter_count = model.at("parameter_count").get<double>();
    }
    m.sampling = SamplingConfig::from_json(j.at("sampling"));
    m.n = j.at("n").get<std::size_t>();
    m.parallelism = j.at("parallelism").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("classifier_id").is_null()) {
      m.classifier_id = j.at("classifier_id").get<std::string>();
    }
    m.status = parse_status(j.at("status").get<std::string>());
    const auto& t = j.at("tallies");
    m.tallies.generated = t.at("generated").get<std::size_t>();
    m.tallies.failed = t.at("failed").get<std::size_t>();
    m.tallies.skipped_empty = t.at("skipped_empty").get<std::size_t>();
    for (const auto& [id, v] : j.at("per_prompt").items()) {
      m.per_prompt[id] = {v.at("generated").get<std::size_t>(),
                          v.at("failed").get<std::size_t>()};
    }
    m.created_at = j.at("created_at").get<std::string>();
    if (!j.at("scoring").is_null()) {
      const auto& s = j.at("scoring");
      ScoringState st;
      st.classifier_id = s.at("classifier_id").get<std::string>();
      st.status = parse_status(s.at("status").get<std::string>());
      st.mode = s.at("mode").get<std::string>() == "completion_only"
                    ? SentenceMode::kCompletionOnly
                    : SentenceMode::kStemPlusCompletion;
      st.scored = s.at("scored").get<std::size_t>();
      st.skipped_empty = s.at("skipped_empty").get<std::size_t>();
      st.failed = s.at("failed").get<std::size_t>();
      m.scoring = st;
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("manifest: {}", e.what()));
  }
}

bool RecordFilter::matches(std::string_view prompt_id, std::string_view model) const {
  if (model_id && *model_id != model) return false;
  if (!set && !category) return true;
  const auto c = category_from_id(prompt_id);
  if (!c) return false;
  if (set && c->set != *set) return false;
  if (category && !(*c == *category)) return false;
  return true;
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

std::pair<RunStore, std::string> RunStore::for_run_dir(const fs::path& run_dir) {
  fs::path dir = run_dir;
  while (dir.has_relative_path() && dir.filename().empty()) dir = dir.parent_path();
  if (!fs::exists(dir / kManifest)) {
    throw ConfigError(fmt::format("{} is not a run directory (no {})",
                                  run_dir.string(), kManifest));
  }
  fs::path parent = dir.parent_path();
  if (parent.empty()) parent = ".";
  return {RunStore(parent), dir.filename().string()};
}

fs::path RunStore::run_dir(std::string_view run_id) const { return root_ / std::string(run_id); }

bool RunStore::exists(std::string_view run_id) const {
  return fs::exists(run_dir(run_id) / kManifest);
}

void RunStore::require_run(std::string_view run_id) const {
  if (!exists(run_id)) throw StoreError(fmt::format("unknown run_id {}", run_id));
}

void RunStore::create_run(const RunManifest& manifest) {
  if (manifest.run_id.empty()) throw StoreError("run_id is empty");
  if (exists(manifest.run_id)) {
    throw StoreError(fmt::format("run {} already exists", manifest.run_id));
  }
  fs::create_directories(run_dir(manifest.run_id));
  save_manifest(manifest);
  for (const char* name : {kGenerations, kScores}) {
    std::ofstream(run_dir(manifest.run_id) / name, std::ios::app);
  }
}

RunManifest RunStore::load_manifest(std::string_view run_id) const {
  require_run(run_id);
  const fs::path path = run_dir(run_id) / kManifest;
  try {
    return RunManifest::from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw StoreError(fmt::format("{}: {}", path.string(), e.what()));
  } catch (const ParseError& e) {
    throw StoreError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void RunStore::save_manifest(const RunManifest& manifest) {
  const fs::path dir = run_dir(manifest.run_id);
  const fs::path tmp = dir / "manifest.json.tmp";
  {
    FileDescriptor fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644));
    if (fd.get() < 0) throw_errno("open", tmp);
    write_all(fd.get(), manifest.to_json().dump(2) + "\n", tmp);
    if (::fsync(fd.get()) != 0) throw_errno("fsync", tmp);
  }
  fs::rename(tmp, dir / kManifest);
}

void RunStore::append_lines(const fs::path& path, const std::vector<std::string>& lines) {
  if (lines.empty()) return;
  repair_tail(path);
  std::string data;
  for (const auto& line : lines) {
    data += line;
    data += '\n';
  }
  FileDescriptor fd(::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644));
  if (fd.get() < 0) throw_errno("open", path);
  write_all(fd.get(), data, path);
  if (::fsync(fd.get()) != 0) throw_errno("fsync", path);
}

void RunStore::append(std::string_view run_id, std::span<const GenerationRecord> records) {
  const RunManifest m = load_manifest(run_id);
  if (m.status == RunStatus::kComplete) {
    throw StoreError(fmt::format("run {} is complete; generations are closed", run_id));
  }
  std::vector<std::string> lines;
  for (const auto& r : records) lines.push_back(r.to_json().dump());
  append_lines(run_dir(run_id) / kGenerations, lines);
}

void RunStore::append(std::string_view run_id, const GenerationRecord& record) {
  append(run_id, std::span<const GenerationRecord>(&record, 1));
}

void RunStore::append(std::string_view run_id, std::span<const ScoredRecord> records) {
  const RunManifest m = load_manifest(run_id);
  if (m.scoring && m.scoring->status == RunStatus::kComplete) {
    throw StoreError(fmt::format("run {} is fully scored; scores are closed", run_id));
  }
  std::vector<std::string> lines;
  for (const auto& r : records) lines.push_back(r.to_json().dump());
  append_lines(run_dir(run_id) / kScores, lines);
}

void RunStore::append(std::string_view run_id, const ScoredRecord& record) {
  append(run_id, std::span<const ScoredRecord>(&record, 1));
}

std::vector<GenerationRecord> RunStore::read_run(std::string_view run_id,
                                                 const RecordFilter& filter) const {
  require_run(run_id);
  return read_jsonl<GenerationRecord>(run_dir(run_id) / kGenerations, filter);
}

std::vector<ScoredRecord> RunStore::read_scores(std::string_view run_id,
                                                const RecordFilter& filter) const {
  require_run(run_id);
  return read_jsonl<ScoredRecord>(run_dir(run_id) / kScores, filter);
}

void RunStore::reset_scores(std::string_view run_id) {
  RunManifest m = load_manifest(run_id);
  const fs::path path = run_dir(run_id) / kScores;
  const fs::path tmp = run_dir(run_id) / "scores.jsonl.tmp";
  { std::ofstream(tmp, std::ios::trunc); }
  fs::rename(tmp, path);
  m.scoring.reset();
  m.classifier_id.reset();
  m.tallies.skipped_empty = 0;
  save_manifest(m);
}

std::string new_run_id() {
  std::random_device rd;
  std::uint64_t hi = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::uint64_t lo = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  hi = (hi & 0xFFFFFFFFFFFF0FFFULL) | 0x0000000000004000ULL;
  lo = (lo & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;
  return fmt::format("{:08x}-{:04x}-{:04x}-{:04x}-{:012x}", hi >> 32,
                     (hi >> 16) & 0xFFFF, hi & 0xFFFF, lo >> 48,
                     lo & 0xFFFFFFFFFFFFULL);
}

}  // namespace persona
