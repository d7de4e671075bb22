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

// persona: command-line driver for elicitation, training, scoring and
// reporting.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "persona/aggregation.hpp"
#include "persona/battery.hpp"
#include "persona/classifier.hpp"
#include "persona/elicitation.hpp"
#include "persona/error.hpp"
#include "persona/native_model.hpp"
#include "persona/report.hpp"
#include "persona/run_config.hpp"
#include "persona/run_store.hpp"
#include "persona/scoring.hpp"
#include "persona/training.hpp"

namespace fs = std::filesystem;
using namespace persona;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << content;
  if (!out.flush()) throw Error(fmt::format("failed writing {}", path.string()));
}

// ---- elicit ---------------------------------------------------------------

struct ElicitArgs {
  std::string config_path;
  ElicitOverrides overrides;
  std::string resume;
  std::string run_id;
  std::string fixed_time;
  std::string family;
  std::optional<double> parameter_count;
};

fs::path resume_dir(const std::string& resume, const fs::path& out_dir) {
  if (fs::is_directory(resume)) return resume;
  const fs::path candidate = out_dir / resume;
  if (fs::is_directory(candidate)) return candidate;
  throw ConfigError(fmt::format("--resume: no run \"{}\" (looked in {})", resume,
                                out_dir.string()));
}

int run_elicit(const ElicitArgs& args) {
  ElicitConfig base;
  if (!args.config_path.empty()) base = load_elicit_config(args.config_path);
  Clock clock = args.fixed_time.empty() ? system_clock() : fixed_clock(args.fixed_time);

  RunManifest manifest;
  Battery battery;
  std::optional<RunStore> store;
  std::size_t parallelism = 1;

  if (!args.resume.empty()) {
    const fs::path out_dir = args.overrides.out_dir.value_or(base.out_dir);
    auto [s, id] = RunStore::for_run_dir(resume_dir(args.resume, out_dir));
    store.emplace(std::move(s));
    manifest = store->load_manifest(id);
    battery = resolve_battery(manifest);
    parallelism = args.overrides.parallelism.value_or(manifest.parallelism);
  } else {
    const ElicitConfig config = resolve_elicit_config(base, args.overrides);
    battery = config.battery_path.empty() ? default_battery() : load_battery(config.battery_path);
    validate_battery(battery);
    store.emplace(config.out_dir);
    manifest.run_id = args.run_id.empty() ? new_run_id() : args.run_id;
    manifest.battery_version = battery.version;
    manifest.battery_path =
        config.battery_path.empty() ? "" : fs::absolute(config.battery_path).string();
    manifest.battery_size = battery.prompts.size();
    manifest.backend = config.backend;
    manifest.model = config.model;
    if (!args.family.empty()) manifest.model.family = args.family;
    if (args.parameter_count) manifest.model.parameter_count = args.parameter_count;
    manifest.sampling = config.sampling;
    manifest.n = config.n;
    manifest.parallelism = config.parallelism;
    manifest.seed = config.seed;
    manifest.created_at = clock();
    store->create_run(manifest);
    parallelism = config.parallelism;
  }

  auto backend = make_backend(manifest.backend, manifest.seed);
  ElicitOptions options;
  options.parallelism = parallelism;
  options.clock = clock;
  const RunManifest done = run_battery(*backend, battery, manifest.sampling, manifest.n,
                                       *store, manifest.run_id, options);

  std::cout << store->run_dir(done.run_id).string() << "\n";
  std::cerr << fmt::format("run {}: {} of {} completions generated, {} failed\n", done.run_id,
                           done.tallies.generated, done.expected_records(),
                           done.tallies.failed);
  if (done.status != RunStatus::kComplete) {
    std::cerr << fmt::format("run is incomplete; rerun with --resume {}\n", done.run_id);
    return kExitRuntime;
  }
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::string report;
  TrainOptions options;
  bool calibrated_lexicon = false;
  double shift = 0.2;
  int words_per_trait = 6;
};

int run_train(const TrainArgs& args) {
  if (args.calibrated_lexicon) {
    const NativeModel model = calibrated_lexicon_model(args.words_per_trait, args.shift);
    model.save(args.out);
    std::cout << model.classifier_id() << "\n";
    return kExitOk;
  }
  if (args.corpus.empty()) throw ConfigError("--corpus is required");
  const LabeledCorpus corpus = ingest_corpus(args.corpus);
  const TrainResult result = train(corpus, args.options);
  result.model.save(args.out);
  const std::string report = dump_json(result.report.to_json());
  if (!args.report.empty()) write_file(args.report, report);
  std::cout << report;
  std::cerr << fmt::format("model {} written to {}\n", result.model.classifier_id(), args.out);
  return kExitOk;
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
  std::string run;
  std::string model;
  std::string service;
  bool completion_only = false;
  bool force = false;
  std::size_t batch_size = 64;
  long timeout_ms = 30000;
};

int run_score(const ScoreArgs& args) {
  if (args.model.empty() == args.service.empty()) {
    throw ConfigError("give exactly one of --model or --service");
  }
  ClassifierHandle handle = args.model.empty() ? ClassifierHandle::remote(args.service)
                                               : ClassifierHandle::native(args.model);
  handle.timeout = std::chrono::milliseconds(args.timeout_ms);
  handle.batch_size = args.batch_size;
  const auto classifier = open_classifier(handle);

  auto [store, run_id] = RunStore::for_run_dir(args.run);
  ScoreOptions options;
  options.mode = args.completion_only ? SentenceMode::kCompletionOnly
                                      : SentenceMode::kStemPlusCompletion;
  options.batch_size = args.batch_size;
  options.force = args.force;
  const ScoringState state = score_run(store, run_id, *classifier, options);
  std::cerr << fmt::format("run {}: {} scored, {} skipped (empty), {} failed\n", run_id,
                           state.scored, state.skipped_empty, state.failed);
  std::cout << state.classifier_id << "\n";
  return kExitOk;
}

// ---- analyze / report -----------------------------------------------------

QuestionScope scope_arg(const std::string& name) {
  const auto scope = parse_scope(name);
  if (!scope) throw ConfigError(fmt::format("--question-set: unknown value \"{}\"", name));
  return *scope;
}

std::vector<fs::path> run_paths(const std::vector<std::string>& runs) {
  std::vector<fs::path> out;
  for (const auto& r : runs) {
    if (!fs::is_directory(r)) throw ConfigError(fmt::format("--runs: {} is not a directory", r));
    out.emplace_back(r);
  }
  return out;
}

struct AnalyzeArgs {
  std::vector<std::string> runs;
  std::string question_set = "both";
  std::string group_by = "none";
  bool raw = false;
  std::string out;
};

nlohmann::json summary_json(const TraitSummary& s) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"model_id", s.model_id},
          {"trait", trait_name(s.trait)},
          {"question_set", scope_name(s.scope)},
          {"category", s.category ? nlohmann::json(s.category->slug()) : nlohmann::json(nullptr)},
          {"prompt_id", s.prompt_id ? nlohmann::json(*s.prompt_id) : nlohmann::json(nullptr)},
          {"mean", opt(s.mean)},
          {"std_population", opt(s.std)},
          {"n", s.n},
          {"skipped", s.skipped}};
}

int run_analyze(const AnalyzeArgs& args) {
  GroupBy group_by;
  group_by.scope = scope_arg(args.question_set);
  if (args.group_by == "category") {
    group_by.by_category = true;
  } else if (args.group_by == "prompt") {
    group_by.by_prompt = true;
  } else if (args.group_by != "none") {
    throw ConfigError(fmt::format("--group-by: unknown value \"{}\"", args.group_by));
  }
  const auto paths = run_paths(args.runs);
  const AnalysisInput input =
      load_analysis_input(paths, args.raw ? ScoreView::kRaw : ScoreView::kNormalized);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : summarize(input.records, group_by)) out.push_back(summary_json(s));
  const std::string text = dump_json(out);
  if (args.out.empty()) {
    std::cout << text;
  } else {
    write_file(args.out, text);
  }
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> runs;
  std::string kind = "summary";
  std::string out_dir;
  std::string question_set = "both";
  std::vector<std::string> pairs;
  std::vector<std::string> model_order;
  bool clamp_display = false;
};

int run_report(const ReportArgs& args) {
  const auto paths = run_paths(args.runs);
  const AnalysisInput input = load_analysis_input(paths);
  ReportOptions options;
  options.clamp_display = args.clamp_display;
  options.model_order = args.model_order;

  GroupBy group_by;
  group_by.scope = scope_arg(args.question_set);

  if (args.kind == "plotdata") {
    const std::string text = dump_json(plot_data(input));
    if (args.out_dir.empty()) {
      std::cout << text;
    } else {
      write_file(fs::path(args.out_dir) / "plotdata.json", text);
    }
    return kExitOk;
  }

  Rendered rendered;
  if (args.kind == "summary") {
    const auto summaries = summarize(input.records, group_by);
    std::optional<RankingTable> ranking;
    if (input.models.size() >= 2) ranking = rank(summaries);
    rendered = render_summary(summaries, ranking ? &*ranking : nullptr, options);
  } else if (args.kind == "activation") {
    rendered = render_activation(activation_matrix(input.records), options);
  } else if (args.kind == "ranking") {
    rendered = render_ranking(rank(summarize(input.records, group_by)));
  } else if (args.kind == "pairs") {
    if (args.pairs.empty()) throw ConfigError("--pairs is required for the pairs report");
    const auto pairs = parse_pairs(args.pairs);
    rendered = render_pairs(compare_pairs(summarize(input.records, group_by), pairs));
  } else {
    throw ConfigError(fmt::format("--kind: unknown report \"{}\"", args.kind));
  }

  if (args.out_dir.empty()) {
    std::cout << rendered.markdown;
  } else {
    write_file(fs::path(args.out_dir) / (args.kind + ".md"), rendered.markdown);
    write_file(fs::path(args.out_dir) / (args.kind + ".csv"), rendered.csv);
  }
  return kExitOk;
}

// ---- validate-battery -----------------------------------------------------

int run_validate(const std::string& path, bool normalized, bool print) {
  const Battery battery = !path.empty()   ? load_battery(path)
                          : normalized    ? normalized_battery()
                                          : default_battery();
  validate_battery(battery);
  if (print) {
    std::cout << dump_json(battery_to_json(battery));
    return kExitOk;
  }
  std::cout << fmt::format("battery {}: {} prompts, valid\n", battery.version,
                           battery.prompts.size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personality probing harness for language models"};
  app.require_subcommand(1);

  ElicitArgs elicit;
  auto* elicit_cmd = app.add_subcommand("elicit", "Generate completions for every battery prompt");
  elicit_cmd->add_option("--config", elicit.config_path, "Run config (JSON)");
  elicit_cmd->add_option_function<std::string>(
      "--backend", [&](const std::string& v) { elicit.overrides.backend_kind = v; },
      "Backend override (mock)");
  elicit_cmd->add_option_function<std::size_t>(
      "--n", [&](std::size_t v) { elicit.overrides.n = v; }, "Completions per prompt");
  elicit_cmd->add_option_function<std::size_t>(
      "--parallelism", [&](std::size_t v) { elicit.overrides.parallelism = v; },
      "Concurrent completions per prompt");
  elicit_cmd->add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t v) { elicit.overrides.seed = v; }, "Run seed");
  elicit_cmd->add_option_function<std::string>(
      "--battery", [&](const std::string& v) { elicit.overrides.battery_path = v; },
      "Battery file (default: built-in)");
  elicit_cmd->add_option_function<std::string>(
      "--out-dir", [&](const std::string& v) { elicit.overrides.out_dir = v; },
      "Directory holding run directories");
  elicit_cmd->add_option_function<std::string>(
      "--model-id", [&](const std::string& v) { elicit.overrides.model_id = v; },
      "Model id recorded with every generation");
  elicit_cmd->add_option("--family", elicit.family, "Model family for plots");
  elicit_cmd->add_option_function<double>(
      "--parameter-count", [&](double v) { elicit.parameter_count = v; },
      "Declared parameter count");
  elicit_cmd->add_option("--run-id", elicit.run_id, "Run id (default: random UUID)");
  elicit_cmd->add_option("--resume", elicit.resume, "Resume a run (id or directory)");
  elicit_cmd->add_option("--fixed-time", elicit.fixed_time,
                         "Timestamp written instead of the current time");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train the native trait classifier");
  train_cmd->add_option("--corpus", train_args.corpus, "Labeled corpus (CSV)");
  train_cmd->add_option("--out", train_args.out, "Model artifact to write")->required();
  train_cmd->add_option("--report", train_args.report, "Also write the evaluation report here");
  train_cmd->add_option("--seed", train_args.options.seed, "Split seed");
  train_cmd->add_option("--train-fraction", train_args.options.train_fraction)
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--l2", train_args.options.l2, "L2 regularization strength");
  train_cmd->add_option("--iterations", train_args.options.iterations);
  train_cmd->add_option("--learning-rate", train_args.options.learning_rate);
  train_cmd->add_flag("--calibrated-lexicon", train_args.calibrated_lexicon,
                      "Write the lexicon model matched to the mock backend instead");
  train_cmd->add_option("--shift", train_args.shift, "Lexicon model: expected effect size");
  train_cmd->add_option("--words-per-trait", train_args.words_per_trait,
                        "Lexicon model: words per head per completion");

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "Score a run's generations");
  score_cmd->add_option("--run", score_args.run, "Run directory")->required();
  score_cmd->add_option("--model", score_args.model, "Native model artifact");
  score_cmd->add_option("--service", score_args.service, "Scoring service base URL");
  score_cmd->add_flag("--completion-only", score_args.completion_only,
                      "Score the completion without its stem");
  score_cmd->add_flag("--force", score_args.force, "Replace scores from another classifier");
  score_cmd->add_option("--batch-size", score_args.batch_size)->check(CLI::PositiveNumber);
  score_cmd->add_option("--timeout-ms", score_args.timeout_ms)->check(CLI::PositiveNumber);

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarize scored runs as JSON");
  analyze_cmd->add_option("--runs", analyze_args.runs, "Run directories")->required();
  analyze_cmd->add_option("--question-set", analyze_args.question_set,
                          "standard, trait_activating or both");
  analyze_cmd->add_option("--group-by", analyze_args.group_by, "none, category or prompt");
  analyze_cmd->add_flag("--raw", analyze_args.raw, "Use raw instead of normalized scores");
  analyze_cmd->add_option("--out", analyze_args.out, "Output file (default: stdout)");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Render tables or plot data");
  report_cmd->add_option("--runs", report_args.runs, "Run directories")->required();
  report_cmd->add_option("--kind", report_args.kind,
                         "summary, activation, ranking, pairs or plotdata");
  report_cmd->add_option("--out-dir", report_args.out_dir, "Write files here (default: stdout)");
  report_cmd->add_option("--question-set", report_args.question_set,
                         "standard, trait_activating or both");
  report_cmd->add_option("--pairs", report_args.pairs, "base=variant model pairs");
  report_cmd->add_option("--model-order", report_args.model_order, "Row order")->delimiter(',');
  report_cmd->add_flag("--clamp-display", report_args.clamp_display,
                       "Show values above 100% as 100.00+%");

  std::string battery_path;
  bool normalized = false;
  bool print_battery = false;
  auto* validate_cmd = app.add_subcommand("validate-battery", "Check a prompt battery");
  validate_cmd->add_option("path", battery_path, "Battery file (default: built-in)");
  validate_cmd->add_flag("--normalized", normalized, "Check the spelling-corrected battery");
  validate_cmd->add_flag("--print", print_battery, "Print the battery as JSON once valid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*elicit_cmd) return run_elicit(elicit);
    if (*train_cmd) return run_train(train_args);
    if (*score_cmd) return run_score(score_args);
    if (*analyze_cmd) return run_analyze(analyze_args);
    if (*report_cmd) return run_report(report_args);
    if (*validate_cmd) return run_validate(battery_path, normalized, print_battery);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_configuration_error(e) ? kExitConfig : kExitRuntime;
  }
  return kExitRuntime;
}
