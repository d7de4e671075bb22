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

#include "persona/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "persona/csv.hpp"
#include "persona/error.hpp"
#include "persona/kernels.hpp"
#include "persona/lexicon.hpp"
#include "persona/random.hpp"

namespace persona {

namespace {

// Corpus column order; the header is written and expected in this order.
constexpr std::array<Trait, kHeadCount> kCorpusColumns = {
    Trait::kExtraversion, Trait::kNeuroticism, Trait::kAgreeableness,
    Trait::kConscientiousness, Trait::kOpenness};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<std::array<int, kHeadCount>> y;
};

void fit_head(const Dataset& data, Trait trait, const TrainOptions& options,
              TraitHead& head) {
  const std::size_t n = data.x.size();
  const std::size_t dim = head.vocab.size();
  const std::size_t h = index_of(trait);
  head.coef.assign(dim, 0.0);
  head.intercept = 0.0;
  std::vector<double> grad(dim);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (int iter = 0; iter < options.iterations; ++iter) {
    std::fill(grad.begin(), grad.end(), 0.0);
    kernels::axpy(options.l2, head.coef, grad);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = head.intercept + kernels::dot(data.x[i], head.coef);
      const double r = (logistic(z) - data.y[i][h]) * inv_n;
      kernels::axpy(r, data.x[i], grad);
      grad_b += r;
    }
    kernels::axpy(-options.learning_rate, grad, head.coef);
    head.intercept -= options.learning_rate * grad_b;
  }
}

}  // namespace

std::optional<int> parse_binary_label(std::string_view raw) {
  const std::string v = lower(trim(raw));
  if (v == "1" || v == "y") return 1;
  if (v == "0" || v == "n") return 0;
  return std::nullopt;
}

LabeledCorpus parse_corpus(std::string_view csv_text) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw ParseError("corpus: missing header row");
  const auto& header = rows.front().fields;
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw ParseError(fmt::format("corpus: missing column \"{}\"", name));
  };
  const std::size_t text_col = column("text");
  std::array<std::size_t, kHeadCount> label_col{};
  for (Trait t : kCorpusColumns) label_col[index_of(t)] = column(trait_label(t));

  LabeledCorpus corpus;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw ParseError(fmt::format("corpus: line {}: expected {} fields, got {}",
                                   row.line, header.size(), row.fields.size()));
    }
    LabeledDocument doc;
    doc.text = row.fields[text_col];
    if (!is_scorable(doc.text)) {
      throw ParseError(fmt::format("corpus: line {}: empty text", row.line));
    }
    for (Trait t : kHeadTraits) {
      const std::string& raw = row.fields[label_col[index_of(t)]];
      auto label = parse_binary_label(raw);
      if (!label) {
        throw ParseError(fmt::format(
            "corpus: line {}: column {}: \"{}\" is not a binary label",
            row.line, trait_label(t), raw));
      }
      doc.labels[index_of(t)] = *label;
    }
    corpus.rows.push_back(std::move(doc));
  }
  return corpus;
}

LabeledCorpus ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(fmt::format("cannot open corpus file {}", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_corpus(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string corpus_to_csv(const LabeledCorpus& corpus) {
  std::string out = "text";
  for (Trait t : kCorpusColumns) out += fmt::format(",{}", trait_label(t));
  out += '\n';
  for (const LabeledDocument& doc : corpus.rows) {
    out += csv_escape(doc.text);
    for (Trait t : kCorpusColumns) out += fmt::format(",{}", doc.labels[index_of(t)]);
    out += '\n';
  }
  return out;
}

double precision(const ConfusionCounts& c) {
  const std::size_t d = c.tp + c.fp;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const ConfusionCounts& c) {
  const std::size_t d = c.tp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double f1_score(const ConfusionCounts& c) {
  const std::size_t d = 2 * c.tp + c.fp + c.fn;
  return d == 0 ? 0.0 : static_cast<double>(2 * c.tp) / static_cast<double>(d);
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json traits = nlohmann::json::object();
  for (Trait t : kHeadTraits) {
    const TraitEval& e = at(t);
    traits[std::string(trait_name(t))] = {
        {"f1", e.f1},
        {"precision", e.precision},
        {"recall", e.recall},
        {"support", e.support},
        {"negatives", e.negatives},
        {"confusion",
         {{"tp", e.counts.tp}, {"fp", e.counts.fp}, {"fn", e.counts.fn},
          {"tn", e.counts.tn}}}};
  }
  return {{"per_trait", traits},
          {"split", {{"seed", seed}, {"train_fraction", train_fraction}}},
          {"threshold", threshold},
          {"evaluated", evaluated},
          {"excluded_unscorable", excluded_unscorable}};
}

EvalReport evaluate(const TraitClassifier& model, const LabeledCorpus& corpus,
                    double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw PreconditionError(fmt::format("threshold {} is outside (0, 1)", threshold));
  }
  EvalReport report;
  report.threshold = threshold;
  for (const LabeledDocument& doc : corpus.rows) {
    if (!is_scorable(doc.text)) {
      ++report.excluded_unscorable;
      continue;
    }
    const TraitScores s = model.score(doc.text);
    ++report.evaluated;
    for (Trait t : kHeadTraits) {
      TraitEval& e = report.per_trait[index_of(t)];
      const bool predicted = s[t] >= threshold;
      const bool actual = doc.labels[index_of(t)] == 1;
      if (actual) {
        ++e.support;
        predicted ? ++e.counts.tp : ++e.counts.fn;
      } else {
        ++e.negatives;
        predicted ? ++e.counts.fp : ++e.counts.tn;
      }
    }
  }
  for (TraitEval& e : report.per_trait) {
    e.precision = precision(e.counts);
    e.recall = recall(e.counts);
    e.f1 = f1_score(e.counts);
  }
  return report;
}

TrainResult train(const LabeledCorpus& corpus, const TrainOptions& options) {
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0)) {
    throw PreconditionError("train fraction must lie in (0, 1)");
  }
  if (options.iterations < 1 || options.learning_rate <= 0.0 || options.l2 < 0.0) {
    throw PreconditionError("iterations, learning rate and l2 must be positive");
  }
  std::vector<std::size_t> order(corpus.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(options.seed);
  rng.shuffle(order);
  const auto n_train = static_cast<std::size_t>(
      std::floor(options.train_fraction * static_cast<double>(order.size())));
  if (n_train == 0 || n_train == order.size()) {
    throw TrainingError(fmt::format(
        "corpus of {} rows leaves an empty train or test split", order.size()));
  }

  LabeledCorpus train_split;
  LabeledCorpus test_split;
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? train_split : test_split).rows.push_back(corpus.rows[order[k]]);
  }

  for (Trait t : kHeadTraits) {
    std::size_t pos = 0;
    for (const auto& doc : train_split.rows) pos += doc.labels[index_of(t)];
    const std::size_t neg = train_split.rows.size() - pos;
    if (pos < options.min_rows_per_class || neg < options.min_rows_per_class) {
      throw TrainingError(fmt::format(
          "trait {} ({}): training split has {} positive and {} negative rows, "
          "need at least {} of each",
          trait_name(t), trait_label(t), pos, neg, options.min_rows_per_class));
    }
  }

  const TokenizerSpec tokenizer;
  std::vector<std::vector<std::string>> tokens;
  std::map<std::string, std::size_t> df;
  for (const auto& doc : train_split.rows) {
    tokens.push_back(tokenize(doc.text, tokenizer));
    const std::set<std::string> unique(tokens.back().begin(), tokens.back().end());
    for (const auto& tok : unique) ++df[tok];
  }

  TraitHead shape;
  std::unordered_map<std::string, std::size_t> index;
  const double n_docs = static_cast<double>(train_split.rows.size());
  for (const auto& [tok, count] : df) {
    index.emplace(tok, shape.vocab.size());
    shape.vocab.push_back(tok);
    shape.idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  shape.coef.assign(shape.vocab.size(), 0.0);

  Dataset data;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    data.x.push_back(tfidf_features(tokens[i], index, shape.idf, tokenizer.norm));
    data.y.push_back(train_split.rows[i].labels);
  }

  std::array<TraitHead, kHeadCount> heads;
  heads.fill(shape);
  {
    std::vector<std::jthread> workers;
    for (Trait t : kHeadTraits) {
      workers.emplace_back([&, t] { fit_head(data, t, options, heads[index_of(t)]); });
    }
  }

  NativeModel model(tokenizer, std::move(heads));
  EvalReport report = evaluate(model, test_split, 0.5);
  report.seed = options.seed;
  report.train_fraction = options.train_fraction;
  return {std::move(model), report};
}

LabeledCorpus synthetic_corpus(std::uint64_t seed, std::size_t docs) {
  constexpr std::size_t kWordsPerTrait = 3;
  constexpr std::size_t kFillersPerDoc = 4;
  Rng rng(seed);
  const auto fillers = filler_words();
  LabeledCorpus corpus;
  for (std::size_t d = 0; d < docs; ++d) {
    LabeledDocument doc;
    std::vector<std::string_view> words;
    for (Trait t : kHeadTraits) {
      const int label = rng.bernoulli(0.5) ? 1 : 0;
      doc.labels[index_of(t)] = label;
      const TraitLexicon& lex = lexicon_for(t);
      const auto& pool = label == 1 ? lex.high : lex.low;
      for (std::size_t k = 0; k < kWordsPerTrait; ++k) {
        words.push_back(pool[rng.index(pool.size())]);
      }
    }
    for (std::size_t k = 0; k < kFillersPerDoc; ++k) {
      words.push_back(fillers[rng.index(fillers.size())]);
    }
    rng.shuffle(words);
    doc.text = "I am";
    for (std::string_view w : words) {
      doc.text += ' ';
      doc.text += w;
    }
    doc.text += '.';
    corpus.rows.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace persona
