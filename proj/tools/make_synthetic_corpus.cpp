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

// Writes the lexicon-built labeled corpus used for desk-scale training.
//
//   make_synthetic_corpus [--seed N] [--docs N] [--out FILE]

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "persona/training.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic labeled corpus"};
  std::uint64_t seed = 7;
  std::size_t docs = 200;
  std::string out;
  app.add_option("--seed", seed);
  app.add_option("--docs", docs)->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output file (default: stdout)");
  CLI11_PARSE(app, argc, argv);

  const std::string csv = persona::corpus_to_csv(persona::synthetic_corpus(seed, docs));
  if (out.empty()) {
    std::cout << csv;
    return 0;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  file << csv;
  return file ? 0 : 1;
}
