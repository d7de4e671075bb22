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

#include "persona/classifier.hpp"

#include <algorithm>

#include "persona/error.hpp"
#include "persona/native_model.hpp"
#include "persona/remote_classifier.hpp"

namespace persona {

bool is_scorable(std::string_view text) {
  return std::any_of(text.begin(), text.end(), [](char c) {
    return c != ' ' && c != '\t' && c != '\n' && c != '\r';
  });
}

std::vector<ScoreResult> TraitClassifier::score_batch(
    std::span<const std::string> texts) const {
  std::vector<ScoreResult> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    try {
      out.push_back({score(text), {}});
    } catch (const Error& e) {
      out.push_back({std::nullopt, e.what()});
    }
  }
  return out;
}

std::unique_ptr<TraitClassifier> open_classifier(const ClassifierHandle& handle) {
  if (handle.kind == ClassifierHandle::Kind::kNative) {
    return std::make_unique<NativeModel>(NativeModel::load(handle.model_path));
  }
  return std::make_unique<RemoteClassifier>(handle.service_url, handle.timeout,
                                            handle.batch_size);
}

}  // namespace persona
