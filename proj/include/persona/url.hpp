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

#include <string>
#include <string_view>

namespace persona {

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string origin;  // scheme://host[:port], as cpp-httplib expects
  std::string path;    // always starts with '/'
};

// Throws ConfigError unless `url` is an absolute http(s) URL.
ParsedUrl parse_url(std::string_view url);

// Joins a base path and a suffix with exactly one '/' between them.
std::string join_path(std::string_view base, std::string_view suffix);

}  // namespace persona
