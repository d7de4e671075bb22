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

#include <stdexcept>
#include <string>

namespace persona {

// Base of every error the library throws. The CLI maps the subclasses onto
// exit codes: configuration-class errors exit 2, everything else exits 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (JSON, CSV, battery). Carries the location when known.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad or missing configuration (flags, config files, referenced paths).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Network failure talking to a completion or scoring endpoint.
class TransportError : public Error {
 public:
  explicit TransportError(std::string cause)
      : Error(cause), cause_(std::move(cause)) {}
  const std::string& cause() const { return cause_; }

 private:
  std::string cause_;
};

// Rejected credentials. Aborts a whole run instead of failing one completion.
class AuthError : public Error {
 public:
  using Error::Error;
};

// Text that cannot be scored (empty after sanitization).
class UnscorableError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

inline bool is_configuration_error(const std::exception& e) {
  return dynamic_cast<const ConfigError*>(&e) != nullptr ||
         dynamic_cast<const ValidationError*>(&e) != nullptr ||
         dynamic_cast<const ParseError*>(&e) != nullptr;
}

}  // namespace persona
