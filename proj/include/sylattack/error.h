// Copyright 2026 The Sylattack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYLATTACK_ERROR_H_
#define SYLATTACK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sylattack {

// Broad failure classes. The CLI maps each one to its own exit code.
enum class ErrorCategory {
  kInvalidArgument,    // caller bug or bad configuration
  kIo,                 // file could not be opened/read/written
  kFormat,             // malformed dataset, .vec, model or report file
  kOracleUnavailable,  // victim unreachable or timed out; retriable
  kOracleProtocol,     // victim answered with something off-contract
  kInvariant,          // an internal consistency check failed
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

  bool retriable() const {
    return category_ == ErrorCategory::kOracleUnavailable;
  }

 private:
  ErrorCategory category_;
};

// How loaders react to a bad record.
enum class ErrorPolicy { kFailFast, kSkipAndWarn };

}  // namespace sylattack

#endif  // SYLATTACK_ERROR_H_
