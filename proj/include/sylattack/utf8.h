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

#ifndef SYLATTACK_UTF8_H_
#define SYLATTACK_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sylattack {

// One decoded unit of a UTF-8 byte string. Invalid bytes decode as a
// single-byte unit with `valid == false` so callers can keep byte fidelity.
struct Utf8Unit {
  char32_t codepoint = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
  bool valid = true;
};

// Decodes the next unit starting at `offset`. Requires offset < text.size().
Utf8Unit DecodeUtf8At(std::string_view text, std::size_t offset);

std::vector<char32_t> DecodeUtf8(std::string_view text);

void AppendUtf8(char32_t codepoint, std::string* out);
std::string EncodeUtf8(char32_t codepoint);

}  // namespace sylattack

#endif  // SYLATTACK_UTF8_H_
