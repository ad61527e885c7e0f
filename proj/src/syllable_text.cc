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

#include "sylattack/syllable_text.h"

#include <algorithm>
#include <utility>

#include "sylattack/error.h"
#include "sylattack/utf8.h"

namespace sylattack {

DelimiterPolicy DelimiterPolicy::Default() {
  return DelimiterPolicy({kTsheg, kShad, kDoubleShad, U' ', U'\n'});
}

DelimiterPolicy::DelimiterPolicy(std::vector<char32_t> delimiters)
    : delimiters_(std::move(delimiters)) {
  std::sort(delimiters_.begin(), delimiters_.end());
  delimiters_.erase(std::unique(delimiters_.begin(), delimiters_.end()),
                    delimiters_.end());
}

bool DelimiterPolicy::IsDelimiter(char32_t codepoint) const {
  return std::binary_search(delimiters_.begin(), delimiters_.end(), codepoint);
}

bool DelimiterPolicy::ContainsDelimiter(std::string_view token) const {
  for (std::size_t i = 0; i < token.size();) {
    const Utf8Unit unit = DecodeUtf8At(token, i);
    if (unit.valid && IsDelimiter(unit.codepoint)) return true;
    i += unit.length;
  }
  return false;
}

SyllableSequence::SyllableSequence() : separators_(1) {}

SyllableSequence::SyllableSequence(std::vector<std::string> syllables,
                                   std::vector<std::string> separators)
    : syllables_(std::move(syllables)), separators_(std::move(separators)) {
  if (separators_.size() != syllables_.size() + 1) {
    throw Error(ErrorCategory::kInvalidArgument,
                "SyllableSequence needs n + 1 separators");
  }
  for (const auto& s : syllables_) {
    if (s.empty()) {
      throw Error(ErrorCategory::kInvalidArgument, "empty syllable token");
    }
  }
}

const std::string& SyllableSequence::syllable(std::size_t position) const {
  if (position >= syllables_.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "syllable position " + std::to_string(position) +
                    " out of range for n = " +
                    std::to_string(syllables_.size()));
  }
  return syllables_[position];
}

SyllableSequence Segment(std::string_view text, const DelimiterPolicy& policy) {
  std::vector<std::string> syllables;
  std::vector<std::string> separators;
  std::string run;
  bool in_syllable = false;

  for (std::size_t i = 0; i < text.size();) {
    const Utf8Unit unit = DecodeUtf8At(text, i);
    const bool delimiter = unit.valid && policy.IsDelimiter(unit.codepoint);
    if (delimiter == in_syllable) {
      // Boundary between a separator run and a syllable run.
      if (in_syllable) {
        syllables.push_back(std::move(run));
      } else {
        separators.push_back(std::move(run));
      }
      run.clear();
      in_syllable = !in_syllable;
    }
    run.append(text.substr(i, unit.length));
    i += unit.length;
  }
  if (in_syllable) {
    syllables.push_back(std::move(run));
    separators.emplace_back();
  } else {
    separators.push_back(std::move(run));
  }
  return SyllableSequence(std::move(syllables), std::move(separators));
}

SyllableSequence Substitute(const SyllableSequence& seq, std::size_t position,
                            std::string_view replacement) {
  if (position >= seq.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "substitution position " + std::to_string(position) +
                    " out of range for n = " + std::to_string(seq.size()));
  }
  if (replacement.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "empty replacement token");
  }
  std::vector<std::string> syllables = seq.syllables();
  syllables[position] = std::string(replacement);
  return SyllableSequence(std::move(syllables), seq.separators());
}

SyllableSequence SubstituteChecked(const SyllableSequence& seq,
                                   std::size_t position,
                                   std::string_view replacement,
                                   const DelimiterPolicy& policy) {
  if (policy.ContainsDelimiter(replacement)) {
    throw Error(ErrorCategory::kInvalidArgument,
                "replacement token contains a delimiter");
  }
  return Substitute(seq, position, replacement);
}

SyllableSequence Mask(const SyllableSequence& seq, std::size_t position,
                      std::string_view unk_token) {
  return Substitute(seq, position, unk_token);
}

std::string Reconstruct(const SyllableSequence& seq) {
  std::string out = seq.separators().front();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out += seq.syllables()[i];
    out += seq.separators()[i + 1];
  }
  return out;
}

}  // namespace sylattack
