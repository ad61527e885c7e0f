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

#ifndef SYLATTACK_SYLLABLE_TEXT_H_
#define SYLATTACK_SYLLABLE_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sylattack {

inline constexpr char32_t kTsheg = 0x0F0B;
inline constexpr char32_t kShad = 0x0F0D;
inline constexpr char32_t kDoubleShad = 0x0F0E;
inline constexpr std::string_view kDefaultUnkToken = "<UNK>";

// The set of codepoints that separate syllables. Everything else is
// syllable material.
class DelimiterPolicy {
 public:
  // tsheg, shad, double shad, ASCII space and newline.
  static DelimiterPolicy Default();

  DelimiterPolicy() = default;
  explicit DelimiterPolicy(std::vector<char32_t> delimiters);

  bool IsDelimiter(char32_t codepoint) const;
  // True when `token` contains at least one delimiter codepoint.
  bool ContainsDelimiter(std::string_view token) const;

  // Sorted and deduplicated.
  const std::vector<char32_t>& delimiters() const { return delimiters_; }

  bool operator==(const DelimiterPolicy&) const = default;

 private:
  std::vector<char32_t> delimiters_;
};

// A text split into syllables s_0 .. s_{n-1} plus the n + 1 delimiter runs
// around them, so that Reconstruct() gives back the exact input bytes.
//
// Positions are zero-based throughout the library.
class SyllableSequence {
 public:
  // The empty text: no syllables, one empty separator.
  SyllableSequence();
  SyllableSequence(std::vector<std::string> syllables,
                   std::vector<std::string> separators);

  std::size_t size() const { return syllables_.size(); }
  bool empty() const { return syllables_.empty(); }

  const std::vector<std::string>& syllables() const { return syllables_; }
  const std::vector<std::string>& separators() const { return separators_; }
  const std::string& syllable(std::size_t position) const;

  bool operator==(const SyllableSequence&) const = default;

 private:
  std::vector<std::string> syllables_;
  std::vector<std::string> separators_;
};

// Syllables are the maximal runs of non-delimiter codepoints. Invalid UTF-8
// bytes count as syllable material, which keeps the round trip byte-exact.
SyllableSequence Segment(std::string_view text,
                         const DelimiterPolicy& policy = DelimiterPolicy::Default());

// Returns a copy with the syllable at `position` replaced. Throws
// Error(kInvalidArgument) on an out-of-range position or an empty
// replacement. Delimiter checking is the caller's business since the policy
// is not known here; see SubstituteChecked.
SyllableSequence Substitute(const SyllableSequence& seq, std::size_t position,
                            std::string_view replacement);

// As Substitute, and also rejects replacements containing a delimiter.
SyllableSequence SubstituteChecked(const SyllableSequence& seq,
                                   std::size_t position,
                                   std::string_view replacement,
                                   const DelimiterPolicy& policy);

SyllableSequence Mask(const SyllableSequence& seq, std::size_t position,
                      std::string_view unk_token = kDefaultUnkToken);

// sep_0 s_0 sep_1 ... s_{n-1} sep_n
std::string Reconstruct(const SyllableSequence& seq);

}  // namespace sylattack

#endif  // SYLATTACK_SYLLABLE_TEXT_H_
