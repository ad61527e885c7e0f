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

#ifndef SYLATTACK_EMBEDDING_STORE_H_
#define SYLATTACK_EMBEDDING_STORE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sylattack/error.h"
#include "sylattack/syllable_text.h"

namespace sylattack {

// Syllable token -> unit-length vector. Immutable once built; every query is
// read-only and safe to issue from several threads.
class EmbeddingTable {
 public:
  struct Entry {
    std::string token;
    std::vector<double> values;  // raw, normalized on insertion
  };

  EmbeddingTable() = default;

  // Normalizes every vector. Throws Error(kFormat) on a dimension mismatch,
  // a duplicate or empty token, or a vector with zero or non-finite norm.
  static EmbeddingTable FromEntries(std::size_t dim, std::vector<Entry> entries);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  bool contains(std::string_view token) const;
  std::optional<std::size_t> IndexOf(std::string_view token) const;
  // Unit vector for `token`, or nullopt when absent.
  std::optional<std::span<const double>> Find(std::string_view token) const;

  const std::string& token(std::size_t index) const { return tokens_[index]; }
  std::span<const double> vector(std::size_t index) const {
    return {values_.data() + index * dim_, dim_};
  }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> values_;  // row-major, size() x dim()
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>>
      index_;
};

struct VecLoadOptions {
  ErrorPolicy policy = ErrorPolicy::kFailFast;
  // Entries whose token contains one of these codepoints are multi-syllable
  // strings, not syllables; they are dropped and counted.
  DelimiterPolicy delimiters = DelimiterPolicy::Default();
};

struct VecLoadResult {
  EmbeddingTable table;
  std::size_t declared_count = 0;
  std::size_t skipped_malformed = 0;
  std::size_t skipped_delimited = 0;
  std::vector<std::string> warnings;
};

// fastText text format: a "count dim" header, then one "token v_1 .. v_dim"
// line per entry. Errors carry the 1-based line number.
VecLoadResult LoadVec(const std::string& path, const VecLoadOptions& options = {});
VecLoadResult ReadVec(std::istream& in, std::string_view source_name,
                      const VecLoadOptions& options = {});

// Writes the (normalized) table back in .vec format with round-trip
// precision.
void WriteVec(const EmbeddingTable& table, std::ostream& out);
void SaveVec(const EmbeddingTable& table, const std::string& path);

struct CodepointRange {
  char32_t first = 0;
  char32_t last = 0;
  bool operator==(const CodepointRange&) const = default;
};

inline constexpr CodepointRange kTibetanBlock{0x0F00, 0x0FFF};

// "0F00-0FFF,0020" style lists; hex, inclusive.
std::vector<CodepointRange> ParseCodepointRanges(std::string_view spec);

struct CleanResult {
  EmbeddingTable table;
  std::size_t kept = 0;
  std::size_t removed = 0;
};

// Keeps only tokens whose every codepoint lies in one of `allowed`.
CleanResult Clean(const EmbeddingTable& table,
                  std::span<const CodepointRange> allowed);

// 1 - a.b for unit vectors, clamped to [0, 2]. Results within 1e-12 of zero
// snap to exactly 0 so that duplicated vectors compare equal. Throws
// Error(kInvalidArgument) when the dimensions differ.
double CosineDistance(std::span<const double> a, std::span<const double> b);

inline constexpr double kZeroDistanceSnap = 1e-12;

struct Candidate {
  std::string token;
  double distance = 0.0;
  bool operator==(const Candidate&) const = default;
};

struct CandidateSet {
  std::string source;
  bool source_in_table = false;
  // 0 < distance <= d_max, ascending distance then token.
  std::vector<Candidate> candidates;
};

// Exact linear scan. A token missing from the table yields an empty set with
// source_in_table == false.
CandidateSet Candidates(const EmbeddingTable& table, std::string_view source,
                        double d_max);

}  // namespace sylattack

#endif  // SYLATTACK_EMBEDDING_STORE_H_
