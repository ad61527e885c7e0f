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

#include "sylattack/embedding_store.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sylattack/utf8.h"

namespace sylattack {

namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool ParseDouble(std::string_view field, double* value) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, *value);
  return ec == std::errc() && ptr == end && std::isfinite(*value);
}

bool ParseSize(std::string_view field, std::size_t* value) {
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, *value);
  return ec == std::errc() && ptr == end;
}

std::string Where(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line << ": ";
  return os.str();
}

}  // namespace

EmbeddingTable EmbeddingTable::FromEntries(std::size_t dim,
                                           std::vector<Entry> entries) {
  if (dim == 0) {
    throw Error(ErrorCategory::kFormat, "embedding dimension must be positive");
  }
  EmbeddingTable table;
  table.dim_ = dim;
  table.tokens_.reserve(entries.size());
  table.values_.reserve(entries.size() * dim);
  for (auto& entry : entries) {
    if (entry.token.empty()) {
      throw Error(ErrorCategory::kFormat, "empty embedding token");
    }
    if (entry.values.size() != dim) {
      throw Error(ErrorCategory::kFormat,
                  "token '" + entry.token + "' has " +
                      std::to_string(entry.values.size()) +
                      " components, expected " + std::to_string(dim));
    }
    double norm_sq = 0.0;
    for (double v : entry.values) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCategory::kFormat,
                  "token '" + entry.token + "' has a zero or non-finite norm");
    }
    if (table.index_.count(entry.token) != 0) {
      throw Error(ErrorCategory::kFormat,
                  "duplicate embedding token '" + entry.token + "'");
    }
    table.index_.emplace(entry.token, table.tokens_.size());
    for (double v : entry.values) table.values_.push_back(v / norm);
    table.tokens_.push_back(std::move(entry.token));
  }
  return table;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::optional<std::size_t> EmbeddingTable::IndexOf(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const double>> EmbeddingTable::Find(
    std::string_view token) const {
  auto index = IndexOf(token);
  if (!index) return std::nullopt;
  return vector(*index);
}

VecLoadResult ReadVec(std::istream& in, std::string_view source_name,
                      const VecLoadOptions& options) {
  VecLoadResult result;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    throw Error(ErrorCategory::kFormat,
                Where(source_name, 1) + "missing \"count dim\" header");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitFields(line);
  std::size_t dim = 0;
  if (header.size() != 2 || !ParseSize(header[0], &result.declared_count) ||
      !ParseSize(header[1], &dim) || dim == 0) {
    throw Error(ErrorCategory::kFormat,
                Where(source_name, 1) + "malformed header, expected \"count dim\"");
  }

  auto reject = [&](const std::string& message) {
    if (options.policy == ErrorPolicy::kFailFast) {
      throw Error(ErrorCategory::kFormat, Where(source_name, line_no) + message);
    }
    result.warnings.push_back(Where(source_name, line_no) + message);
    ++result.skipped_malformed;
  };

  std::vector<EmbeddingTable::Entry> entries;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t data_lines = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = SplitFields(line);
    if (fields.empty()) continue;
    ++data_lines;
    if (fields.size() != dim + 1) {
      reject("expected " + std::to_string(dim) + " components, found " +
             std::to_string(fields.size() - 1));
      continue;
    }
    EmbeddingTable::Entry entry{std::string(fields[0]), {}};
    entry.values.resize(dim);
    bool ok = true;
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      if (!ParseDouble(fields[k + 1], &entry.values[k])) {
        reject("non-numeric component '" + std::string(fields[k + 1]) + "'");
        ok = false;
        break;
      }
      norm_sq += entry.values[k] * entry.values[k];
    }
    if (!ok) continue;
    if (!(norm_sq > 0.0) || !std::isfinite(norm_sq)) {
      reject("zero-norm vector for token '" + entry.token + "'");
      continue;
    }
    if (auto it = seen.find(entry.token); it != seen.end()) {
      reject("duplicate token '" + entry.token + "' (first on line " +
             std::to_string(it->second) + ")");
      continue;
    }
    seen.emplace(entry.token, line_no);
    if (options.delimiters.ContainsDelimiter(entry.token)) {
      ++result.skipped_delimited;
      continue;
    }
    entries.push_back(std::move(entry));
  }
  if (data_lines != result.declared_count) {
    const std::string message =
        "header declares " + std::to_string(result.declared_count) +
        " entries, file has " + std::to_string(data_lines);
    if (options.policy == ErrorPolicy::kFailFast) {
      throw Error(ErrorCategory::kFormat, Where(source_name, 1) + message);
    }
    result.warnings.push_back(Where(source_name, 1) + message);
  }
  result.table = EmbeddingTable::FromEntries(dim, std::move(entries));
  return result;
}

VecLoadResult LoadVec(const std::string& path, const VecLoadOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCategory::kIo, "cannot open embeddings file " + path);
  }
  return ReadVec(in, path, options);
}

void WriteVec(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << " " << table.dim() << "\n";
  char buffer[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.token(i);
    for (double v : table.vector(i)) {
      auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
      out << ' ';
      out.write(buffer, ptr - buffer);
    }
    out << "\n";
  }
}

void SaveVec(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path);
  WriteVec(table, out);
  if (!out) throw Error(ErrorCategory::kIo, "write failed for " + path);
}

std::vector<CodepointRange> ParseCodepointRanges(std::string_view spec) {
  std::vector<CodepointRange> ranges;
  auto parse_hex = [&](std::string_view field) {
    unsigned long value = 0;
    if (field.size() > 2 && (field.substr(0, 2) == "U+" || field.substr(0, 2) == "0x")) {
      field.remove_prefix(2);
    }
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value, 16);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
        value > 0x10FFFF) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "bad codepoint '" + std::string(field) + "' in range list");
    }
    return static_cast<char32_t>(value);
  };
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = spec.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const std::size_t dash = item.find('-');
      CodepointRange range;
      if (dash == std::string_view::npos) {
        range.first = range.last = parse_hex(item);
      } else {
        range.first = parse_hex(item.substr(0, dash));
        range.last = parse_hex(item.substr(dash + 1));
      }
      if (range.first > range.last) {
        throw Error(ErrorCategory::kInvalidArgument,
                    "inverted codepoint range '" + std::string(item) + "'");
      }
      ranges.push_back(range);
    }
    start = comma + 1;
  }
  if (ranges.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "empty codepoint range list");
  }
  return ranges;
}

CleanResult Clean(const EmbeddingTable& table,
                  std::span<const CodepointRange> allowed) {
  if (allowed.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "Clean needs at least one range");
  }
  auto in_ranges = [&](char32_t cp) {
    return std::any_of(allowed.begin(), allowed.end(), [cp](const auto& r) {
      return cp >= r.first && cp <= r.last;
    });
  };
  std::vector<EmbeddingTable::Entry> kept;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string& token = table.token(i);
    bool ok = true;
    for (std::size_t k = 0; k < token.size() && ok;) {
      const Utf8Unit unit = DecodeUtf8At(token, k);
      ok = unit.valid && in_ranges(unit.codepoint);
      k += unit.length;
    }
    if (!ok) continue;
    const auto v = table.vector(i);
    kept.push_back({token, std::vector<double>(v.begin(), v.end())});
  }
  CleanResult result;
  result.kept = kept.size();
  result.removed = table.size() - kept.size();
  if (!kept.empty()) {
    result.table = EmbeddingTable::FromEntries(table.dim(), std::move(kept));
  }
  return result;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "cosine distance between vectors of different dimension");
  }
  double dot = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
  double d = 1.0 - dot;
  if (d < kZeroDistanceSnap) d = 0.0;
  return std::min(d, 2.0);
}

CandidateSet Candidates(const EmbeddingTable& table, std::string_view source,
                        double d_max) {
  if (!(d_max > 0.0)) {
    throw Error(ErrorCategory::kInvalidArgument, "d_max must be positive");
  }
  CandidateSet set;
  set.source = std::string(source);
  const auto index = table.IndexOf(source);
  if (!index) return set;
  set.source_in_table = true;
  const auto query = table.vector(*index);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i == *index) continue;
    const double d = CosineDistance(query, table.vector(i));
    if (d > 0.0 && d <= d_max) set.candidates.push_back({table.token(i), d});
  }
  std::sort(set.candidates.begin(), set.candidates.end(),
            [](const Candidate& x, const Candidate& y) {
              if (x.distance != y.distance) return x.distance < y.distance;
              return x.token < y.token;
            });
  return set;
}

}  // namespace sylattack
