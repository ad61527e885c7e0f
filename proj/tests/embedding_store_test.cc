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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "sylattack/error.h"
#include "test_support.h"

namespace sylattack {
namespace {

using ::testing::HasSubstr;

VecLoadResult Read(const std::string& body, const VecLoadOptions& options = {}) {
  std::istringstream in(body);
  return ReadVec(in, "mem.vec", options);
}

TEST(ReadVecTest, NormalizesOnLoad) {
  const auto r = Read("2 2\na 3 4\nb 0 2\n");
  ASSERT_EQ(r.table.size(), 2u);
  EXPECT_EQ(r.table.dim(), 2u);
  const auto a = *r.table.Find("a");
  EXPECT_NEAR(a[0], 0.6, 1e-15);
  EXPECT_NEAR(a[1], 0.8, 1e-15);
  EXPECT_FALSE(r.table.Find("c").has_value());
}

TEST(ReadVecTest, ErrorsNameTheLine) {
  try {
    Read("2 2\na 1 0\nb 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kFormat);
    EXPECT_THAT(e.what(), HasSubstr("mem.vec:3:"));
  }
  EXPECT_THROW(Read(""), Error);
  EXPECT_THROW(Read("x y\n"), Error);
  EXPECT_THROW(Read("1 2\na 1 x\n"), Error);
  EXPECT_THROW(Read("1 2\na 0 0\n"), Error);
  EXPECT_THROW(Read("2 2\na 1 0\na 0 1\n"), Error);
  EXPECT_THROW(Read("3 2\na 1 0\n"), Error);
}

TEST(ReadVecTest, SkipAndWarn) {
  VecLoadOptions options;
  options.policy = ErrorPolicy::kSkipAndWarn;
  const auto r = Read("4 2\na 1 0\nb 1\nc 0 0\nd 0 1\n", options);
  EXPECT_EQ(r.table.size(), 2u);
  EXPECT_EQ(r.skipped_malformed, 2u);
  EXPECT_EQ(r.warnings.size(), 2u);
}

TEST(ReadVecTest, DropsMultiSyllableTokens) {
  const auto r = Read("2 2\na 1 0\nb\xe0\xbc\x8b" "c 0 1\n");
  EXPECT_EQ(r.table.size(), 1u);
  EXPECT_EQ(r.skipped_delimited, 1u);
}

TEST(WriteVecTest, RoundTrip) {
  const auto t = testing::RandomTable(3, 20, 5).Build();
  std::stringstream ss;
  WriteVec(t, ss);
  const auto back = ReadVec(ss, "rt").table;
  ASSERT_EQ(back.size(), t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back.token(i), t.token(i));
    for (std::size_t k = 0; k < t.dim(); ++k) {
      EXPECT_NEAR(back.vector(i)[k], t.vector(i)[k], 1e-15);
    }
  }
}

TEST(FromEntriesTest, Rejects) {
  EXPECT_THROW(EmbeddingTable::FromEntries(2, {{"a", {1, 0, 0}}}), Error);
  EXPECT_THROW(EmbeddingTable::FromEntries(2, {{"", {1, 0}}}), Error);
  EXPECT_THROW(EmbeddingTable::FromEntries(2, {{"a", {NAN, 0}}}), Error);
}

TEST(CleanTest, KeepsOnlyAllowedCodepoints) {
  const auto t = EmbeddingTable::FromEntries(
      2, {{"\xe0\xbd\x80", {1, 0}}, {"MP3", {0, 1}}, {"\xe0\xbd\x80x", {1, 1}}});
  const auto ranges = ParseCodepointRanges("0F00-0FFF");
  ASSERT_EQ(ranges.size(), 1u);
  EXPECT_EQ(ranges[0], kTibetanBlock);
  const auto r = Clean(t, ranges);
  EXPECT_EQ(r.kept, 1u);
  EXPECT_EQ(r.removed, 2u);
  EXPECT_TRUE(r.table.contains("\xe0\xbd\x80"));
  EXPECT_EQ(ParseCodepointRanges("20,41-5A").size(), 2u);
  EXPECT_THROW(ParseCodepointRanges("zz"), Error);
  EXPECT_THROW(ParseCodepointRanges("10-5"), Error);
}

TEST(CosineDistanceTest, Examples) {
  const double e1[] = {1, 0}, e2[] = {0, 1}, m1[] = {-1, 0};
  const double d45[] = {std::sqrt(0.5), std::sqrt(0.5)};
  EXPECT_EQ(CosineDistance(e1, e1), 0.0);
  EXPECT_NEAR(CosineDistance(e1, e2), 1.0, 1e-15);
  EXPECT_NEAR(CosineDistance(e1, m1), 2.0, 1e-15);
  EXPECT_NEAR(CosineDistance(e1, d45), 1.0 - std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(CosineDistance(e1, d45), 0.2929, 1e-4);
  const double three[] = {1, 0, 0};
  EXPECT_THROW(CosineDistance(e1, three), Error);
}

TEST(CosineDistanceTest, SymmetryAndScaleInvariance) {
  const auto raw = testing::RandomTable(11, 40, 6, 0);
  const auto t = raw.Build();
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double d = CosineDistance(t.vector(i), t.vector(j));
      EXPECT_EQ(d, CosineDistance(t.vector(j), t.vector(i)));
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 2.0);
      EXPECT_NEAR(d, testing::RawCosineDistance(raw.raw[i], raw.raw[j]), 1e-12);
    }
  }
  auto scaled = raw;
  for (auto& v : scaled.raw) {
    for (auto& x : v) x *= 7.5;
  }
  const auto ts = scaled.Build();
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(CosineDistance(t.vector(0), t.vector(i)),
                CosineDistance(ts.vector(0), ts.vector(i)), 1e-14);
  }
}

TEST(CandidatesTest, Examples) {
  const double s = std::sqrt(0.5);
  const auto t = EmbeddingTable::FromEntries(
      2, {{"a", {1, 0}}, {"b", {s, s}}, {"c", {0, 1}}, {"dup", {2, 0}}, {"e", {s, s}}});
  const auto c = Candidates(t, "a", 0.2929);
  EXPECT_TRUE(c.source_in_table);
  ASSERT_EQ(c.candidates.size(), 2u);
  EXPECT_EQ(c.candidates[0].token, "b");  // tie broken by token
  EXPECT_EQ(c.candidates[1].token, "e");
  EXPECT_TRUE(Candidates(t, "a", 0.29).candidates.empty());
  EXPECT_EQ(Candidates(t, "a", 1.0).candidates.size(), 3u);  // dup is at 0
  const auto missing = Candidates(t, "zz", 1.0);
  EXPECT_FALSE(missing.source_in_table);
  EXPECT_TRUE(missing.candidates.empty());
  EXPECT_THROW(Candidates(t, "a", 0.0), Error);
}

TEST(CandidatesTest, MatchesBruteForceAndIsMonotone) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto raw = testing::RandomTable(seed, 60, 4);
    const auto t = raw.Build();
    for (const auto& tok : raw.tokens) {
      std::size_t previous = 0;
      for (double d_max : {0.05, 0.1340, 0.2929, 0.5, 1.0, 2.0}) {
        const auto got = Candidates(t, tok, d_max).candidates;
        const auto want = testing::BruteForceCandidates(raw, tok, d_max);
        ASSERT_EQ(got.size(), want.size()) << tok << " " << d_max;
        EXPECT_EQ(testing::CompareCandidates(got, want, 1e-9), "");
        for (std::size_t i = 0; i < got.size(); ++i) {
          EXPECT_GT(got[i].distance, 0.0);
          EXPECT_LE(got[i].distance, d_max);
        }
        EXPECT_GE(got.size(), previous);
        previous = got.size();
      }
    }
  }
}

}  // namespace
}  // namespace sylattack
