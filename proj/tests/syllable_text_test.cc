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

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "sylattack/error.h"
#include "sylattack/utf8.h"

namespace sylattack {
namespace {

std::string U8(std::u32string_view cps) {
  std::string out;
  for (char32_t cp : cps) AppendUtf8(cp, &out);
  return out;
}

const std::string kT = U8(U"་");  // tsheg
const std::string kS = U8(U"།");  // shad

TEST(SegmentTest, AsciiSpaces) {
  const auto seq = Segment("a b  c");
  EXPECT_EQ(seq.syllables(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(seq.separators(), (std::vector<std::string>{"", " ", "  ", ""}));
}

TEST(SegmentTest, EmptyAndAllDelimiters) {
  EXPECT_EQ(Segment("").size(), 0u);
  EXPECT_EQ(Segment("").separators(), std::vector<std::string>{""});
  const auto seq = Segment(kT + " " + kS);
  EXPECT_EQ(seq.size(), 0u);
  EXPECT_EQ(Reconstruct(seq), kT + " " + kS);
}

TEST(SegmentTest, TibetanPhraseEndingInShad) {
  const std::string ka = U8(U"ཀ"), kha = U8(U"ཁ"), ga = U8(U"ག");
  const std::string text = ka + kT + kha + kT + ga + kS;
  const auto seq = Segment(text);
  EXPECT_EQ(seq.syllables(), (std::vector<std::string>{ka, kha, ga}));
  EXPECT_EQ(seq.separators(), (std::vector<std::string>{"", kT, kT, kS}));
  EXPECT_EQ(Reconstruct(seq), text);
}

TEST(SegmentTest, InvalidUtf8IsSyllableMaterial) {
  const std::string text = std::string("a\xff") + " b";
  const auto seq = Segment(text);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(seq.syllable(0), "a\xff");
  EXPECT_EQ(Reconstruct(seq), text);
}

TEST(SegmentTest, CustomPolicy) {
  DelimiterPolicy comma({U','});
  const auto seq = Segment("x,y z", comma);
  EXPECT_EQ(seq.syllables(), (std::vector<std::string>{"x", "y z"}));
  EXPECT_TRUE(comma.ContainsDelimiter("a,b"));
  EXPECT_FALSE(comma.ContainsDelimiter("a b"));
}

TEST(SegmentTest, RoundTripProperty) {
  const std::u32string alphabet = U"ཀཁི་།༎ a\n";
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::u32string cps;
    const std::size_t len = rng() % 30;
    for (std::size_t i = 0; i < len; ++i) cps.push_back(alphabet[rng() % alphabet.size()]);
    std::string text = U8(cps);
    if (trial % 10 == 0) text += "\x80";
    const auto seq = Segment(text);
    EXPECT_EQ(Reconstruct(seq), text);
    EXPECT_EQ(seq.separators().size(), seq.size() + 1);
    for (const auto& s : seq.syllables()) {
      EXPECT_FALSE(s.empty());
      EXPECT_FALSE(DelimiterPolicy::Default().ContainsDelimiter(s));
    }
  }
}

TEST(SubstituteTest, ChangesOnlyOnePosition) {
  const auto seq = Segment("a" + kT + "b" + kT + "c" + kS);
  const auto out = Substitute(seq, 1, "zz");
  EXPECT_EQ(out.separators(), seq.separators());
  EXPECT_EQ(out.syllables(), (std::vector<std::string>{"a", "zz", "c"}));
  EXPECT_EQ(Reconstruct(out), "a" + kT + "zz" + kT + "c" + kS);
}

TEST(SubstituteTest, Rejects) {
  const auto seq = Segment("a b");
  EXPECT_THROW(Substitute(seq, 2, "x"), Error);
  EXPECT_THROW(Substitute(seq, 0, ""), Error);
  EXPECT_THROW(SubstituteChecked(seq, 0, "x y", DelimiterPolicy::Default()), Error);
  EXPECT_NO_THROW(SubstituteChecked(seq, 0, "xy", DelimiterPolicy::Default()));
  try {
    Substitute(seq, 5, "x");
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kInvalidArgument);
  }
}

TEST(MaskTest, EnumeratesEveryPosition) {
  const auto seq = Segment("a b c");
  const std::vector<std::string> expected = {"<UNK> b c", "a <UNK> c", "a b <UNK>"};
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(Reconstruct(Mask(seq, i)), expected[i]);
  }
  EXPECT_EQ(Reconstruct(Mask(seq, 0, "?")), "? b c");
}

TEST(SyllableSequenceTest, ConstructorChecks) {
  EXPECT_THROW(SyllableSequence({"a"}, {""}), Error);
  EXPECT_THROW(SyllableSequence({""}, {"", ""}), Error);
  EXPECT_NO_THROW(SyllableSequence({"a"}, {"", ""}));
}

TEST(Utf8Test, RoundTripAndInvalid) {
  const std::u32string cps = U"aཀ\U0001F600";
  const auto decoded = DecodeUtf8(U8(cps));
  EXPECT_EQ(std::u32string(decoded.begin(), decoded.end()), cps);
  EXPECT_EQ(U8(cps).size(), 1u + 3u + 4u);
  const Utf8Unit bad = DecodeUtf8At("\xe0\x80", 0);
  EXPECT_FALSE(bad.valid);
  EXPECT_EQ(bad.length, 1u);
}

}  // namespace
}  // namespace sylattack
