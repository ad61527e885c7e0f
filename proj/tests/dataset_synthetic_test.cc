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


#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "sylattack/dataset.h"
#include "sylattack/error.h"
#include "sylattack/experiment.h"
#include "sylattack/reference_victim.h"
#include "sylattack/synthetic.h"

namespace sylattack {
namespace {

using ::testing::HasSubstr;

IngestResult IngestText(const std::string& body, const IngestOptions& options) {
  std::istringstream in(body);
  return IngestStream(in, "data", options);
}

TEST(IngestTest, Jsonl) {
  const auto r = IngestText("{\"text\":\"a b\",\"label\":\"pos\"}\n\n{\"text\":\"c\",\"label\":\"neg\"}\n",
                            {});
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].text, "a b");
  EXPECT_EQ(r.records[1].label, "neg");
}

TEST(IngestTest, Tsv) {
  IngestOptions options;
  options.format = DatasetFormat::kTsv;
  options.skip_header = true;
  const auto r = IngestText("label\ttext\npos\ta\tb\r\n", options);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].text, "a\tb");
  EXPECT_EQ(GuessDatasetFormat("x.tsv"), DatasetFormat::kTsv);
  EXPECT_EQ(GuessDatasetFormat("x.jsonl"), DatasetFormat::kJsonl);
  EXPECT_EQ(ParseDatasetFormat("tsv"), DatasetFormat::kTsv);
  EXPECT_THROW(ParseDatasetFormat("xml"), Error);
}

TEST(IngestTest, MissingLabelNamesTheLine) {
  try {
    IngestText("{\"text\":\"a\",\"label\":\"x\"}\n{\"text\":\"b\"}\n", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kFormat);
    EXPECT_THAT(e.what(), HasSubstr("data:2:"));
    EXPECT_THAT(e.what(), HasSubstr("label"));
  }
  IngestOptions lenient;
  lenient.policy = ErrorPolicy::kSkipAndWarn;
  const auto r = IngestText("{\"text\":\"a\",\"label\":\"x\"}\n{\"text\":\"b\"}\n[1]\n", lenient);
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.rejected, 2u);
  EXPECT_THROW(IngestText("{\"text\":\" \",\"label\":\"x\"}\n", lenient), Error);
}

TEST(IngestTest, JsonlRoundTrip) {
  const std::vector<DatasetRecord> records = {{"\xe0\xbd\x80\xe0\xbc\x8d", "p"}, {"q \"r\"", "n"}};
  std::stringstream ss;
  WriteJsonl(records, ss);
  const auto back = IngestStream(ss, "rt", {}).records;
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].text, records[0].text);
  EXPECT_EQ(back[1].text, records[1].text);
}

TEST(SyntheticTest, TiersHoldAfterRotation) {
  const auto bench = GenerateSynthetic();
  EXPECT_TRUE(VerifyTiers(bench.embeddings, bench.tiers).empty());
  EXPECT_EQ(bench.train.size(), 400u);
  EXPECT_EQ(bench.test.size(), 200u);
  EXPECT_EQ(bench.labels, (std::vector<std::string>{"neg", "pos"}));
  std::size_t synonyms = 0;
  for (const auto& t : bench.tiers) synonyms += t.tier == "synonym";
  EXPECT_EQ(synonyms, 12u);
}

TEST(SyntheticTest, TierDistancesSitInTheirAblationBands) {
  EXPECT_LT(kSynonymDistance, 0.1340);
  EXPECT_GT(kNeutralDistance, 0.1340);
  EXPECT_LT(kNeutralDistance, 0.2929);
  EXPECT_GT(kWeakPairDistance, 0.2929);
  EXPECT_LT(kWeakPairDistance, 0.5);
  EXPECT_GT(kDistractorDistance, 0.5);
}

TEST(SyntheticTest, ReferenceVictimLearnsIt) {
  const auto bench = GenerateSynthetic();
  const auto r = TrainReference(bench.train);
  EXPECT_FALSE(r.diverged);
  EXPECT_GE(r.train_accuracy, 0.95);
}

TEST(SyntheticTest, SameSeedSameFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "sylattack_synth_test";
  std::filesystem::remove_all(dir);
  WriteSynthetic(GenerateSynthetic(), (dir / "a").string());
  WriteSynthetic(GenerateSynthetic(), (dir / "b").string());
  SyntheticOptions other;
  other.seed = 1;
  WriteSynthetic(GenerateSynthetic(other), (dir / "c").string());
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const char* f : {"train.jsonl", "test.jsonl", "embeddings.vec", "tiers.tsv"}) {
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    EXPECT_FALSE(slurp(dir / "a" / f).empty()) << f;
  }
  EXPECT_NE(slurp(dir / "a" / "train.jsonl"), slurp(dir / "c" / "train.jsonl"));
  std::filesystem::remove_all(dir);
}

TEST(ExperimentTest, VictimSpecs) {
  const auto b = ParseVictimSpec("builtin:model.json");
  EXPECT_EQ(b.kind, VictimSpec::Kind::kBuiltin);
  EXPECT_EQ(b.location, "model.json");
  const auto r = ParseVictimSpec("http://localhost:8000/v1");
  EXPECT_EQ(r.kind, VictimSpec::Kind::kRemote);
  EXPECT_EQ(r.location, "http://localhost:8000/v1");
  EXPECT_THROW(ParseVictimSpec("ftp://x"), Error);
  EXPECT_THROW(ParseVictimSpec("builtin:"), Error);
}

TEST(ExperimentTest, DMaxLists) {
  EXPECT_EQ(ParseDMaxList("0.1340,0.2929, 0.5"), (std::vector<double>{0.1340, 0.2929, 0.5}));
  EXPECT_THROW(ParseDMaxList(""), Error);
  EXPECT_THROW(ParseDMaxList("0.1,abc"), Error);
  EXPECT_EQ(AblationReportName(0.1340), "report_dmax_0.134.json");
}

}  // namespace
}  // namespace sylattack
