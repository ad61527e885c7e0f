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

#ifndef SYLATTACK_SYNTHETIC_H_
#define SYLATTACK_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sylattack/embedding_store.h"
#include "sylattack/reference_victim.h"

namespace sylattack {

// A desk-scale two-class benchmark whose embedding geometry is known
// exactly. Vocabulary:
//
//   strong tokens  each class has one per cluster; the two are each other's
//                  cross-class synonym at distance 0.10
//   neutral tokens three per cluster, 0.20 from both strong tokens
//   distractors    one per cluster, 0.70 from the strong tokens
//   weak tokens    mildly class-skewed pairs, 0.40 apart across classes
//
// Clusters live in mutually orthogonal subspaces (distance 1 across them),
// and the whole table is then turned by a seeded product of Givens
// rotations, which preserves every distance. Synonyms are reachable at
// d_max 0.1340, neutral swaps from 0.2929 on, weak swaps only at 0.5.
struct SyntheticOptions {
  std::uint64_t seed = 0;
  std::size_t clusters = 12;
  std::size_t weak_pairs = 12;
  std::size_t train_per_class = 200;
  std::size_t test_per_class = 100;
  std::size_t min_syllables = 8;
  std::size_t max_syllables = 20;
};

inline constexpr double kSynonymDistance = 0.10;
inline constexpr double kNeutralDistance = 0.20;
inline constexpr double kWeakPairDistance = 0.40;
inline constexpr double kDistractorDistance = 0.70;

// A pair of tokens and the distance the construction promises.
struct DistanceTier {
  std::string a;
  std::string b;
  double distance = 0.0;
  std::string tier;  // "synonym", "neutral", "weak", "distractor", "orthogonal"
};

struct SyntheticBenchmark {
  std::vector<std::string> labels;  // {"neg", "pos"}
  std::vector<LabeledText> train;
  std::vector<LabeledText> test;
  // Includes a few non-Tibetan junk entries for the cleaning step.
  EmbeddingTable embeddings;
  std::vector<DistanceTier> tiers;
};

SyntheticBenchmark GenerateSynthetic(const SyntheticOptions& options = {});

// Returns one message per tier whose distance misses its target by more
// than `tolerance` (or whose tokens are missing).
std::vector<std::string> VerifyTiers(const EmbeddingTable& table,
                                     const std::vector<DistanceTier>& tiers,
                                     double tolerance = 1e-9);

// Writes train.jsonl, test.jsonl, embeddings.vec and tiers.tsv into `dir`
// (created if needed).
void WriteSynthetic(const SyntheticBenchmark& bench, const std::string& dir);

}  // namespace sylattack

#endif  // SYLATTACK_SYNTHETIC_H_
