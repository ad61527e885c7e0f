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

#ifndef SYLATTACK_EVAL_METRICS_H_
#define SYLATTACK_EVAL_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sylattack/attack_engine.h"
#include "sylattack/embedding_store.h"
#include "sylattack/reference_victim.h"
#include "sylattack/syllable_text.h"
#include "sylattack/victim_oracle.h"

namespace sylattack {

// Unit-cost insert/delete/substitute distance over syllable tokens.
// Separators play no part.
std::size_t Levenshtein(std::span<const std::string> a,
                        std::span<const std::string> b);
std::size_t Levenshtein(const SyllableSequence& a, const SyllableSequence& b);

inline constexpr int kReportSchemaVersion = 1;

struct ReportMeta {
  std::string model_id;
  std::string dataset_id;
  double d_max = kDefaultDMax;
};

struct EvaluationReport {
  int schema = kReportSchemaVersion;
  std::string model_id;
  std::string dataset_id;
  double d_max = kDefaultDMax;

  double accuracy_pre = 0.0;
  double accuracy_post = 0.0;
  double adv = 0.0;  // accuracy_pre - accuracy_post
  double asr = 0.0;  // successes / attacked
  // Mean LD over successful attacks; nullopt when there are none.
  std::optional<double> average_ld;

  std::size_t samples = 0;
  std::size_t attacked = 0;
  std::size_t successes = 0;
  std::map<std::string, std::size_t> failures;  // by FailureReasonName

  std::vector<std::string> ground_truth;  // parallel to outcomes
  std::vector<AttackOutcome> outcomes;
};

// accuracy_pre compares each original prediction with the ground truth;
// accuracy_post uses the adversarial prediction for successes and the
// original one otherwise. Every sample counts as attacked. Throws
// Error(kInvalidArgument) when the two lists differ in length.
EvaluationReport Aggregate(std::vector<AttackOutcome> outcomes,
                           std::vector<std::string> ground_truth,
                           const ReportMeta& meta);

// adv identity within 1e-12, asr in [0, 1] and equal to successes/attacked,
// average_ld >= 1 when anything succeeded, counts that add up. Throws
// Error(kInvariant) naming the first violation.
void CheckReportInvariants(const EvaluationReport& report);

struct RunOptions {
  std::size_t jobs = 1;
  std::size_t batch_limit = 0;  // 0: the oracle's own max_batch
  std::string model_id;
  std::string dataset_id;
};

// Attacks every sample. With jobs > 1 samples are spread over threads that
// share one session; outcomes are kept in sample order either way. Throws
// Error(kInvariant) if the session's query count disagrees with the sum of
// per-sample counts.
EvaluationReport RunAttack(std::span<const LabeledText> dataset,
                           VictimOracle& victim, const EmbeddingTable& table,
                           const AttackConfig& config, const RunOptions& options);

struct AblationResult {
  std::vector<EvaluationReport> reports;  // in the order requested
  bool adv_non_decreasing = true;         // ordering by ascending d_max
  bool asr_non_decreasing = true;
  // Each position's delta_p_star never shrinks as d_max grows.
  bool plan_delta_monotone = true;
  std::vector<std::string> plan_violations;
};

// One RunAttack per d_max, same victim and data. Throws
// Error(kInvalidArgument) for an empty list, non-positive or repeated values.
AblationResult Ablate(std::span<const LabeledText> dataset, VictimOracle& victim,
                      const EmbeddingTable& table, const AttackConfig& base,
                      std::span<const double> d_max_list,
                      const RunOptions& options);

}  // namespace sylattack

#endif  // SYLATTACK_EVAL_METRICS_H_
