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

#ifndef SYLATTACK_ATTACK_ENGINE_H_
#define SYLATTACK_ATTACK_ENGINE_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sylattack/embedding_store.h"
#include "sylattack/syllable_text.h"
#include "sylattack/victim_oracle.h"

namespace sylattack {

// 45 degrees between embeddings.
inline constexpr double kDefaultDMax = 0.2929;
// 30, 45 and 60 degrees.
inline constexpr std::array<double, 3> kAblationPreset = {0.1340, 0.2929, 0.5};

// Per-sample caps for slow (remote) victims. Zero disables a cap.
struct AttackLimits {
  std::size_t max_queries = 0;
  std::chrono::milliseconds max_wall_time{0};
};

struct AttackConfig {
  double d_max = kDefaultDMax;
  std::string unk_token = std::string(kDefaultUnkToken);
  DelimiterPolicy delimiters = DelimiterPolicy::Default();
  AttackLimits limits;
  // Extension, off by default: leave positions whose best single
  // substitution does not lower P(y_orig) out of the greedy phase.
  bool skip_nonpositive = false;
};

// Everything the attack learned about one syllable position.
struct PositionPlan {
  std::size_t position = 0;
  std::string syllable;
  double saliency = 0.0;            // P(y|x) - P(y|x with <UNK> here)
  bool in_vocabulary = false;       // syllable has an embedding
  std::size_t candidate_count = 0;  // |C_i|
  // Present together, exactly when candidate_count > 0.
  std::optional<std::string> best_substitute;
  std::optional<double> delta_p_star;
  std::optional<double> score;  // softmax(S)_i * delta_p_star

  bool operator==(const PositionPlan&) const = default;
};

struct Substitution {
  std::size_t position = 0;
  std::string original;
  std::string substitute;
  bool operator==(const Substitution&) const = default;
};

enum class FailureReason {
  kNone,
  kExhaustedPositions,  // every planned substitution applied, label held
  kEmptyPlans,          // no position had a candidate
  kOracleError,
  kBudget,
};

std::string_view FailureReasonName(FailureReason reason);
FailureReason ParseFailureReason(std::string_view name);

struct AttackOutcome {
  std::string original_text;
  std::size_t num_syllables = 0;

  std::size_t original_label = 0;
  std::string original_label_name;
  double original_confidence = 0.0;

  bool success = false;
  std::string adversarial_text;  // set on success only
  // Applied greedy substitutions, in application order.
  std::vector<Substitution> substitutions;

  // The adversarial text's prediction on success, the original otherwise.
  std::size_t final_label = 0;
  std::string final_label_name;
  double final_confidence = 0.0;

  std::size_t queries = 0;
  std::size_t greedy_steps = 0;
  // Between the original and the last greedy text (0 if none was built).
  std::size_t levenshtein = 0;

  FailureReason failure_reason = FailureReason::kNone;
  std::string failure_detail;

  std::vector<PositionPlan> plans;  // one per position, by position
  std::vector<std::size_t> order;   // greedy order over positions

  bool operator==(const AttackOutcome&) const = default;
};

// Thrown by BudgetedOracle when a cap would be exceeded.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Session wrapper that enforces AttackLimits and counts this sample's
// queries, independent of anything else sharing the session.
class BudgetedOracle {
 public:
  BudgetedOracle(OracleSession& session, const AttackLimits& limits);

  std::vector<ProbabilityDistribution> Classify(std::span<const std::string> texts);
  std::size_t queries() const { return queries_; }
  const std::vector<std::string>& labels() const { return session_.labels(); }

 private:
  OracleSession& session_;
  AttackLimits limits_;
  std::chrono::steady_clock::time_point start_;
  std::size_t queries_ = 0;
};

// S_i for every position: n masked texts, one batch.
std::vector<double> Saliency(BudgetedOracle& oracle, const SyllableSequence& seq,
                             std::size_t y_orig, double p_orig,
                             std::string_view unk_token = kDefaultUnkToken);
std::vector<double> Saliency(OracleSession& session, const SyllableSequence& seq,
                             std::size_t y_orig, double p_orig,
                             std::string_view unk_token = kDefaultUnkToken);

struct BestSubstitution {
  std::string token;
  double delta_p = 0.0;
  std::size_t candidate_index = 0;  // into the candidate set
};

// argmax over the candidates of p_orig - P(y_orig | seq with position
// replaced), each replacement applied to `seq` alone; the first maximum in
// candidate-set order wins. nullopt for an empty set, with no queries used.
std::optional<BestSubstitution> FindBestSubstitution(
    BudgetedOracle& oracle, const SyllableSequence& seq, std::size_t position,
    const CandidateSet& candidates, std::size_t y_orig, double p_orig);
std::optional<BestSubstitution> FindBestSubstitution(
    OracleSession& session, const SyllableSequence& seq, std::size_t position,
    const CandidateSet& candidates, std::size_t y_orig, double p_orig);

// softmax over all saliencies.
std::vector<double> SaliencyWeights(std::span<const double> saliencies);

// Fills PositionPlan::score for positions with a best substitute and returns
// those positions by descending score, ties by ascending position. The
// softmax covers every position, including ones without candidates.
std::vector<std::size_t> ScorePositions(std::vector<PositionPlan>* plans,
                                        bool skip_nonpositive = false);

// The full attack on one text. Oracle failures and exhausted budgets end up
// in the outcome's failure_reason rather than propagating.
AttackOutcome Attack(OracleSession& session, std::string_view text,
                     const EmbeddingTable& table, const AttackConfig& config);

}  // namespace sylattack

#endif  // SYLATTACK_ATTACK_ENGINE_H_
