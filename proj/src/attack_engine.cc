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

#include "sylattack/attack_engine.h"

#include <algorithm>
#include <cmath>

#include "sylattack/error.h"
#include "sylattack/eval_metrics.h"

namespace sylattack {

std::string_view FailureReasonName(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone:
      return "none";
    case FailureReason::kExhaustedPositions:
      return "exhausted_positions";
    case FailureReason::kEmptyPlans:
      return "empty_plans";
    case FailureReason::kOracleError:
      return "oracle_error";
    case FailureReason::kBudget:
      return "budget";
  }
  return "none";
}

FailureReason ParseFailureReason(std::string_view name) {
  for (auto reason : {FailureReason::kNone, FailureReason::kExhaustedPositions,
                      FailureReason::kEmptyPlans, FailureReason::kOracleError,
                      FailureReason::kBudget}) {
    if (FailureReasonName(reason) == name) return reason;
  }
  throw Error(ErrorCategory::kFormat, "unknown failure reason '" + std::string(name) + "'");
}

BudgetedOracle::BudgetedOracle(OracleSession& session, const AttackLimits& limits)
    : session_(session), limits_(limits), start_(std::chrono::steady_clock::now()) {}

std::vector<ProbabilityDistribution> BudgetedOracle::Classify(
    std::span<const std::string> texts) {
  if (limits_.max_queries != 0 && queries_ + texts.size() > limits_.max_queries) {
    throw BudgetExhausted("query cap of " + std::to_string(limits_.max_queries) +
                          " reached");
  }
  if (limits_.max_wall_time.count() > 0 &&
      std::chrono::steady_clock::now() - start_ > limits_.max_wall_time) {
    throw BudgetExhausted("wall-clock cap of " +
                          std::to_string(limits_.max_wall_time.count()) +
                          " ms reached");
  }
  // Counted up front, matching OracleSession: texts sent are queries even
  // when the call fails.
  queries_ += texts.size();
  return session_.Classify(texts);
}

std::vector<double> Saliency(BudgetedOracle& oracle, const SyllableSequence& seq,
                             std::size_t y_orig, double p_orig,
                             std::string_view unk_token) {
  if (seq.empty()) return {};
  std::vector<std::string> masked;
  masked.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    masked.push_back(Reconstruct(Mask(seq, i, unk_token)));
  }
  const auto dists = oracle.Classify(masked);
  std::vector<double> saliency(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    saliency[i] = p_orig - dists[i][y_orig];
  }
  return saliency;
}

std::vector<double> Saliency(OracleSession& session, const SyllableSequence& seq,
                             std::size_t y_orig, double p_orig,
                             std::string_view unk_token) {
  BudgetedOracle oracle(session, {});
  return Saliency(oracle, seq, y_orig, p_orig, unk_token);
}

std::optional<BestSubstitution> FindBestSubstitution(
    BudgetedOracle& oracle, const SyllableSequence& seq, std::size_t position,
    const CandidateSet& candidates, std::size_t y_orig, double p_orig) {
  if (candidates.candidates.empty()) return std::nullopt;
  std::vector<std::string> texts;
  texts.reserve(candidates.candidates.size());
  for (const auto& c : candidates.candidates) {
    texts.push_back(Reconstruct(Substitute(seq, position, c.token)));
  }
  const auto dists = oracle.Classify(texts);
  BestSubstitution best;
  for (std::size_t j = 0; j < dists.size(); ++j) {
    const double delta = p_orig - dists[j][y_orig];
    if (j == 0 || delta > best.delta_p) {
      best = {candidates.candidates[j].token, delta, j};
    }
  }
  return best;
}

std::optional<BestSubstitution> FindBestSubstitution(
    OracleSession& session, const SyllableSequence& seq, std::size_t position,
    const CandidateSet& candidates, std::size_t y_orig, double p_orig) {
  BudgetedOracle oracle(session, {});
  return FindBestSubstitution(oracle, seq, position, candidates, y_orig, p_orig);
}

std::vector<double> SaliencyWeights(std::span<const double> saliencies) {
  std::vector<double> weights(saliencies.size());
  if (saliencies.empty()) return weights;
  const double top = *std::max_element(saliencies.begin(), saliencies.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < saliencies.size(); ++i) {
    weights[i] = std::exp(saliencies[i] - top);
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
  return weights;
}

std::vector<std::size_t> ScorePositions(std::vector<PositionPlan>* plans,
                                        bool skip_nonpositive) {
  std::vector<double> saliencies;
  saliencies.reserve(plans->size());
  for (const auto& plan : *plans) saliencies.push_back(plan.saliency);
  const auto weights = SaliencyWeights(saliencies);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < plans->size(); ++i) {
    PositionPlan& plan = (*plans)[i];
    plan.score.reset();
    if (!plan.delta_p_star) continue;
    plan.score = weights[i] * *plan.delta_p_star;
    if (skip_nonpositive && *plan.delta_p_star <= 0.0) continue;
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ha = *(*plans)[a].score;
    const double hb = *(*plans)[b].score;
    if (ha != hb) return ha > hb;
    return (*plans)[a].position < (*plans)[b].position;
  });
  return order;
}

AttackOutcome Attack(OracleSession& session, std::string_view text,
                     const EmbeddingTable& table, const AttackConfig& config) {
  AttackOutcome outcome;
  outcome.original_text = std::string(text);
  const SyllableSequence seq = Segment(text, config.delimiters);
  outcome.num_syllables = seq.size();
  const auto& labels = session.labels();

  BudgetedOracle oracle(session, config.limits);
  auto fail = [&](FailureReason reason, std::string detail) {
    outcome.success = false;
    outcome.failure_reason = reason;
    outcome.failure_detail = std::move(detail);
    outcome.final_label = outcome.original_label;
    outcome.final_label_name = outcome.original_label_name;
    outcome.final_confidence = outcome.original_confidence;
    outcome.queries = oracle.queries();
    return outcome;
  };

  try {
    // Phase 1: F(x) fixes the label every probability below refers to.
    const std::string original(text);
    const auto original_dist =
        oracle.Classify(std::span<const std::string>(&original, 1)).front();
    const LabelPrediction orig = PredictLabel(original_dist);
    outcome.original_label = orig.index;
    outcome.original_label_name = labels[orig.index];
    outcome.original_confidence = orig.probability;

    // Phase 2: saliency.
    const auto saliency =
        Saliency(oracle, seq, orig.index, orig.probability, config.unk_token);

    // Phase 3: best single substitution per position, always against the
    // original sequence.
    outcome.plans.resize(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      PositionPlan& plan = outcome.plans[i];
      plan.position = i;
      plan.syllable = seq.syllables()[i];
      plan.saliency = saliency[i];
      const CandidateSet candidates = Candidates(table, plan.syllable, config.d_max);
      plan.in_vocabulary = candidates.source_in_table;
      plan.candidate_count = candidates.candidates.size();
      if (auto best = FindBestSubstitution(oracle, seq, i, candidates, orig.index,
                                           orig.probability)) {
        plan.best_substitute = std::move(best->token);
        plan.delta_p_star = best->delta_p;
      }
    }

    // Phase 4: scoring and ordering.
    outcome.order = ScorePositions(&outcome.plans, config.skip_nonpositive);
    if (outcome.order.empty()) {
      return fail(FailureReason::kEmptyPlans, "no position has a candidate");
    }

    // Phase 5: cumulative greedy substitution.
    SyllableSequence adversarial = seq;
    for (const std::size_t i : outcome.order) {
      const PositionPlan& plan = outcome.plans[i];
      adversarial = Substitute(adversarial, i, *plan.best_substitute);
      const std::string candidate_text = Reconstruct(adversarial);
      const auto dist =
          oracle.Classify(std::span<const std::string>(&candidate_text, 1)).front();
      ++outcome.greedy_steps;
      outcome.substitutions.push_back({i, plan.syllable, *plan.best_substitute});
      const LabelPrediction now = PredictLabel(dist);
      if (now.index != orig.index) {
        outcome.success = true;
        outcome.levenshtein = Levenshtein(seq, adversarial);
        outcome.adversarial_text = candidate_text;
        outcome.final_label = now.index;
        outcome.final_label_name = labels[now.index];
        outcome.final_confidence = now.probability;
        outcome.queries = oracle.queries();
        return outcome;
      }
    }
    outcome.levenshtein = Levenshtein(seq, adversarial);
    return fail(FailureReason::kExhaustedPositions,
                "label unchanged after all planned substitutions");
  } catch (const BudgetExhausted& e) {
    return fail(FailureReason::kBudget, e.what());
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::kOracleUnavailable &&
        e.category() != ErrorCategory::kOracleProtocol) {
      throw;
    }
    return fail(FailureReason::kOracleError,
                std::string(CategoryName(e.category())) + ": " + e.what());
  }
}

}  // namespace sylattack
