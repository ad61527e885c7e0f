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

#include "sylattack/eval_metrics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "sylattack/error.h"

namespace sylattack {

std::size_t Levenshtein(std::span<const std::string> a,
                        std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Two-row DP over the shorter sequence.
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t Levenshtein(const SyllableSequence& a, const SyllableSequence& b) {
  return Levenshtein(std::span<const std::string>(a.syllables()),
                     std::span<const std::string>(b.syllables()));
}

EvaluationReport Aggregate(std::vector<AttackOutcome> outcomes,
                           std::vector<std::string> ground_truth,
                           const ReportMeta& meta) {
  if (outcomes.size() != ground_truth.size()) {
    throw Error(ErrorCategory::kInvalidArgument,
                "aggregate: " + std::to_string(outcomes.size()) +
                    " outcomes for " + std::to_string(ground_truth.size()) +
                    " labels");
  }
  EvaluationReport report;
  report.model_id = meta.model_id;
  report.dataset_id = meta.dataset_id;
  report.d_max = meta.d_max;
  report.samples = outcomes.size();
  report.attacked = outcomes.size();

  std::size_t correct_pre = 0;
  std::size_t correct_post = 0;
  std::size_t ld_sum = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const AttackOutcome& o = outcomes[i];
    if (o.original_label_name == ground_truth[i]) ++correct_pre;
    const std::string& post = o.success ? o.final_label_name : o.original_label_name;
    if (post == ground_truth[i]) ++correct_post;
    if (o.success) {
      ++report.successes;
      ld_sum += o.levenshtein;
    } else {
      ++report.failures[std::string(FailureReasonName(o.failure_reason))];
    }
  }
  const double n = static_cast<double>(report.samples);
  if (report.samples > 0) {
    report.accuracy_pre = static_cast<double>(correct_pre) / n;
    report.accuracy_post = static_cast<double>(correct_post) / n;
  }
  report.adv = report.accuracy_pre - report.accuracy_post;
  if (report.attacked > 0) {
    report.asr = static_cast<double>(report.successes) /
                 static_cast<double>(report.attacked);
  }
  if (report.successes > 0) {
    report.average_ld = static_cast<double>(ld_sum) /
                        static_cast<double>(report.successes);
  }
  report.outcomes = std::move(outcomes);
  report.ground_truth = std::move(ground_truth);
  return report;
}

void CheckReportInvariants(const EvaluationReport& report) {
  auto violated = [&](const std::string& what) {
    throw Error(ErrorCategory::kInvariant,
                "report (d_max " + std::to_string(report.d_max) + "): " + what);
  };
  if (std::abs(report.adv - (report.accuracy_pre - report.accuracy_post)) > 1e-12) {
    violated("adv != accuracy_pre - accuracy_post");
  }
  if (report.asr < 0.0 || report.asr > 1.0) violated("asr outside [0, 1]");
  if (report.attacked > 0 &&
      report.asr != static_cast<double>(report.successes) /
                        static_cast<double>(report.attacked)) {
    violated("asr != successes / attacked");
  }
  if (report.successes > 0 && (!report.average_ld || *report.average_ld < 1.0)) {
    violated("average_ld < 1 with successful attacks");
  }
  if (report.successes == 0 && report.average_ld) {
    violated("average_ld set without successes");
  }
  std::size_t failed = 0;
  for (const auto& [reason, count] : report.failures) failed += count;
  if (failed + report.successes != report.attacked) {
    violated("successes + failures != attacked");
  }
  if (report.outcomes.size() != report.samples ||
      report.ground_truth.size() != report.samples) {
    violated("per-sample lists do not match the sample count");
  }
  for (const auto& o : report.outcomes) {
    if (o.success && o.final_label == o.original_label) {
      violated("success without a label change");
    }
    if (o.levenshtein > o.substitutions.size()) {
      violated("levenshtein exceeds the substitution count");
    }
  }
}

EvaluationReport RunAttack(std::span<const LabeledText> dataset,
                           VictimOracle& victim, const EmbeddingTable& table,
                           const AttackConfig& config, const RunOptions& options) {
  OracleSession session(victim, options.batch_limit);
  std::vector<AttackOutcome> outcomes(dataset.size());

  const std::size_t jobs =
      std::max<std::size_t>(1, std::min(options.jobs, dataset.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      outcomes[i] = Attack(session, dataset[i].text, table, config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < dataset.size();
           i = next.fetch_add(1)) {
        try {
          outcomes[i] = Attack(session, dataset[i].text, table, config);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t recorded = 0;
  for (const auto& o : outcomes) recorded += o.queries;
  if (recorded != session.query_count()) {
    throw Error(ErrorCategory::kInvariant,
                "session counted " + std::to_string(session.query_count()) +
                    " queries, outcomes record " + std::to_string(recorded));
  }

  std::vector<std::string> truth;
  truth.reserve(dataset.size());
  for (const auto& r : dataset) truth.push_back(r.label);
  EvaluationReport report = Aggregate(
      std::move(outcomes), std::move(truth),
      {options.model_id, options.dataset_id, config.d_max});
  CheckReportInvariants(report);
  return report;
}

namespace {

bool PlanComplete(const AttackOutcome& o) {
  return o.failure_reason != FailureReason::kOracleError &&
         o.failure_reason != FailureReason::kBudget &&
         o.plans.size() == o.num_syllables;
}

}  // namespace

AblationResult Ablate(std::span<const LabeledText> dataset, VictimOracle& victim,
                      const EmbeddingTable& table, const AttackConfig& base,
                      std::span<const double> d_max_list,
                      const RunOptions& options) {
  if (d_max_list.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "ablation needs at least one d_max");
  }
  std::vector<double> sorted(d_max_list.begin(), d_max_list.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() <= 0.0) {
    throw Error(ErrorCategory::kInvalidArgument, "d_max values must be positive");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCategory::kInvalidArgument, "d_max values must be distinct");
  }

  AblationResult result;
  for (double d_max : d_max_list) {
    AttackConfig config = base;
    config.d_max = d_max;
    result.reports.push_back(RunAttack(dataset, victim, table, config, options));
  }

  std::vector<std::size_t> by_dmax(result.reports.size());
  std::iota(by_dmax.begin(), by_dmax.end(), std::size_t{0});
  std::sort(by_dmax.begin(), by_dmax.end(), [&](std::size_t a, std::size_t b) {
    return result.reports[a].d_max < result.reports[b].d_max;
  });
  for (std::size_t k = 1; k < by_dmax.size(); ++k) {
    const EvaluationReport& lo = result.reports[by_dmax[k - 1]];
    const EvaluationReport& hi = result.reports[by_dmax[k]];
    if (hi.adv < lo.adv) result.adv_non_decreasing = false;
    if (hi.asr < lo.asr) result.asr_non_decreasing = false;
    for (std::size_t s = 0; s < lo.outcomes.size(); ++s) {
      const AttackOutcome& a = lo.outcomes[s];
      const AttackOutcome& b = hi.outcomes[s];
      if (!PlanComplete(a) || !PlanComplete(b)) continue;
      for (std::size_t p = 0; p < a.plans.size(); ++p) {
        const auto& pa = a.plans[p];
        const auto& pb = b.plans[p];
        const bool shrunk =
            pb.candidate_count < pa.candidate_count ||
            (pa.delta_p_star && (!pb.delta_p_star || *pb.delta_p_star < *pa.delta_p_star));
        if (shrunk) {
          result.plan_delta_monotone = false;
          std::ostringstream os;
          os << "sample " << s << " position " << p << ": d_max " << lo.d_max
             << " -> " << hi.d_max;
          result.plan_violations.push_back(os.str());
        }
      }
    }
  }
  return result;
}

}  // namespace sylattack
