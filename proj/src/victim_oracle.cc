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

#include "sylattack/victim_oracle.h"

#include <algorithm>
#include <cmath>

#include "sylattack/error.h"

namespace sylattack {

void ValidateDistribution(const ProbabilityDistribution& dist,
                          std::size_t expected_classes) {
  const std::size_t k = dist.num_classes();
  if (k < 2) {
    throw Error(ErrorCategory::kOracleProtocol,
                "distribution has fewer than 2 classes");
  }
  if (expected_classes != 0 && k != expected_classes) {
    throw Error(ErrorCategory::kOracleProtocol,
                "distribution has " + std::to_string(k) + " classes, expected " +
                    std::to_string(expected_classes));
  }
  double sum = 0.0;
  for (double p : dist.probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw Error(ErrorCategory::kOracleProtocol,
                  "probability outside [0, 1]: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionSumTolerance) {
    throw Error(ErrorCategory::kOracleProtocol,
                "probabilities sum to " + std::to_string(sum));
  }
}

LabelPrediction PredictLabel(const ProbabilityDistribution& dist) {
  LabelPrediction best{0, dist.probs.empty() ? 0.0 : dist.probs[0]};
  for (std::size_t k = 1; k < dist.probs.size(); ++k) {
    if (dist.probs[k] > best.probability) best = {k, dist.probs[k]};
  }
  return best;
}

OracleSession::OracleSession(VictimOracle& oracle, std::size_t batch_limit)
    : oracle_(oracle),
      batch_limit_(batch_limit == 0 ? oracle.max_batch()
                                    : std::min(batch_limit, oracle.max_batch())) {
  if (batch_limit_ == 0) batch_limit_ = 1;
}

std::vector<ProbabilityDistribution> OracleSession::Classify(
    std::span<const std::string> texts) {
  if (texts.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "Classify on an empty batch");
  }
  std::vector<ProbabilityDistribution> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += batch_limit_) {
    const std::size_t count = std::min(batch_limit_, texts.size() - start);
    // Counted before the call: a text that reached the oracle is a query
    // whether or not the answer came back.
    query_count_.fetch_add(count);
    auto batch = oracle_.Classify(texts.subspan(start, count));
    if (batch.size() != count) {
      throw Error(ErrorCategory::kOracleProtocol,
                  "oracle returned " + std::to_string(batch.size()) +
                      " rows for " + std::to_string(count) + " texts");
    }
    for (auto& dist : batch) {
      ValidateDistribution(dist, oracle_.num_classes());
      out.push_back(std::move(dist));
    }
  }
  return out;
}

ProbabilityDistribution OracleSession::ClassifyOne(const std::string& text) {
  return std::move(Classify(std::span<const std::string>(&text, 1)).front());
}

}  // namespace sylattack
