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

#ifndef SYLATTACK_VICTIM_ORACLE_H_
#define SYLATTACK_VICTIM_ORACLE_H_

#include <atomic>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sylattack {

// P(y | x) over the oracle's K labels, in the oracle's label order.
struct ProbabilityDistribution {
  std::vector<double> probs;

  std::size_t num_classes() const { return probs.size(); }
  double operator[](std::size_t k) const { return probs[k]; }
  bool operator==(const ProbabilityDistribution&) const = default;
};

inline constexpr double kDistributionSumTolerance = 1e-6;

// Throws Error(kOracleProtocol) unless K >= 2 (or K == expected_classes when
// given), every entry is in [0, 1] and the entries sum to 1 within 1e-6.
void ValidateDistribution(const ProbabilityDistribution& dist,
                          std::size_t expected_classes = 0);

struct LabelPrediction {
  std::size_t index = 0;
  double probability = 0.0;
  bool operator==(const LabelPrediction&) const = default;
};

// argmax with ties going to the lowest index.
LabelPrediction PredictLabel(const ProbabilityDistribution& dist);

// The black-box classifier F. Implementations must be deterministic: the
// same text always yields the same distribution.
class VictimOracle {
 public:
  virtual ~VictimOracle() = default;

  virtual const std::vector<std::string>& labels() const = 0;
  std::size_t num_classes() const { return labels().size(); }

  // Largest batch the oracle accepts in one Classify call.
  virtual std::size_t max_batch() const = 0;

  // One distribution per text, in order. texts.size() <= max_batch().
  virtual std::vector<ProbabilityDistribution> Classify(
      std::span<const std::string> texts) = 0;
};

// Query accounting in front of an oracle. Splits oversized requests into
// batches of at most batch_limit texts and counts every text sent. The
// counter is atomic, so one session may be shared by concurrent callers.
class OracleSession {
 public:
  // batch_limit 0 means "whatever the oracle advertises".
  explicit OracleSession(VictimOracle& oracle, std::size_t batch_limit = 0);

  OracleSession(const OracleSession&) = delete;
  OracleSession& operator=(const OracleSession&) = delete;

  std::vector<ProbabilityDistribution> Classify(
      std::span<const std::string> texts);
  ProbabilityDistribution ClassifyOne(const std::string& text);

  std::size_t query_count() const { return query_count_.load(); }
  std::size_t batch_limit() const { return batch_limit_; }
  const VictimOracle& oracle() const { return oracle_; }
  const std::vector<std::string>& labels() const { return oracle_.labels(); }

 private:
  VictimOracle& oracle_;
  std::size_t batch_limit_;
  std::atomic<std::size_t> query_count_{0};
};

}  // namespace sylattack

#endif  // SYLATTACK_VICTIM_ORACLE_H_
