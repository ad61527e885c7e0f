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

#ifndef SYLATTACK_REFERENCE_VICTIM_H_
#define SYLATTACK_REFERENCE_VICTIM_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sylattack/syllable_text.h"
#include "sylattack/victim_oracle.h"

namespace sylattack {

struct LabeledText {
  std::string text;
  std::string label;
};

// What featurization does with syllables that are not in the vocabulary.
enum class UnkPolicy {
  kDrop,  // contributes nothing; masking removes the syllable's evidence
};

std::string_view UnkPolicyName(UnkPolicy policy);
UnkPolicy ParseUnkPolicy(std::string_view name);

// Sparse syllable counts; index vocab_size() is the bias feature (always 1).
struct SparseFeatures {
  std::vector<std::pair<std::size_t, double>> entries;  // ascending index
  bool operator==(const SparseFeatures&) const = default;
};

// Bag-of-syllables multinomial logistic regression:
//   P(y | x) = softmax(W x), W is K x (V + 1), last column is the bias.
class ReferenceVictimModel {
 public:
  // `vocab` lists tokens in feature-index order. `weights` is row-major
  // K x (V + 1). Throws Error(kFormat) on shape problems, duplicate tokens
  // or non-finite weights.
  ReferenceVictimModel(std::vector<std::string> labels,
                       std::vector<std::string> vocab,
                       std::vector<double> weights,
                       DelimiterPolicy delimiters = DelimiterPolicy::Default(),
                       UnkPolicy unk_policy = UnkPolicy::kDrop);

  static ReferenceVictimModel Zero(std::vector<std::string> labels,
                                   std::vector<std::string> vocab,
                                   DelimiterPolicy delimiters =
                                       DelimiterPolicy::Default());

  std::size_t num_classes() const { return labels_.size(); }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t num_features() const { return vocab_.size() + 1; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t label, std::size_t feature) const {
    return weights_[label * num_features() + feature];
  }
  const DelimiterPolicy& delimiters() const { return delimiters_; }
  UnkPolicy unk_policy() const { return unk_policy_; }

  std::optional<std::size_t> FeatureIndex(std::string_view token) const;

  SparseFeatures Featurize(std::string_view text) const;
  std::vector<double> Logits(const SparseFeatures& features) const;
  ProbabilityDistribution Predict(std::string_view text) const;
  ProbabilityDistribution PredictFeatures(const SparseFeatures& features) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> vocab_;
  std::vector<double> weights_;
  DelimiterPolicy delimiters_;
  UnkPolicy unk_policy_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Numerically stable softmax.
std::vector<double> Softmax(std::span<const double> logits);

// In-process oracle over a shared, immutable model.
class ReferenceVictim : public VictimOracle {
 public:
  explicit ReferenceVictim(std::shared_ptr<const ReferenceVictimModel> model,
                           std::size_t max_batch = 1024);

  const std::vector<std::string>& labels() const override {
    return model_->labels();
  }
  std::size_t max_batch() const override { return max_batch_; }
  std::vector<ProbabilityDistribution> Classify(
      std::span<const std::string> texts) override;

  const ReferenceVictimModel& model() const { return *model_; }

 private:
  std::shared_ptr<const ReferenceVictimModel> model_;
  std::size_t max_batch_;
};

struct TrainHyperparams {
  double learning_rate = 0.1;
  int epochs = 300;
  double l2 = 1e-3;
  // Full-batch descent from zero weights has no random component; the seed
  // is recorded for provenance only.
  std::uint64_t seed = 0;
  // Never admitted to the vocabulary, so masked positions carry no evidence.
  std::string unk_token = std::string(kDefaultUnkToken);
};

struct TrainResult {
  ReferenceVictimModel model;
  std::vector<double> loss_history;  // loss before each step, then final
  bool diverged = false;
  double train_accuracy = 0.0;
};

// Mean cross-entropy plus (l2 / 2) * ||W without bias column||^2.
struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // row-major K x F
};

LossAndGradient CrossEntropyLoss(std::span<const double> weights,
                                 std::size_t num_classes,
                                 std::size_t num_features,
                                 std::span<const SparseFeatures> samples,
                                 std::span<const std::size_t> targets,
                                 double l2);

// Labels are sorted, the vocabulary is every training syllable in sorted
// order. Throws Error(kInvalidArgument) on an empty or single-class dataset.
TrainResult TrainReference(std::span<const LabeledText> dataset,
                           const TrainHyperparams& hyperparams = {},
                           const DelimiterPolicy& delimiters =
                               DelimiterPolicy::Default());

nlohmann::json ModelToJson(const ReferenceVictimModel& model);
ReferenceVictimModel ModelFromJson(const nlohmann::json& doc);
void SaveModel(const ReferenceVictimModel& model, const std::string& path);
ReferenceVictimModel LoadModel(const std::string& path);

}  // namespace sylattack

#endif  // SYLATTACK_REFERENCE_VICTIM_H_
