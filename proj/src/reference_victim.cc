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

#include "sylattack/reference_victim.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "sylattack/error.h"

namespace sylattack {

std::string_view UnkPolicyName(UnkPolicy policy) {
  switch (policy) {
    case UnkPolicy::kDrop:
      return "drop";
  }
  return "drop";
}

UnkPolicy ParseUnkPolicy(std::string_view name) {
  if (name == "drop") return UnkPolicy::kDrop;
  throw Error(ErrorCategory::kFormat, "unknown unk_policy '" + std::string(name) + "'");
}

ReferenceVictimModel::ReferenceVictimModel(std::vector<std::string> labels,
                                           std::vector<std::string> vocab,
                                           std::vector<double> weights,
                                           DelimiterPolicy delimiters,
                                           UnkPolicy unk_policy)
    : labels_(std::move(labels)),
      vocab_(std::move(vocab)),
      weights_(std::move(weights)),
      delimiters_(std::move(delimiters)),
      unk_policy_(unk_policy) {
  if (labels_.size() < 2) {
    throw Error(ErrorCategory::kFormat, "reference model needs >= 2 labels");
  }
  if (weights_.size() != labels_.size() * (vocab_.size() + 1)) {
    throw Error(ErrorCategory::kFormat,
                "weight matrix has " + std::to_string(weights_.size()) +
                    " entries, expected K x (V + 1) = " +
                    std::to_string(labels_.size() * (vocab_.size() + 1)));
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCategory::kFormat, "non-finite weight in reference model");
    }
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw Error(ErrorCategory::kFormat, "duplicate vocabulary token '" + vocab_[i] + "'");
    }
  }
}

ReferenceVictimModel ReferenceVictimModel::Zero(std::vector<std::string> labels,
                                                std::vector<std::string> vocab,
                                                DelimiterPolicy delimiters) {
  const std::size_t size = labels.size() * (vocab.size() + 1);
  return ReferenceVictimModel(std::move(labels), std::move(vocab),
                              std::vector<double>(size, 0.0),
                              std::move(delimiters));
}

std::optional<std::size_t> ReferenceVictimModel::FeatureIndex(
    std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseFeatures ReferenceVictimModel::Featurize(std::string_view text) const {
  std::map<std::size_t, double> counts;
  const SyllableSequence seq = Segment(text, delimiters_);
  for (const auto& syllable : seq.syllables()) {
    if (auto index = FeatureIndex(syllable)) {
      counts[*index] += 1.0;
    }
    // UnkPolicy::kDrop: unknown syllables contribute nothing.
  }
  SparseFeatures features;
  features.entries.assign(counts.begin(), counts.end());
  features.entries.emplace_back(vocab_.size(), 1.0);
  return features;
}

std::vector<double> ReferenceVictimModel::Logits(
    const SparseFeatures& features) const {
  std::vector<double> logits(num_classes(), 0.0);
  const std::size_t f = num_features();
  for (std::size_t k = 0; k < num_classes(); ++k) {
    double z = 0.0;
    for (const auto& [index, value] : features.entries) {
      z += weights_[k * f + index] * value;
    }
    logits[k] = z;
  }
  return logits;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - top);
    sum += out[k];
  }
  for (double& p : out) p /= sum;
  return out;
}

ProbabilityDistribution ReferenceVictimModel::PredictFeatures(
    const SparseFeatures& features) const {
  const auto logits = Logits(features);
  return {Softmax(logits)};
}

ProbabilityDistribution ReferenceVictimModel::Predict(std::string_view text) const {
  return PredictFeatures(Featurize(text));
}

ReferenceVictim::ReferenceVictim(std::shared_ptr<const ReferenceVictimModel> model,
                                 std::size_t max_batch)
    : model_(std::move(model)), max_batch_(std::max<std::size_t>(1, max_batch)) {}

std::vector<ProbabilityDistribution> ReferenceVictim::Classify(
    std::span<const std::string> texts) {
  std::vector<ProbabilityDistribution> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(model_->Predict(text));
  return out;
}

LossAndGradient CrossEntropyLoss(std::span<const double> weights,
                                 std::size_t num_classes,
                                 std::size_t num_features,
                                 std::span<const SparseFeatures> samples,
                                 std::span<const std::size_t> targets,
                                 double l2) {
  LossAndGradient result;
  result.gradient.assign(num_classes * num_features, 0.0);
  const std::size_t n = samples.size();
  const std::size_t bias = num_features - 1;
  std::vector<double> logits(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < num_classes; ++k) {
      double z = 0.0;
      for (const auto& [index, value] : samples[i].entries) {
        z += weights[k * num_features + index] * value;
      }
      logits[k] = z;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - top);
    const double log_norm = top + std::log(sum);
    result.loss += log_norm - logits[targets[i]];
    for (std::size_t k = 0; k < num_classes; ++k) {
      const double residual =
          std::exp(logits[k] - log_norm) - (k == targets[i] ? 1.0 : 0.0);
      for (const auto& [index, value] : samples[i].entries) {
        result.gradient[k * num_features + index] += residual * value;
      }
    }
  }
  const double inv_n = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  result.loss *= inv_n;
  for (double& g : result.gradient) g *= inv_n;
  for (std::size_t k = 0; k < num_classes; ++k) {
    for (std::size_t j = 0; j < num_features; ++j) {
      if (j == bias) continue;
      const double w = weights[k * num_features + j];
      result.loss += 0.5 * l2 * w * w;
      result.gradient[k * num_features + j] += l2 * w;
    }
  }
  return result;
}

TrainResult TrainReference(std::span<const LabeledText> dataset,
                           const TrainHyperparams& hyperparams,
                           const DelimiterPolicy& delimiters) {
  if (dataset.empty()) {
    throw Error(ErrorCategory::kInvalidArgument, "training set is empty");
  }
  std::set<std::string> label_set;
  std::set<std::string> vocab_set;
  for (const auto& record : dataset) {
    label_set.insert(record.label);
    const SyllableSequence seq = Segment(record.text, delimiters);
    for (const auto& s : seq.syllables()) {
      if (s != hyperparams.unk_token) vocab_set.insert(s);
    }
  }
  if (label_set.size() < 2) {
    throw Error(ErrorCategory::kInvalidArgument,
                "training set needs at least two classes");
  }
  std::vector<std::string> labels(label_set.begin(), label_set.end());
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  ReferenceVictimModel shape =
      ReferenceVictimModel::Zero(labels, vocab, delimiters);

  std::vector<SparseFeatures> samples;
  std::vector<std::size_t> targets;
  samples.reserve(dataset.size());
  for (const auto& record : dataset) {
    samples.push_back(shape.Featurize(record.text));
    targets.push_back(static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), record.label) -
        labels.begin()));
  }

  const std::size_t k = labels.size();
  const std::size_t f = shape.num_features();
  std::vector<double> weights(k * f, 0.0);
  std::vector<double> history;
  bool diverged = false;
  for (int epoch = 0; epoch < hyperparams.epochs; ++epoch) {
    const auto step =
        CrossEntropyLoss(weights, k, f, samples, targets, hyperparams.l2);
    if (!std::isfinite(step.loss) ||
        (!history.empty() && step.loss > history.back() * (1.0 + 1e-12))) {
      history.push_back(step.loss);
      diverged = true;
      break;
    }
    history.push_back(step.loss);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      weights[j] -= hyperparams.learning_rate * step.gradient[j];
    }
  }
  if (!diverged) {
    const auto final_step =
        CrossEntropyLoss(weights, k, f, samples, targets, hyperparams.l2);
    if (!history.empty() && final_step.loss > history.back() * (1.0 + 1e-12)) {
      diverged = true;
    }
    history.push_back(final_step.loss);
  }
  for (double w : weights) {
    if (!std::isfinite(w)) {
      diverged = true;
      std::fill(weights.begin(), weights.end(), 0.0);
      break;
    }
  }

  ReferenceVictimModel model(std::move(labels), std::move(vocab),
                             std::move(weights), delimiters);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (PredictLabel(model.PredictFeatures(samples[i])).index == targets[i]) {
      ++correct;
    }
  }
  TrainResult result{std::move(model), std::move(history), diverged, 0.0};
  result.train_accuracy =
      static_cast<double>(correct) / static_cast<double>(samples.size());
  return result;
}

nlohmann::json ModelToJson(const ReferenceVictimModel& model) {
  nlohmann::json vocab = nlohmann::json::object();
  for (std::size_t i = 0; i < model.vocab_size(); ++i) {
    vocab[model.vocab()[i]] = i;
  }
  std::vector<std::uint32_t> delimiters(model.delimiters().delimiters().begin(),
                                        model.delimiters().delimiters().end());
  return {
      {"schema", 1},
      {"dim", model.vocab_size()},
      {"labels", model.labels()},
      {"vocab", std::move(vocab)},
      {"weights", std::vector<double>(model.weights().begin(), model.weights().end())},
      {"unk_policy", UnkPolicyName(model.unk_policy())},
      {"delimiter_policy", delimiters},
  };
}

ReferenceVictimModel ModelFromJson(const nlohmann::json& doc) {
  try {
    const std::size_t dim = doc.at("dim").get<std::size_t>();
    auto labels = doc.at("labels").get<std::vector<std::string>>();
    std::vector<std::string> vocab(dim);
    std::vector<bool> filled(dim, false);
    for (const auto& [token, index_json] : doc.at("vocab").items()) {
      const std::size_t index = index_json.get<std::size_t>();
      if (index >= dim || filled[index]) {
        throw Error(ErrorCategory::kFormat,
                    "vocab indices must be dense in [0, dim)");
      }
      vocab[index] = token;
      filled[index] = true;
    }
    if (std::find(filled.begin(), filled.end(), false) != filled.end()) {
      throw Error(ErrorCategory::kFormat, "vocab indices must be dense in [0, dim)");
    }
    auto weights = doc.at("weights").get<std::vector<double>>();
    DelimiterPolicy delimiters = DelimiterPolicy::Default();
    if (doc.contains("delimiter_policy")) {
      auto cps = doc.at("delimiter_policy").get<std::vector<std::uint32_t>>();
      delimiters = DelimiterPolicy(std::vector<char32_t>(cps.begin(), cps.end()));
    }
    const UnkPolicy unk = ParseUnkPolicy(doc.value("unk_policy", std::string("drop")));
    return ReferenceVictimModel(std::move(labels), std::move(vocab),
                                std::move(weights), std::move(delimiters), unk);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::kFormat, std::string("bad model document: ") + e.what());
  }
}

void SaveModel(const ReferenceVictimModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path);
  out << ModelToJson(model).dump() << "\n";
  if (!out) throw Error(ErrorCategory::kIo, "write failed for " + path);
}

ReferenceVictimModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open model file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::kFormat, path + ": " + e.what());
  }
  return ModelFromJson(doc);
}

}  // namespace sylattack
