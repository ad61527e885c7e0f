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

#include "sylattack/synthetic.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "sylattack/dataset.h"
#include "sylattack/error.h"
#include "sylattack/report_io.h"
#include "sylattack/utf8.h"

namespace sylattack {

namespace {

// mt19937_64 output is fixed by the standard; the std distributions are not,
// so bounded draws are done by hand to keep files identical across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi].
  std::size_t Between(std::size_t lo, std::size_t hi) {
    const std::uint64_t span = hi - lo + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::size_t>(draw % span);
  }

  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  const T& Pick(const std::vector<T>& items) {
    return items[Between(0, items.size() - 1)];
  }

  template <typename T>
  void Shuffle(std::vector<T>* items) {
    for (std::size_t i = items->size(); i > 1; --i) {
      std::swap((*items)[i - 1], (*items)[Between(0, i - 1)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Consonants U+0F40..U+0F69 minus the unassigned U+0F48.
std::vector<char32_t> TibetanConsonants() {
  std::vector<char32_t> out;
  for (char32_t cp = 0x0F40; cp <= 0x0F69; ++cp) {
    if (cp != 0x0F48) out.push_back(cp);
  }
  return out;
}

std::string TibetanToken(std::size_t id) {
  static const std::vector<char32_t> consonants = TibetanConsonants();
  static constexpr char32_t kVowels[] = {0, 0x0F72, 0x0F74, 0x0F7A, 0x0F7C};
  const std::size_t c = consonants.size();
  std::string token;
  AppendUtf8(consonants[id % c], &token);
  AppendUtf8(consonants[(id / c) % c], &token);
  if (const char32_t vowel = kVowels[id % 5]; vowel != 0) AppendUtf8(vowel, &token);
  return token;
}

struct Vocabulary {
  std::vector<std::string> strong_pos, strong_neg;
  std::vector<std::string> weak_pos, weak_neg;
  std::vector<std::string> filler;  // neutrals and distractors
};

std::string Join(const std::vector<std::string>& syllables) {
  std::string text;
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    if (i > 0) AppendUtf8(kTsheg, &text);
    text += syllables[i];
  }
  AppendUtf8(kShad, &text);
  return text;
}

LabeledText MakeSample(bool positive, const Vocabulary& vocab,
                       const SyntheticOptions& options, Rng* rng) {
  const auto& strong_own = positive ? vocab.strong_pos : vocab.strong_neg;
  const auto& weak_own = positive ? vocab.weak_pos : vocab.weak_neg;
  const auto& weak_other = positive ? vocab.weak_neg : vocab.weak_pos;

  const std::size_t length = rng->Between(options.min_syllables, options.max_syllables);
  // Most samples carry strong evidence; the rest rely on weak tokens alone.
  const bool has_strong = rng->Unit() < 0.7;
  const std::size_t strong = has_strong ? rng->Between(1, 2) : 0;
  const std::size_t weak = has_strong ? rng->Between(1, 3) : rng->Between(3, 5);
  const std::size_t contrary = rng->Between(0, 1);

  std::vector<std::string> syllables;
  for (std::size_t k = 0; k < strong; ++k) syllables.push_back(rng->Pick(strong_own));
  for (std::size_t k = 0; k < weak; ++k) syllables.push_back(rng->Pick(weak_own));
  for (std::size_t k = 0; k < contrary; ++k) syllables.push_back(rng->Pick(weak_other));
  while (syllables.size() < length) syllables.push_back(rng->Pick(vocab.filler));
  rng->Shuffle(&syllables);
  return {Join(syllables), positive ? "pos" : "neg"};
}

}  // namespace

SyntheticBenchmark GenerateSynthetic(const SyntheticOptions& options) {
  if (options.clusters == 0 || options.weak_pairs == 0 ||
      options.min_syllables < 8 || options.max_syllables < options.min_syllables) {
    throw Error(ErrorCategory::kInvalidArgument, "bad synthetic benchmark options");
  }
  Rng rng(options.seed);
  SyntheticBenchmark bench;
  bench.labels = {"neg", "pos"};

  constexpr std::size_t kClusterDims = 5;
  constexpr std::size_t kNeutralsPerCluster = 3;
  const std::vector<std::string> junk = {"MP3", "PNG", "File", "</s>"};
  const std::size_t dim =
      options.clusters * kClusterDims + options.weak_pairs * 2 + junk.size();

  // Angles realizing the distance tiers.
  //   a, b = cos(alpha) e1 +- sin(alpha) e2      d(a, b) = 1 - cos(2 alpha)
  //   n_k  = cos(beta) e1 + sin(beta) u_k         d(a, n) = 1 - cos(alpha)cos(beta)
  //   z    = cos(gamma) e1 + sin(gamma) e5        d(a, z) = 1 - cos(alpha)cos(gamma)
  // with u_k at 0/120/240 degrees in the (e3, e4) plane.
  const double alpha = 0.5 * std::acos(1.0 - kSynonymDistance);
  const double beta = std::acos((1.0 - kNeutralDistance) / std::cos(alpha));
  const double gamma = std::acos((1.0 - kDistractorDistance) / std::cos(alpha));
  const double delta = 0.5 * std::acos(1.0 - kWeakPairDistance);

  std::vector<EmbeddingTable::Entry> entries;
  std::size_t next_id = 0;
  auto add = [&](std::vector<double> v) {
    entries.push_back({TibetanToken(next_id++), std::move(v)});
    return entries.back().token;
  };
  Vocabulary vocab;

  for (std::size_t c = 0; c < options.clusters; ++c) {
    const std::size_t base = c * kClusterDims;
    auto vec = [&] { return std::vector<double>(dim, 0.0); };

    auto a = vec();
    a[base] = std::cos(alpha);
    a[base + 1] = std::sin(alpha);
    auto b = vec();
    b[base] = std::cos(alpha);
    b[base + 1] = -std::sin(alpha);
    const std::string pos_token = add(a);
    const std::string neg_token = add(b);
    vocab.strong_pos.push_back(pos_token);
    vocab.strong_neg.push_back(neg_token);
    bench.tiers.push_back({pos_token, neg_token, kSynonymDistance, "synonym"});

    for (std::size_t k = 0; k < kNeutralsPerCluster; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(kNeutralsPerCluster);
      auto n = vec();
      n[base] = std::cos(beta);
      n[base + 2] = std::sin(beta) * std::cos(phi);
      n[base + 3] = std::sin(beta) * std::sin(phi);
      const std::string neutral = add(n);
      vocab.filler.push_back(neutral);
      bench.tiers.push_back({pos_token, neutral, kNeutralDistance, "neutral"});
      bench.tiers.push_back({neg_token, neutral, kNeutralDistance, "neutral"});
    }

    auto z = vec();
    z[base] = std::cos(gamma);
    z[base + 4] = std::sin(gamma);
    const std::string distractor = add(z);
    vocab.filler.push_back(distractor);
    bench.tiers.push_back({pos_token, distractor, kDistractorDistance, "distractor"});
    bench.tiers.push_back({neg_token, distractor, kDistractorDistance, "distractor"});
  }

  for (std::size_t w = 0; w < options.weak_pairs; ++w) {
    const std::size_t base = options.clusters * kClusterDims + 2 * w;
    std::vector<double> a(dim, 0.0), b(dim, 0.0);
    a[base] = b[base] = std::cos(delta);
    a[base + 1] = std::sin(delta);
    b[base + 1] = -std::sin(delta);
    const std::string pos_token = add(a);
    const std::string neg_token = add(b);
    vocab.weak_pos.push_back(pos_token);
    vocab.weak_neg.push_back(neg_token);
    bench.tiers.push_back({pos_token, neg_token, kWeakPairDistance, "weak"});
  }
  if (options.clusters > 1) {
    bench.tiers.push_back(
        {vocab.strong_pos[0], vocab.strong_neg[1], 1.0, "orthogonal"});
  }
  bench.tiers.push_back({vocab.strong_pos[0], vocab.weak_neg[0], 1.0, "orthogonal"});

  for (std::size_t j = 0; j < junk.size(); ++j) {
    std::vector<double> v(dim, 0.0);
    v[dim - junk.size() + j] = 1.0;
    entries.push_back({junk[j], std::move(v)});
  }

  // Seeded rotation of the whole space.
  const std::size_t rotations = 4 * dim;
  for (std::size_t r = 0; r < rotations; ++r) {
    const std::size_t i = rng.Between(0, dim - 1);
    std::size_t j = rng.Between(0, dim - 2);
    if (j >= i) ++j;
    const double theta = 2.0 * std::numbers::pi * rng.Unit();
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    for (auto& entry : entries) {
      const double xi = entry.values[i];
      const double xj = entry.values[j];
      entry.values[i] = cs * xi - sn * xj;
      entry.values[j] = sn * xi + cs * xj;
    }
  }
  bench.embeddings = EmbeddingTable::FromEntries(dim, std::move(entries));

  const auto problems = VerifyTiers(bench.embeddings, bench.tiers);
  if (!problems.empty()) {
    throw Error(ErrorCategory::kInvariant,
                "synthetic geometry check failed: " + problems.front());
  }

  for (std::size_t i = 0; i < options.train_per_class; ++i) {
    bench.train.push_back(MakeSample(true, vocab, options, &rng));
    bench.train.push_back(MakeSample(false, vocab, options, &rng));
  }
  for (std::size_t i = 0; i < options.test_per_class; ++i) {
    bench.test.push_back(MakeSample(true, vocab, options, &rng));
    bench.test.push_back(MakeSample(false, vocab, options, &rng));
  }
  return bench;
}

std::vector<std::string> VerifyTiers(const EmbeddingTable& table,
                                     const std::vector<DistanceTier>& tiers,
                                     double tolerance) {
  std::vector<std::string> problems;
  for (const auto& tier : tiers) {
    const auto a = table.Find(tier.a);
    const auto b = table.Find(tier.b);
    if (!a || !b) {
      problems.push_back(tier.tier + " pair " + tier.a + "/" + tier.b + " missing");
      continue;
    }
    const double d = CosineDistance(*a, *b);
    if (std::abs(d - tier.distance) > tolerance) {
      std::ostringstream os;
      os << tier.tier << " pair " << tier.a << "/" << tier.b << ": distance "
         << FormatDouble(d) << ", expected " << FormatDouble(tier.distance);
      problems.push_back(os.str());
    }
  }
  return problems;
}

void WriteSynthetic(const SyntheticBenchmark& bench, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::kIo, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path root(dir);

  auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
    return out;
  };
  {
    auto out = open(root / "train.jsonl");
    WriteJsonl(bench.train, out);
  }
  {
    auto out = open(root / "test.jsonl");
    WriteJsonl(bench.test, out);
  }
  {
    auto out = open(root / "embeddings.vec");
    WriteVec(bench.embeddings, out);
  }
  {
    auto out = open(root / "tiers.tsv");
    out << "tier\ta\tb\tdistance\n";
    for (const auto& t : bench.tiers) {
      out << t.tier << '\t' << t.a << '\t' << t.b << '\t' << FormatDouble(t.distance)
          << "\n";
    }
  }
}

}  // namespace sylattack
