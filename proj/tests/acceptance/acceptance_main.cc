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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sylattack/attack_engine.h"
#include "sylattack/embedding_store.h"
#include "sylattack/eval_metrics.h"
#include "sylattack/reference_victim.h"
#include "sylattack/report_io.h"
#include "sylattack/synthetic.h"
#include "test_support.h"

namespace sylattack {
namespace {

namespace fs = std::filesystem;
namespace st = ::sylattack::testing;

constexpr double kCandidateDistanceTolerance = 1e-9;
constexpr double kCandidateSecondsLimit = 5.0;
constexpr double kEquivalenceSecondsLimit = 30.0;
constexpr double kScoringTolerance = 1e-12;
constexpr double kGradientStep = 1e-4;
constexpr double kGradientTolerance = 1e-5;
constexpr double kTrainAccuracyFloor = 0.95;
constexpr double kEndToEndSecondsLimit = 60.0;

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Verdict CandidateExactness() {
  Verdict v;
  const auto start = Clock::now();
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 50 && v.pass; ++seed) {
    const auto raw = st::RandomTable(seed, 200, 8);
    const auto table = raw.Build();
    for (const double d_max : {0.1340, 0.2929, 0.5, 1.0}) {
      for (const auto& token : raw.tokens) {
        const auto got = Candidates(table, token, d_max).candidates;
        const auto want = st::BruteForceCandidates(raw, token, d_max);
        const auto diff = st::CompareCandidates(got, want, kCandidateDistanceTolerance);
        if (!diff.empty()) {
          v.Fail("seed " + std::to_string(seed) + " token " + token + ": " + diff);
          break;
        }
        ++checked;
      }
    }
  }
  const double secs = SecondsSince(start);
  if (secs >= kCandidateSecondsLimit) v.Fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = std::to_string(checked) + " sets, " + std::to_string(secs) + " s";
  }
  return v;
}

Verdict AlgorithmEquivalence() {
  Verdict v;
  const auto start = Clock::now();
  std::size_t successes = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = st::RandomAttackInstance(seed);
    ReferenceVictim victim(inst.model, 1 + seed % 5);
    OracleSession session(victim);
    AttackConfig config;
    config.d_max = inst.d_max;
    const auto got = Attack(session, inst.text, inst.table.Build(), config);
    const auto want = st::NaiveAttack(*inst.model, inst.table, inst.syllables, inst.d_max);
    bool same = got.success == want.success && got.queries == want.queries &&
                got.substitutions.size() == want.substitutions.size();
    for (std::size_t i = 0; same && i < want.substitutions.size(); ++i) {
      same = got.substitutions[i].position == want.substitutions[i].first &&
             got.substitutions[i].substitute == want.substitutions[i].second &&
             got.substitutions[i].original == inst.syllables[want.substitutions[i].first];
    }
    if (same && got.success) same = got.adversarial_text == want.adversarial_text;
    if (!same) {
      v.Fail("instance " + std::to_string(seed) + " differs");
      break;
    }
    successes += got.success;
  }
  const double secs = SecondsSince(start);
  if (secs >= kEquivalenceSecondsLimit) v.Fail("took " + std::to_string(secs) + " s");
  if (v.pass) {
    v.detail = "100 instances, " + std::to_string(successes) + " successful, " +
               std::to_string(secs) + " s";
  }
  return v;
}

Verdict ScoringArithmetic() {
  Verdict v;
  std::vector<PositionPlan> plans(3);
  const double s[] = {0.0, std::log(2.0), 0.0};
  const double d[] = {0.3, 0.1, 0.2};
  const double h[] = {0.075, 0.05, 0.05};
  for (std::size_t i = 0; i < 3; ++i) {
    plans[i].position = i;
    plans[i].saliency = s[i];
    plans[i].candidate_count = 1;
    plans[i].best_substitute = "x";
    plans[i].delta_p_star = d[i];
  }
  const auto order = ScorePositions(&plans);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(*plans[i].score - h[i]));
  if (worst > kScoringTolerance) v.Fail("max error " + std::to_string(worst));
  if (order != std::vector<std::size_t>{0, 1, 2}) v.Fail("order is not 0, 1, 2");
  if (v.pass) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max error %.3g", worst);
    v.detail = buf;
  }
  return v;
}

Verdict MetricSuites(const std::vector<EvaluationReport>& emitted) {
  Verdict v;
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500 && v.pass; ++i) {
    const auto a = st::RandomTokens(rng, 6, 3), b = st::RandomTokens(rng, 6, 3);
    if (Levenshtein(a, b) != st::RecursiveLevenshtein(a, a.size(), b, b.size())) {
      v.Fail("pair " + std::to_string(i) + " disagrees with the recursive oracle");
    }
  }
  for (int i = 0; i < 200 && v.pass; ++i) {
    const auto a = st::RandomTokens(rng, 8, 3), b = st::RandomTokens(rng, 8, 3),
               c = st::RandomTokens(rng, 8, 3);
    const bool ok = Levenshtein(a, a) == 0 && ((Levenshtein(a, b) == 0) == (a == b)) &&
                    Levenshtein(a, b) == Levenshtein(b, a) &&
                    Levenshtein(a, c) <= Levenshtein(a, b) + Levenshtein(b, c);
    if (!ok) v.Fail("triple " + std::to_string(i) + " breaks a metric axiom");
  }
  if (emitted.empty()) v.Fail("no reports were emitted");
  for (const auto& report : emitted) {
    try {
      CheckReportInvariants(report);
      CheckReportInvariants(RecomputeReport(report));
    } catch (const std::exception& e) {
      v.Fail(e.what());
    }
  }
  if (v.pass) {
    v.detail = "500 pairs, 200 triples, " + std::to_string(emitted.size()) + " reports";
  }
  return v;
}

Verdict GradientCheck() {
  Verdict v;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = st::RandomGradientInstance(seed, 2 + seed % 3);
    worst = std::max(worst, st::GradientCheckError(g, kGradientStep));
  }
  if (worst > kGradientTolerance) v.Fail("max abs error " + std::to_string(worst));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max abs error %.3g", worst);
  if (v.pass) v.detail = buf;
  return v;
}

struct SyntheticRun {
  double train_accuracy = 0.0;
  double seconds = 0.0;
  AblationResult ablation;
  std::string error;
};

SyntheticRun RunSynthetic() {
  SyntheticRun run;
  const auto start = Clock::now();
  try {
    const auto bench = GenerateSynthetic();
    const auto ranges = std::vector<CodepointRange>{kTibetanBlock};
    const auto table = Clean(bench.embeddings, ranges).table;
    const auto trained = TrainReference(bench.train);
    run.train_accuracy = trained.train_accuracy;
    ReferenceVictim victim(std::make_shared<const ReferenceVictimModel>(trained.model));
    RunOptions options;
    options.model_id = "builtin:synthetic";
    options.dataset_id = "synthetic-test";
    run.ablation = Ablate(bench.test, victim, table, AttackConfig{}, kAblationPreset, options);
  } catch (const std::exception& e) {
    run.error = e.what();
  }
  run.seconds = SecondsSince(start);
  return run;
}

Verdict EndToEndTrend(const SyntheticRun& run) {
  Verdict v;
  if (!run.error.empty()) {
    v.Fail(run.error);
    return v;
  }
  if (run.train_accuracy < kTrainAccuracyFloor) {
    v.Fail("train accuracy " + std::to_string(run.train_accuracy));
  }
  const auto& reports = run.ablation.reports;
  std::string series;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i > 0 && reports[i].asr < reports[i - 1].asr) v.Fail("ASR decreases");
    if (i > 0 && reports[i].adv < reports[i - 1].adv) v.Fail("ADV decreases");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s%g: asr %.3f adv %.3f", i ? ", " : "",
                  reports[i].d_max, reports[i].asr, reports[i].adv);
    series += buf;
  }
  if (reports.size() != 3 || !(reports.back().asr > 0.0)) v.Fail("ASR at 0.5 is not positive");
  if (run.seconds >= kEndToEndSecondsLimit) v.Fail("took " + std::to_string(run.seconds) + " s");
  if (v.pass) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "train acc %.3f; ", run.train_accuracy);
    v.detail = buf + series + "; " + std::to_string(run.seconds) + " s";
  }
  return v;
}

Verdict BudgetAccounting(const SyntheticRun& run) {
  Verdict v;
  if (!run.error.empty()) {
    v.Fail(run.error);
    return v;
  }
  std::size_t samples = 0;
  for (const auto& report : run.ablation.reports) {
    for (const auto& o : report.outcomes) {
      std::size_t sum_c = 0;
      for (const auto& p : o.plans) sum_c += p.candidate_count;
      const std::size_t expected = 1 + o.num_syllables + sum_c + o.greedy_steps;
      if (o.queries != expected || o.plans.size() != o.num_syllables) {
        v.Fail("sample at d_max " + FormatDouble(report.d_max) + " recorded " +
               std::to_string(o.queries) + " queries, expected " + std::to_string(expected));
        return v;
      }
      ++samples;
    }
  }
  if (samples == 0) v.Fail("no samples");
  if (v.pass) v.detail = std::to_string(samples) + " samples";
  return v;
}

int Run(const std::string& command) { return std::system(command.c_str()); }

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict Determinism(const std::string& cli) {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "sylattack_acceptance_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string q = "'" + cli + "'";
  const std::string d = "'" + dir.string() + "'";
  const std::string quiet = " > /dev/null 2>&1";
  if (Run(q + " gen-synthetic --out " + d + "/data" + quiet) != 0 ||
      Run(q + " clean-embeddings --in " + d + "/data/embeddings.vec --out " + d +
          "/clean.vec" + quiet) != 0 ||
      Run(q + " train-victim --dataset " + d + "/data/train.jsonl --out " + d + "/model.json" +
          quiet) != 0) {
    v.Fail("synthetic setup through the CLI failed");
    return v;
  }
  const std::string ablate = q + " ablate --dataset " + d + "/data/test.jsonl --embeddings " + d +
                             "/clean.vec --model " + d + "/model.json --jobs 4 --report-dir ";
  if (Run(ablate + d + "/run1" + quiet) != 0 || Run(ablate + d + "/run2" + quiet) != 0) {
    v.Fail("ablate exited nonzero");
    return v;
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "run1")) {
    const auto name = entry.path().filename();
    if (entry.path().extension() != ".json") continue;
    const auto a = Slurp(entry.path()), b = Slurp(dir / "run2" / name);
    if (a.empty() || a != b) {
      v.Fail(name.string() + " differs between runs");
      return v;
    }
    ++compared;
  }
  if (compared < 4) v.Fail("expected 3 reports and a summary, found " + std::to_string(compared));
  if (v.pass) v.detail = std::to_string(compared) + " JSON files byte-identical";
  fs::remove_all(dir);
  return v;
}

int Main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : SYLATTACK_CLI_PATH;
  int failures = 0;
  auto report = [&](const std::string& name, const Verdict& v) {
    std::printf("%s  %s  (%s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  };

  report("candidate-set exactness", CandidateExactness());
  report("attack equivalence with naive implementation", AlgorithmEquivalence());
  report("scoring arithmetic", ScoringArithmetic());
  const SyntheticRun run = RunSynthetic();
  report("metric suites", MetricSuites(run.ablation.reports));
  report("gradient check", GradientCheck());
  report("end-to-end ablation trend", EndToEndTrend(run));
  report("determinism", Determinism(cli));
  report("budget accounting", BudgetAccounting(run));

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace sylattack

int main(int argc, char** argv) { return sylattack::Main(argc, argv); }
