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

// Command-line front end: embedding cleaning, victim training, attacks,
// ablations, synthetic benchmarks and report re-derivation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sylattack/attack_engine.h"
#include "sylattack/dataset.h"
#include "sylattack/embedding_store.h"
#include "sylattack/error.h"
#include "sylattack/eval_metrics.h"
#include "sylattack/experiment.h"
#include "sylattack/reference_victim.h"
#include "sylattack/report_io.h"
#include "sylattack/synthetic.h"

namespace sylattack {
namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kInvalidArgument = 3,
  kIoError = 4,
  kFormatError = 5,
  kOracleUnavailable = 6,
  kOracleProtocol = 7,
  kInvariantViolation = 8,
  kTrainingDiverged = 9,
  kInternal = 10,
};

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (bad flags, conflicting or missing victim spec)\n"
    "  3  invalid argument value\n"
    "  4  file I/O error\n"
    "  5  malformed input file (dataset, .vec, model, report)\n"
    "  6  victim unreachable or not ready\n"
    "  7  victim protocol violation\n"
    "  8  report invariant or consistency check failed\n"
    "  9  victim training diverged\n"
    " 10  internal error\n"
    "\n"
    "Environment: SYLATTACK_VICTIM_URL is used when no victim is given;\n"
    "SYLATTACK_BATCH_LIMIT sets the default --batch-limit.";

int ExitCodeFor(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument:
      return kInvalidArgument;
    case ErrorCategory::kIo:
      return kIoError;
    case ErrorCategory::kFormat:
      return kFormatError;
    case ErrorCategory::kOracleUnavailable:
      return kOracleUnavailable;
    case ErrorCategory::kOracleProtocol:
      return kOracleProtocol;
    case ErrorCategory::kInvariant:
      return kInvariantViolation;
  }
  return kInternal;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --config accepts INI-style key=value files (CLI11's native format) or a
// JSON object. Keys outside any section apply to the subcommand being run.
class ConfigFormat : public CLI::ConfigBase {
 public:
  explicit ConfigFormat(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buffer;
    buffer << input.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<CLI::ConfigItem> items;
    if (first != std::string::npos && text[first] == '{') {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::exception& e) {
        throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      Flatten(doc, {}, &items);
    } else {
      std::istringstream again(text);
      items = CLI::ConfigBase::from_config(again);
    }
    for (auto& item : items) {
      if (item.parents.empty() && !subcommand_.empty() && item.name != "config") {
        item.parents.push_back(subcommand_);
      }
    }
    return items;
  }

 private:
  static void Flatten(const nlohmann::json& doc, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>* items) {
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        auto deeper = parents;
        deeper.push_back(key);
        Flatten(value, deeper, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
        return v.dump();
      };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items->push_back(std::move(item));
    }
  }

  std::string subcommand_;
};

struct DatasetFlags {
  std::string path;
  std::string format;  // empty: guess from extension
  bool skip_bad = false;
  bool tsv_header = false;

  void Register(CLI::App* cmd, const std::string& flag = "--dataset") {
    cmd->add_option(flag, path, "Dataset file (JSONL or TSV)")->required();
    cmd->add_option("--format", format, "jsonl | tsv (default: by extension)");
    cmd->add_flag("--skip-bad-records", skip_bad,
                  "Skip malformed records with a warning instead of failing");
    cmd->add_flag("--tsv-header", tsv_header, "TSV file has a header line");
  }

  std::vector<DatasetRecord> Load() const {
    IngestOptions options;
    options.format = format.empty() ? GuessDatasetFormat(path) : ParseDatasetFormat(format);
    options.policy = skip_bad ? ErrorPolicy::kSkipAndWarn : ErrorPolicy::kFailFast;
    options.skip_header = tsv_header;
    IngestResult result = Ingest(path, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return std::move(result.records);
  }
};

DelimiterPolicy ParseDelimiters(const std::string& spec) {
  if (spec.empty()) return DelimiterPolicy::Default();
  std::vector<char32_t> cps;
  for (const auto& range : ParseCodepointRanges(spec)) {
    if (range.last - range.first > 4096) {
      throw Error(ErrorCategory::kInvalidArgument, "delimiter range too large");
    }
    for (char32_t cp = range.first; cp <= range.last; ++cp) cps.push_back(cp);
  }
  return DelimiterPolicy(std::move(cps));
}

struct AttackFlags {
  DatasetFlags dataset;
  std::string embeddings;
  std::string victim;
  std::string model;
  std::string url;
  std::string unk_token = std::string(kDefaultUnkToken);
  std::string delimiters;
  std::size_t jobs = 1;
  std::size_t batch_limit = 0;
  std::size_t max_queries = 0;
  double max_seconds = 0.0;
  double timeout_seconds = 30.0;
  bool skip_nonpositive = false;
  bool skip_bad_embeddings = false;

  void Register(CLI::App* cmd) {
    dataset.Register(cmd);
    cmd->add_option("--embeddings", embeddings, "Syllable embeddings (.vec)")->required();
    cmd->add_option("--victim", victim, "builtin:<model.json> or http://host:port");
    cmd->add_option("--model", model, "Shorthand for --victim builtin:<path>");
    cmd->add_option("--url", url, "Shorthand for --victim <http url>");
    cmd->add_option("--unk", unk_token, "Mask token used for saliency")
        ->capture_default_str();
    cmd->add_option("--delimiters", delimiters,
                    "Separator codepoints, hex list/ranges (default 0F0B,0F0D,0F0E,20,0A)");
    cmd->add_option("--jobs", jobs, "Samples attacked in parallel")->capture_default_str();
    cmd->add_option("--batch-limit", batch_limit, "Max texts per oracle call (0 = victim's)")
        ->envname("SYLATTACK_BATCH_LIMIT");
    cmd->add_option("--max-queries", max_queries, "Per-sample query cap (0 = off)");
    cmd->add_option("--max-seconds", max_seconds, "Per-sample wall-clock cap (0 = off)");
    cmd->add_option("--timeout", timeout_seconds, "Remote victim timeout in seconds")
        ->capture_default_str();
    cmd->add_flag("--skip-nonpositive", skip_nonpositive,
                  "Extension: drop positions whose best substitution does not help");
    cmd->add_flag("--skip-bad-embeddings", skip_bad_embeddings,
                  "Skip malformed .vec lines with a warning instead of failing");
  }

  VictimSpec ResolveVictim() const {
    int given = !victim.empty() + !model.empty() + !url.empty();
    if (given > 1) {
      throw UsageError("conflicting victim specs: give only one of --victim, --model, --url");
    }
    if (!victim.empty()) return ParseVictimSpec(victim);
    if (!model.empty()) return {VictimSpec::Kind::kBuiltin, model};
    if (!url.empty()) return ParseVictimSpec(url);
    if (const char* env = std::getenv("SYLATTACK_VICTIM_URL"); env && *env) {
      return ParseVictimSpec(env);
    }
    throw UsageError("no victim: pass --victim, --model or --url");
  }

  AttackConfig Config(double d_max) const {
    AttackConfig config;
    config.d_max = d_max;
    config.unk_token = unk_token;
    config.delimiters = ParseDelimiters(delimiters);
    config.skip_nonpositive = skip_nonpositive;
    config.limits.max_queries = max_queries;
    config.limits.max_wall_time =
        std::chrono::milliseconds(static_cast<long long>(max_seconds * 1000.0));
    return config;
  }

  EmbeddingTable LoadEmbeddings() const {
    VecLoadOptions options;
    options.policy = skip_bad_embeddings ? ErrorPolicy::kSkipAndWarn : ErrorPolicy::kFailFast;
    options.delimiters = ParseDelimiters(delimiters);
    VecLoadResult result = LoadVec(embeddings, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (result.skipped_delimited > 0) {
      std::cerr << "note: dropped " << result.skipped_delimited
                << " multi-syllable embedding entries\n";
    }
    return std::move(result.table);
  }

  std::unique_ptr<VictimOracle> OpenVictimOracle() const {
    RemoteOracleOptions remote;
    remote.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
    remote.max_batch = batch_limit;
    return OpenVictim(ResolveVictim(), remote);
  }

  RunOptions Run(const VictimSpec& spec) const {
    RunOptions options;
    options.jobs = jobs;
    options.batch_limit = batch_limit;
    options.model_id = spec.id();
    options.dataset_id = std::filesystem::path(dataset.path).filename().string();
    return options;
  }
};

void LogOutOfVocabulary(const EvaluationReport& report) {
  std::size_t oov = 0;
  for (const auto& o : report.outcomes) {
    for (const auto& p : o.plans) oov += p.in_vocabulary ? 0 : 1;
  }
  if (oov > 0) {
    std::cerr << "note: " << oov << " positions had no embedding and were skipped\n";
  }
}

void PrintSummary(const EvaluationReport& r) {
  std::cout << "d_max " << FormatDouble(r.d_max) << ": accuracy "
            << FormatDouble(r.accuracy_pre) << " -> " << FormatDouble(r.accuracy_post)
            << ", ADV " << FormatDouble(r.adv) << ", ASR " << FormatDouble(r.asr)
            << ", average LD "
            << (r.average_ld ? FormatDouble(*r.average_ld) : std::string("n/a")) << " ("
            << r.successes << "/" << r.attacked << " succeeded)\n";
}

std::string ActiveSubcommand(int argc, char** argv,
                             const std::vector<std::string>& names) {
  for (int i = 1; i < argc; ++i) {
    for (const auto& name : names) {
      if (name == argv[i]) return name;
    }
  }
  return {};
}

int Main(int argc, char** argv) {
  CLI::App app{"Syllable-substitution black-box adversarial attacks on text classifiers"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);
  app.fallthrough();
  const std::vector<std::string> names = {"clean-embeddings", "train-victim", "attack",
                                          "ablate", "gen-synthetic", "report", "plot-data"};
  app.config_formatter(std::make_shared<ConfigFormat>(ActiveSubcommand(argc, argv, names)));
  app.set_config("--config", "", "key=value or JSON config; explicit flags win");

  // clean-embeddings
  std::string clean_in, clean_out, clean_ranges = "0F00-0FFF";
  bool clean_skip_bad = false;
  auto* clean = app.add_subcommand("clean-embeddings",
                                   "Keep only embeddings of target-script syllables");
  clean->add_option("--in", clean_in, "Input .vec")->required();
  clean->add_option("--out", clean_out, "Output .vec")->required();
  clean->add_option("--ranges", clean_ranges, "Allowed codepoint ranges, hex")
      ->capture_default_str();
  clean->add_flag("--skip-bad-records", clean_skip_bad,
                  "Skip malformed lines with a warning instead of failing");

  // train-victim
  DatasetFlags train_data;
  std::string train_out, train_delimiters;
  TrainHyperparams hyper;
  auto* train = app.add_subcommand("train-victim", "Fit the reference bag-of-syllables victim");
  train_data.Register(train);
  train->add_option("--out", train_out, "Model JSON path")->required();
  train->add_option("--lr", hyper.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--epochs", hyper.epochs, "Full-batch epochs")->capture_default_str();
  train->add_option("--l2", hyper.l2, "L2 coefficient")->capture_default_str();
  train->add_option("--seed", hyper.seed, "Seed (recorded)")->capture_default_str();
  train->add_option("--unk", hyper.unk_token, "Token kept out of the vocabulary")
      ->capture_default_str();
  train->add_option("--delimiters", train_delimiters, "Separator codepoints, hex");

  // attack
  AttackFlags attack_flags;
  double attack_dmax = kDefaultDMax;
  std::string attack_report, attack_csv;
  auto* attack = app.add_subcommand("attack", "Attack every sample of a dataset");
  attack_flags.Register(attack);
  attack->add_option("--dmax", attack_dmax, "Maximum cosine distance")->capture_default_str();
  attack->add_option("--report", attack_report, "Report JSON path")->required();
  attack->add_option("--csv", attack_csv, "Also write the one-row CSV here");

  // ablate
  AttackFlags ablate_flags;
  std::string ablate_dmax = "0.1340,0.2929,0.5";
  std::string ablate_dir;
  auto* ablate = app.add_subcommand("ablate", "Repeat the attack over several d_max values");
  ablate_flags.Register(ablate);
  ablate->add_option("--dmax", ablate_dmax, "Comma-separated d_max list")
      ->capture_default_str();
  ablate->add_option("--report-dir", ablate_dir, "Output directory")->required();

  // gen-synthetic
  std::string synth_out;
  SyntheticOptions synth;
  auto* gen = app.add_subcommand("gen-synthetic",
                                 "Write the synthetic benchmark (datasets + .vec)");
  gen->add_option("--out", synth_out, "Output directory")->required();
  gen->add_option("--seed", synth.seed, "Seed")->capture_default_str();

  // report
  std::string report_in;
  bool report_csv = false;
  auto* report = app.add_subcommand("report", "Re-derive aggregates from a stored report");
  report->add_option("--in", report_in, "Report JSON")->required();
  report->add_flag("--csv", report_csv, "Print CSV instead of a summary");

  // plot-data
  std::vector<std::string> plot_in;
  std::string plot_dir, plot_out;
  auto* plot = app.add_subcommand("plot-data", "Emit metric-vs-d_max series as CSV");
  plot->add_option("--in", plot_in, "Report JSON files");
  plot->add_option("--report-dir", plot_dir, "Ablation directory (uses its reports)");
  plot->add_option("--out", plot_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*clean) {
      VecLoadOptions options;
      options.policy = clean_skip_bad ? ErrorPolicy::kSkipAndWarn : ErrorPolicy::kFailFast;
      VecLoadResult loaded = LoadVec(clean_in, options);
      for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
      const auto ranges = ParseCodepointRanges(clean_ranges);
      CleanResult cleaned = Clean(loaded.table, ranges);
      if (cleaned.table.empty()) {
        // Keep the input dimension so the output is still a valid .vec file.
        std::ofstream out(clean_out, std::ios::binary);
        if (!out) throw Error(ErrorCategory::kIo, "cannot write " + clean_out);
        out << 0 << " " << loaded.table.dim() << "\n";
      } else {
        SaveVec(cleaned.table, clean_out);
      }
      std::cout << "kept " << cleaned.kept << ", removed " << cleaned.removed
                << " (plus " << loaded.skipped_delimited << " multi-syllable entries, "
                << loaded.skipped_malformed << " malformed lines)\n";
      return kOk;
    }

    if (*train) {
      const auto records = train_data.Load();
      TrainResult result = TrainReference(records, hyper, ParseDelimiters(train_delimiters));
      if (result.diverged) {
        throw TrainingDiverged("training loss increased; lower --lr");
      }
      SaveModel(result.model, train_out);
      std::cout << "trained on " << records.size() << " samples, vocabulary "
                << result.model.vocab_size() << ", training accuracy "
                << FormatDouble(result.train_accuracy) << ", final loss "
                << FormatDouble(result.loss_history.back()) << "\n";
      return kOk;
    }

    if (*attack) {
      const VictimSpec spec = attack_flags.ResolveVictim();
      const auto records = attack_flags.dataset.Load();
      const EmbeddingTable table = attack_flags.LoadEmbeddings();
      auto victim = attack_flags.OpenVictimOracle();
      EvaluationReport result = RunAttack(records, *victim, table,
                                           attack_flags.Config(attack_dmax),
                                           attack_flags.Run(spec));
      LogOutOfVocabulary(result);
      SaveReport(result, attack_report);
      if (!attack_csv.empty()) {
        std::ofstream out(attack_csv, std::ios::binary);
        if (!out) throw Error(ErrorCategory::kIo, "cannot write " + attack_csv);
        WriteReportCsv(std::span<const EvaluationReport>(&result, 1), out);
      }
      PrintSummary(result);
      return kOk;
    }

    if (*ablate) {
      const VictimSpec spec = ablate_flags.ResolveVictim();
      const auto d_max_list = ParseDMaxList(ablate_dmax);
      const auto records = ablate_flags.dataset.Load();
      const EmbeddingTable table = ablate_flags.LoadEmbeddings();
      auto victim = ablate_flags.OpenVictimOracle();
      AblationResult result = Ablate(records, *victim, table,
                                     ablate_flags.Config(kDefaultDMax), d_max_list,
                                     ablate_flags.Run(spec));
      WriteAblation(result, ablate_dir);
      for (const auto& r : result.reports) PrintSummary(r);
      std::cout << "ADV non-decreasing: " << (result.adv_non_decreasing ? "yes" : "no")
                << ", ASR non-decreasing: " << (result.asr_non_decreasing ? "yes" : "no")
                << "\n";
      if (!result.plan_delta_monotone) {
        throw Error(ErrorCategory::kInvariant,
                    "per-position best drop shrank as d_max grew: " +
                        result.plan_violations.front());
      }
      return kOk;
    }

    if (*gen) {
      const SyntheticBenchmark bench = GenerateSynthetic(synth);
      WriteSynthetic(bench, synth_out);
      std::cout << "wrote " << bench.train.size() << " training and " << bench.test.size()
                << " test samples, " << bench.embeddings.size() << " embeddings to "
                << synth_out << "\n";
      return kOk;
    }

    if (*report) {
      const EvaluationReport stored = LoadReport(report_in);
      const EvaluationReport fresh = RecomputeReport(stored);
      const bool same = stored.accuracy_pre == fresh.accuracy_pre &&
                        stored.accuracy_post == fresh.accuracy_post &&
                        stored.adv == fresh.adv && stored.asr == fresh.asr &&
                        stored.average_ld == fresh.average_ld &&
                        stored.successes == fresh.successes &&
                        stored.attacked == fresh.attacked &&
                        stored.failures == fresh.failures;
      if (report_csv) {
        WriteReportCsv(std::span<const EvaluationReport>(&fresh, 1), std::cout);
      } else {
        PrintSummary(fresh);
      }
      if (!same) {
        throw Error(ErrorCategory::kInvariant,
                    "stored aggregates differ from the per-sample records");
      }
      return kOk;
    }

    if (*plot) {
      std::vector<std::string> files = plot_in;
      if (!plot_dir.empty()) {
        const auto summary_path = std::filesystem::path(plot_dir) / "summary.json";
        std::ifstream in(summary_path);
        if (!in) throw Error(ErrorCategory::kIo, "cannot open " + summary_path.string());
        const auto summary = nlohmann::json::parse(in, nullptr, false);
        if (summary.is_discarded() || !summary.contains("runs")) {
          throw Error(ErrorCategory::kFormat, summary_path.string() + ": bad summary");
        }
        for (const auto& run : summary["runs"]) {
          files.push_back(
              (std::filesystem::path(plot_dir) / run.at("report").get<std::string>()).string());
        }
      }
      if (files.empty()) throw UsageError("plot-data needs --in or --report-dir");
      std::vector<EvaluationReport> reports;
      for (const auto& f : files) reports.push_back(LoadReport(f));
      std::sort(reports.begin(), reports.end(),
                [](const auto& a, const auto& b) { return a.d_max < b.d_max; });
      if (plot_out.empty()) {
        WritePlotData(reports, std::cout);
      } else {
        std::ofstream out(plot_out, std::ios::binary);
        if (!out) throw Error(ErrorCategory::kIo, "cannot write " + plot_out);
        WritePlotData(reports, out);
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kTrainingDiverged;
  } catch (const Error& e) {
    std::cerr << "error [" << CategoryName(e.category()) << "]: " << e.what() << "\n";
    return ExitCodeFor(e.category());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace
}  // namespace sylattack

int main(int argc, char** argv) { return sylattack::Main(argc, argv); }
