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

#include "sylattack/report_io.h"

#include <charconv>
#include <fstream>
#include <ostream>

#include "sylattack/error.h"

namespace sylattack {

namespace {

using nlohmann::json;

template <typename T>
json OptionalToJson(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

template <typename T>
std::optional<T> OptionalFromJson(const json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<T>();
}

json PlanToJson(const PositionPlan& plan) {
  return {
      {"position", plan.position},
      {"syllable", plan.syllable},
      {"saliency", plan.saliency},
      {"in_vocabulary", plan.in_vocabulary},
      {"candidate_count", plan.candidate_count},
      {"best_substitute", OptionalToJson(plan.best_substitute)},
      {"delta_p_star", OptionalToJson(plan.delta_p_star)},
      {"score", OptionalToJson(plan.score)},
  };
}

PositionPlan PlanFromJson(const json& doc) {
  PositionPlan plan;
  plan.position = doc.at("position").get<std::size_t>();
  plan.syllable = doc.at("syllable").get<std::string>();
  plan.saliency = doc.at("saliency").get<double>();
  plan.in_vocabulary = doc.at("in_vocabulary").get<bool>();
  plan.candidate_count = doc.at("candidate_count").get<std::size_t>();
  plan.best_substitute = OptionalFromJson<std::string>(doc.at("best_substitute"));
  plan.delta_p_star = OptionalFromJson<double>(doc.at("delta_p_star"));
  plan.score = OptionalFromJson<double>(doc.at("score"));
  return plan;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

json OutcomeToJson(const AttackOutcome& o) {
  json substitutions = json::array();
  for (const auto& s : o.substitutions) {
    substitutions.push_back(
        {{"position", s.position}, {"original", s.original}, {"substitute", s.substitute}});
  }
  json plans = json::array();
  for (const auto& p : o.plans) plans.push_back(PlanToJson(p));
  return {
      {"original_text", o.original_text},
      {"num_syllables", o.num_syllables},
      {"original_label", o.original_label},
      {"original_label_name", o.original_label_name},
      {"original_confidence", o.original_confidence},
      {"success", o.success},
      {"adversarial_text", o.success ? json(o.adversarial_text) : json(nullptr)},
      {"substitutions", std::move(substitutions)},
      {"final_label", o.final_label},
      {"final_label_name", o.final_label_name},
      {"final_confidence", o.final_confidence},
      {"queries", o.queries},
      {"greedy_steps", o.greedy_steps},
      {"levenshtein", o.levenshtein},
      {"failure_reason", FailureReasonName(o.failure_reason)},
      {"failure_detail", o.failure_detail},
      {"order", o.order},
      {"plans", std::move(plans)},
  };
}

AttackOutcome OutcomeFromJson(const json& doc) {
  AttackOutcome o;
  o.original_text = doc.at("original_text").get<std::string>();
  o.num_syllables = doc.at("num_syllables").get<std::size_t>();
  o.original_label = doc.at("original_label").get<std::size_t>();
  o.original_label_name = doc.at("original_label_name").get<std::string>();
  o.original_confidence = doc.at("original_confidence").get<double>();
  o.success = doc.at("success").get<bool>();
  if (!doc.at("adversarial_text").is_null()) {
    o.adversarial_text = doc.at("adversarial_text").get<std::string>();
  }
  for (const auto& s : doc.at("substitutions")) {
    o.substitutions.push_back({s.at("position").get<std::size_t>(),
                               s.at("original").get<std::string>(),
                               s.at("substitute").get<std::string>()});
  }
  o.final_label = doc.at("final_label").get<std::size_t>();
  o.final_label_name = doc.at("final_label_name").get<std::string>();
  o.final_confidence = doc.at("final_confidence").get<double>();
  o.queries = doc.at("queries").get<std::size_t>();
  o.greedy_steps = doc.at("greedy_steps").get<std::size_t>();
  o.levenshtein = doc.at("levenshtein").get<std::size_t>();
  o.failure_reason = ParseFailureReason(doc.at("failure_reason").get<std::string>());
  o.failure_detail = doc.at("failure_detail").get<std::string>();
  o.order = doc.at("order").get<std::vector<std::size_t>>();
  for (const auto& p : doc.at("plans")) o.plans.push_back(PlanFromJson(p));
  return o;
}

json ReportToJson(const EvaluationReport& report) {
  json outcomes = json::array();
  for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
    json record = OutcomeToJson(report.outcomes[i]);
    record["index"] = i;
    record["ground_truth"] = report.ground_truth[i];
    outcomes.push_back(std::move(record));
  }
  return {
      {"schema", report.schema},
      {"model_id", report.model_id},
      {"dataset_id", report.dataset_id},
      {"d_max", report.d_max},
      {"accuracy_pre", report.accuracy_pre},
      {"accuracy_post", report.accuracy_post},
      {"adv", report.adv},
      {"asr", report.asr},
      {"average_ld", OptionalToJson(report.average_ld)},
      {"conventions",
       {{"average_ld", "successful_attacks"},
        {"asr_denominator", "all_samples"},
        {"y_true", "original_prediction"}}},
      {"counts",
       {{"samples", report.samples},
        {"attacked", report.attacked},
        {"successes", report.successes},
        {"failures", report.failures}}},
      {"outcomes", std::move(outcomes)},
  };
}

EvaluationReport ReportFromJson(const json& doc) {
  try {
    EvaluationReport report;
    report.schema = doc.at("schema").get<int>();
    if (report.schema != kReportSchemaVersion) {
      throw Error(ErrorCategory::kFormat,
                  "unsupported report schema " + std::to_string(report.schema));
    }
    report.model_id = doc.at("model_id").get<std::string>();
    report.dataset_id = doc.at("dataset_id").get<std::string>();
    report.d_max = doc.at("d_max").get<double>();
    report.accuracy_pre = doc.at("accuracy_pre").get<double>();
    report.accuracy_post = doc.at("accuracy_post").get<double>();
    report.adv = doc.at("adv").get<double>();
    report.asr = doc.at("asr").get<double>();
    report.average_ld = OptionalFromJson<double>(doc.at("average_ld"));
    const json& counts = doc.at("counts");
    report.samples = counts.at("samples").get<std::size_t>();
    report.attacked = counts.at("attacked").get<std::size_t>();
    report.successes = counts.at("successes").get<std::size_t>();
    report.failures = counts.at("failures").get<std::map<std::string, std::size_t>>();
    for (const auto& record : doc.at("outcomes")) {
      report.outcomes.push_back(OutcomeFromJson(record));
      report.ground_truth.push_back(record.at("ground_truth").get<std::string>());
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kFormat, std::string("bad report document: ") + e.what());
  }
}

void SaveReport(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path);
  out << ReportToJson(report).dump(2, ' ', false, json::error_handler_t::replace)
      << "\n";
  if (!out) throw Error(ErrorCategory::kIo, "write failed for " + path);
}

EvaluationReport LoadReport(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open report " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kFormat, path + ": " + e.what());
  }
  return ReportFromJson(doc);
}

EvaluationReport RecomputeReport(const EvaluationReport& stored) {
  EvaluationReport report = Aggregate(stored.outcomes, stored.ground_truth,
                                      {stored.model_id, stored.dataset_id, stored.d_max});
  CheckReportInvariants(report);
  return report;
}

void WriteReportCsv(std::span<const EvaluationReport> reports, std::ostream& out) {
  out << kReportCsvHeader << "\n";
  for (const auto& r : reports) {
    out << FormatDouble(r.d_max) << ',' << FormatDouble(r.accuracy_pre) << ','
        << FormatDouble(r.accuracy_post) << ',' << FormatDouble(r.adv) << ','
        << FormatDouble(r.asr) << ','
        << (r.average_ld ? FormatDouble(*r.average_ld) : std::string()) << ','
        << r.successes << ',' << r.attacked << "\n";
  }
}

void WritePlotData(std::span<const EvaluationReport> reports, std::ostream& out) {
  out << "series,d_max,value\n";
  for (const auto& r : reports) {
    out << "adv," << FormatDouble(r.d_max) << ',' << FormatDouble(r.adv) << "\n";
  }
  for (const auto& r : reports) {
    out << "asr," << FormatDouble(r.d_max) << ',' << FormatDouble(r.asr) << "\n";
  }
  for (const auto& r : reports) {
    if (!r.average_ld) continue;
    out << "avg_ld," << FormatDouble(r.d_max) << ',' << FormatDouble(*r.average_ld)
        << "\n";
  }
}

json AblationSummaryToJson(const AblationResult& result,
                           std::span<const std::string> report_files) {
  json runs = json::array();
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    runs.push_back({{"d_max", r.d_max},
                    {"report", i < report_files.size() ? report_files[i] : ""},
                    {"adv", r.adv},
                    {"asr", r.asr},
                    {"average_ld", OptionalToJson(r.average_ld)}});
  }
  return {
      {"schema", kReportSchemaVersion},
      {"runs", std::move(runs)},
      {"adv_non_decreasing", result.adv_non_decreasing},
      {"asr_non_decreasing", result.asr_non_decreasing},
      {"plan_delta_monotone", result.plan_delta_monotone},
      {"plan_violations", result.plan_violations},
  };
}

}  // namespace sylattack
