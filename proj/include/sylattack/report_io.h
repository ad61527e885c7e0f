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

#ifndef SYLATTACK_REPORT_IO_H_
#define SYLATTACK_REPORT_IO_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sylattack/eval_metrics.h"

namespace sylattack {

// Report document, schema 1:
//
//   {
//     "schema": 1, "model_id": str, "dataset_id": str, "d_max": num,
//     "accuracy_pre": num, "accuracy_post": num, "adv": num, "asr": num,
//     "average_ld": num | null,
//     "conventions": {"average_ld": "successful_attacks",
//                     "asr_denominator": "all_samples",
//                     "y_true": "original_prediction"},
//     "counts": {"samples": int, "attacked": int, "successes": int,
//                "failures": {reason: int, ...}},
//     "outcomes": [ per-sample record, see OutcomeToJson ]
//   }
nlohmann::json ReportToJson(const EvaluationReport& report);
// Throws Error(kFormat) on a missing field or a schema other than 1.
EvaluationReport ReportFromJson(const nlohmann::json& doc);

nlohmann::json OutcomeToJson(const AttackOutcome& outcome);
AttackOutcome OutcomeFromJson(const nlohmann::json& doc);

void SaveReport(const EvaluationReport& report, const std::string& path);
EvaluationReport LoadReport(const std::string& path);

// Re-derives every aggregate from the stored per-sample records.
EvaluationReport RecomputeReport(const EvaluationReport& stored);

inline constexpr const char* kReportCsvHeader =
    "d_max,accuracy_pre,accuracy_post,adv,asr,avg_ld,successes,attacked";

// Header plus one row per report; avg_ld is empty when undefined.
void WriteReportCsv(std::span<const EvaluationReport> reports, std::ostream& out);

// Long-format x/y series for plotting metric against d_max:
//   series,d_max,value   with series in {adv, asr, avg_ld}.
void WritePlotData(std::span<const EvaluationReport> reports, std::ostream& out);

nlohmann::json AblationSummaryToJson(const AblationResult& result,
                                     std::span<const std::string> report_files);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);

}  // namespace sylattack

#endif  // SYLATTACK_REPORT_IO_H_
