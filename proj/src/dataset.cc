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

#include "sylattack/dataset.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace sylattack {

namespace {

bool IsBlank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '\f' && c != '\v') {
      return false;
    }
  }
  return true;
}

}  // namespace

DatasetFormat ParseDatasetFormat(std::string_view name) {
  if (name == "jsonl") return DatasetFormat::kJsonl;
  if (name == "tsv") return DatasetFormat::kTsv;
  throw Error(ErrorCategory::kInvalidArgument,
              "unknown dataset format '" + std::string(name) + "'");
}

DatasetFormat GuessDatasetFormat(std::string_view path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".tsv") {
    return DatasetFormat::kTsv;
  }
  return DatasetFormat::kJsonl;
}

IngestResult IngestStream(std::istream& in, std::string_view source_name,
                          const IngestOptions& options) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  auto reject = [&](const std::string& message) {
    const std::string full =
        std::string(source_name) + ":" + std::to_string(line_no) + ": " + message;
    if (options.policy == ErrorPolicy::kFailFast) {
      throw Error(ErrorCategory::kFormat, full);
    }
    result.warnings.push_back(full);
    ++result.rejected;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (options.format == DatasetFormat::kTsv && options.skip_header && line_no == 1) {
      continue;
    }
    if (IsBlank(line)) continue;

    DatasetRecord record;
    if (options.format == DatasetFormat::kJsonl) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        reject("not a JSON object");
        continue;
      }
      if (!doc.is_object()) {
        reject("not a JSON object");
        continue;
      }
      if (!doc.contains("text") || !doc["text"].is_string()) {
        reject("missing string field \"text\"");
        continue;
      }
      if (!doc.contains("label") || !doc["label"].is_string()) {
        reject("missing string field \"label\"");
        continue;
      }
      record.text = doc["text"].get<std::string>();
      record.label = doc["label"].get<std::string>();
    } else {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        reject("expected label<TAB>text");
        continue;
      }
      record.label = line.substr(0, tab);
      record.text = line.substr(tab + 1);
    }
    if (IsBlank(record.label)) {
      reject("empty label");
      continue;
    }
    if (IsBlank(record.text)) {
      reject("empty text");
      continue;
    }
    result.records.push_back(std::move(record));
  }
  if (result.records.empty()) {
    throw Error(ErrorCategory::kFormat,
                std::string(source_name) + ": dataset has no usable records");
  }
  return result;
}

IngestResult Ingest(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open dataset " + path);
  return IngestStream(in, path, options);
}

void WriteJsonl(std::span<const DatasetRecord> records, std::ostream& out) {
  for (const auto& r : records) {
    out << nlohmann::json{{"text", r.text}, {"label", r.label}}.dump() << "\n";
  }
}

}  // namespace sylattack
