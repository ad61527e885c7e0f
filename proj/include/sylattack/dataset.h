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

#ifndef SYLATTACK_DATASET_H_
#define SYLATTACK_DATASET_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sylattack/error.h"
#include "sylattack/reference_victim.h"

namespace sylattack {

using DatasetRecord = LabeledText;

enum class DatasetFormat { kJsonl, kTsv };

// "jsonl" or "tsv".
DatasetFormat ParseDatasetFormat(std::string_view name);
// From the file extension: .tsv -> kTsv, everything else -> kJsonl.
DatasetFormat GuessDatasetFormat(std::string_view path);

struct IngestOptions {
  DatasetFormat format = DatasetFormat::kJsonl;
  ErrorPolicy policy = ErrorPolicy::kFailFast;
  bool skip_header = false;  // TSV only
};

struct IngestResult {
  std::vector<DatasetRecord> records;
  std::size_t rejected = 0;
  std::vector<std::string> warnings;
};

// JSONL: {"text": ..., "label": ...} per line. TSV: label<TAB>text.
// Blank lines are ignored. Records whose text is blank after trimming are
// rejected. Errors name the 1-based line; an empty result is an error too.
IngestResult Ingest(const std::string& path, const IngestOptions& options);
IngestResult IngestStream(std::istream& in, std::string_view source_name,
                          const IngestOptions& options);

void WriteJsonl(std::span<const DatasetRecord> records, std::ostream& out);

}  // namespace sylattack

#endif  // SYLATTACK_DATASET_H_
