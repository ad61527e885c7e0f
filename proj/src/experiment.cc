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

#include "sylattack/experiment.h"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "sylattack/error.h"
#include "sylattack/reference_victim.h"
#include "sylattack/report_io.h"

namespace sylattack {

std::string VictimSpec::id() const {
  return kind == Kind::kBuiltin ? "builtin:" + location : location;
}

VictimSpec ParseVictimSpec(std::string_view spec) {
  constexpr std::string_view kBuiltin = "builtin:";
  if (spec.substr(0, kBuiltin.size()) == kBuiltin) {
    std::string path(spec.substr(kBuiltin.size()));
    if (path.empty()) {
      throw Error(ErrorCategory::kInvalidArgument, "builtin victim needs a model path");
    }
    return {VictimSpec::Kind::kBuiltin, std::move(path)};
  }
  if (spec.substr(0, 7) == "http://") {
    return {VictimSpec::Kind::kRemote, std::string(spec)};
  }
  throw Error(ErrorCategory::kInvalidArgument,
              "victim must be builtin:<model.json> or http://..., got '" +
                  std::string(spec) + "'");
}

std::unique_ptr<VictimOracle> OpenVictim(const VictimSpec& spec,
                                         const RemoteOracleOptions& remote) {
  if (spec.kind == VictimSpec::Kind::kBuiltin) {
    auto model = std::make_shared<const ReferenceVictimModel>(LoadModel(spec.location));
    return std::make_unique<ReferenceVictim>(std::move(model));
  }
  return std::make_unique<RemoteOracle>(spec.location, remote);
}

std::vector<double> ParseDMaxList(std::string_view list) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    std::string_view item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() ||
        !(value > 0.0)) {
      throw Error(ErrorCategory::kInvalidArgument,
                  "bad d_max value '" + std::string(item) + "'");
    }
    values.push_back(value);
    start = comma + 1;
  }
  return values;
}

std::string AblationReportName(double d_max) {
  return "report_dmax_" + FormatDouble(d_max) + ".json";
}

void WriteAblation(const AblationResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::kIo, "cannot create " + dir + ": " + ec.message());
  const std::filesystem::path root(dir);

  std::vector<std::string> names;
  for (const auto& report : result.reports) {
    names.push_back(AblationReportName(report.d_max));
    SaveReport(report, (root / names.back()).string());
  }
  auto write = [&](const std::string& name, auto&& body) {
    std::ofstream out(root / name, std::ios::binary);
    if (!out) throw Error(ErrorCategory::kIo, "cannot write " + (root / name).string());
    body(out);
  };
  write("ablation.csv", [&](std::ostream& out) { WriteReportCsv(result.reports, out); });
  write("plot_data.csv", [&](std::ostream& out) { WritePlotData(result.reports, out); });
  write("summary.json", [&](std::ostream& out) {
    out << AblationSummaryToJson(result, names).dump(2) << "\n";
  });
}

}  // namespace sylattack
