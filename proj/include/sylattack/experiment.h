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

#ifndef SYLATTACK_EXPERIMENT_H_
#define SYLATTACK_EXPERIMENT_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sylattack/attack_engine.h"
#include "sylattack/eval_metrics.h"
#include "sylattack/remote_oracle.h"

namespace sylattack {

// "builtin:path/to/model.json" or "http://host:port[/prefix]".
struct VictimSpec {
  enum class Kind { kBuiltin, kRemote };
  Kind kind = Kind::kBuiltin;
  std::string location;  // model path or base URL

  std::string id() const;
};

VictimSpec ParseVictimSpec(std::string_view spec);

std::unique_ptr<VictimOracle> OpenVictim(const VictimSpec& spec,
                                         const RemoteOracleOptions& remote = {});

// "0.1340,0.2929,0.5"
std::vector<double> ParseDMaxList(std::string_view list);

// File name used for one d_max inside an ablation directory, e.g.
// "report_dmax_0.134.json".
std::string AblationReportName(double d_max);

// Writes one report per run, ablation.csv, plot_data.csv and summary.json
// into `dir`.
void WriteAblation(const AblationResult& result, const std::string& dir);

}  // namespace sylattack

#endif  // SYLATTACK_EXPERIMENT_H_
