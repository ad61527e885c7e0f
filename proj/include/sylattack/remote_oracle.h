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

#ifndef SYLATTACK_REMOTE_ORACLE_H_
#define SYLATTACK_REMOTE_ORACLE_H_

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sylattack/victim_oracle.h"

namespace sylattack {

// Victim metadata from GET /info.
struct RemoteInfo {
  std::size_t num_classes = 0;
  std::vector<std::string> labels;
  std::size_t max_batch = 0;
};

// Wire helpers, exposed so the protocol can be tested without a socket.
// Every decoder throws Error(kOracleProtocol) on malformed input.
RemoteInfo DecodeInfo(std::string_view body);
std::string EncodeClassifyRequest(std::span<const std::string> texts);
std::vector<ProbabilityDistribution> DecodeClassifyResponse(
    std::string_view body, std::size_t expected_rows, std::size_t num_classes);

struct RemoteOracleOptions {
  std::chrono::milliseconds timeout{30000};
  // 0 keeps the server's advertised max_batch; otherwise the smaller wins.
  std::size_t max_batch = 0;
};

// Client for a victim served over HTTP:
//   GET  /info     -> {"num_classes": K, "labels": [...], "max_batch": B}
//   POST /classify -> {"texts": [...]} => {"probabilities": [[...], ...]}
// Connection failures, timeouts and 503 raise Error(kOracleUnavailable);
// anything else off-contract raises Error(kOracleProtocol). Each call opens
// its own connection, so concurrent Classify calls are fine.
class RemoteOracle : public VictimOracle {
 public:
  explicit RemoteOracle(std::string base_url, RemoteOracleOptions options = {});

  const std::vector<std::string>& labels() const override { return info_.labels; }
  std::size_t max_batch() const override { return max_batch_; }
  std::vector<ProbabilityDistribution> Classify(
      std::span<const std::string> texts) override;

  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  RemoteOracleOptions options_;
  RemoteInfo info_;
  std::size_t max_batch_ = 1;
};

}  // namespace sylattack

#endif  // SYLATTACK_REMOTE_ORACLE_H_
