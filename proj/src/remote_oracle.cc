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

#include "sylattack/remote_oracle.h"

#include <algorithm>

#include "httplib.h"
#include "sylattack/error.h"

namespace sylattack {

namespace {

using nlohmann::json;

json ParseBody(std::string_view body, std::string_view what) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kOracleProtocol,
                std::string(what) + ": response is not JSON: " + e.what());
  }
}

[[noreturn]] void ThrowForStatus(int status, std::string_view endpoint,
                                 const std::string& body) {
  const std::string message = std::string(endpoint) + " returned HTTP " +
                              std::to_string(status) + ": " + body.substr(0, 200);
  if (status == 503) throw Error(ErrorCategory::kOracleUnavailable, message);
  throw Error(ErrorCategory::kOracleProtocol, message);
}

}  // namespace

RemoteInfo DecodeInfo(std::string_view body) {
  const json doc = ParseBody(body, "/info");
  RemoteInfo info;
  try {
    info.num_classes = doc.at("num_classes").get<std::size_t>();
    info.labels = doc.at("labels").get<std::vector<std::string>>();
    info.max_batch = doc.at("max_batch").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCategory::kOracleProtocol,
                std::string("/info: missing or mistyped field: ") + e.what());
  }
  if (info.num_classes < 2 || info.labels.size() != info.num_classes) {
    throw Error(ErrorCategory::kOracleProtocol,
                "/info: need num_classes >= 2 matching the label list");
  }
  if (info.max_batch == 0) {
    throw Error(ErrorCategory::kOracleProtocol, "/info: max_batch must be >= 1");
  }
  return info;
}

std::string EncodeClassifyRequest(std::span<const std::string> texts) {
  json doc = {{"texts", json::array()}};
  for (const auto& t : texts) doc["texts"].push_back(t);
  return doc.dump();
}

std::vector<ProbabilityDistribution> DecodeClassifyResponse(
    std::string_view body, std::size_t expected_rows, std::size_t num_classes) {
  const json doc = ParseBody(body, "/classify");
  if (!doc.is_object() || !doc.contains("probabilities") ||
      !doc["probabilities"].is_array()) {
    throw Error(ErrorCategory::kOracleProtocol,
                "/classify: missing \"probabilities\" array");
  }
  const json& rows = doc["probabilities"];
  if (rows.size() != expected_rows) {
    throw Error(ErrorCategory::kOracleProtocol,
                "/classify: " + std::to_string(rows.size()) + " rows for " +
                    std::to_string(expected_rows) + " texts");
  }
  std::vector<ProbabilityDistribution> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    ProbabilityDistribution dist;
    try {
      dist.probs = row.get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCategory::kOracleProtocol,
                  std::string("/classify: bad probability row: ") + e.what());
    }
    ValidateDistribution(dist, num_classes);
    out.push_back(std::move(dist));
  }
  return out;
}

RemoteOracle::RemoteOracle(std::string base_url, RemoteOracleOptions options)
    : base_url_(std::move(base_url)), options_(options) {
  std::string url = base_url_;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw Error(ErrorCategory::kInvalidArgument,
                "victim URL must start with http://, got '" + base_url_ + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = url;
  } else {
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = url.substr(path_start);
  }

  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  auto res = client.Get(path_prefix_ + "/info");
  if (!res) {
    throw Error(ErrorCategory::kOracleUnavailable,
                "GET " + base_url_ + "/info failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) ThrowForStatus(res->status, "/info", res->body);
  info_ = DecodeInfo(res->body);
  max_batch_ = options_.max_batch == 0
                   ? info_.max_batch
                   : std::min(options_.max_batch, info_.max_batch);
}

std::vector<ProbabilityDistribution> RemoteOracle::Classify(
    std::span<const std::string> texts) {
  if (texts.size() > max_batch_) {
    throw Error(ErrorCategory::kInvalidArgument,
                "batch of " + std::to_string(texts.size()) +
                    " exceeds max_batch " + std::to_string(max_batch_));
  }
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  auto res = client.Post(path_prefix_ + "/classify", EncodeClassifyRequest(texts),
                         "application/json; charset=utf-8");
  if (!res) {
    throw Error(ErrorCategory::kOracleUnavailable,
                "POST " + base_url_ + "/classify failed: " +
                    httplib::to_string(res.error()));
  }
  if (res->status != 200) ThrowForStatus(res->status, "/classify", res->body);
  return DecodeClassifyResponse(res->body, texts.size(), info_.num_classes);
}

}  // namespace sylattack
