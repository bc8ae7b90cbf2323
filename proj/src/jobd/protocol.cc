// Copyright (c) 2026 The mrs Authors. All Rights Reserved
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrs/jobd/protocol.h"

#include <openssl/evp.h>

namespace mrs::jobd {

std::string Base64Encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<size_t>(n));
  return out;
}

Result<std::string> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    return Status(ErrorCode::kProtocolError, "base64 length not a multiple of 4");
  }
  std::string out(3 * (text.size() / 4), '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) return Status(ErrorCode::kProtocolError, "malformed base64");
  // EVP_DecodeBlock counts padding as decoded zero bytes.
  size_t len = static_cast<size_t>(n);
  if (!text.empty() && text.back() == '=') --len;
  if (text.size() >= 2 && text[text.size() - 2] == '=') --len;
  out.resize(len);
  return out;
}

Json ToJson(const dfs::FileMeta& meta) {
  Json blocks = Json::array();
  for (const auto& b : meta.blocks) {
    Json locs = Json::array();
    for (auto n : b.locations) locs.push_back(n.value);
    blocks.push_back({{"id", b.id.value}, {"length", b.length}, {"locations", locs}});
  }
  return {{"path", meta.path}, {"length", meta.length}, {"blocks", blocks}};
}

Json ToJson(const engine::JobSpec& spec) {
  Json j = {{"input", spec.input},
            {"output", spec.output},
            {"mapper", spec.mapper_cmd},
            {"files", spec.files},
            {"input_format", spec.input_format},
            {"num_reducers", spec.num_reducers}};
  if (spec.reducer_cmd) j["reducer"] = *spec.reducer_cmd;
  if (spec.job_name) j["job_name"] = *spec.job_name;
  return j;
}

Json ToJson(const engine::JobStatus& s) {
  return {{"id", s.id},
          {"phase", engine::PhaseName(s.phase)},
          {"map_done", s.map_done},
          {"map_total", s.map_total},
          {"reduce_done", s.reduce_done},
          {"reduce_total", s.reduce_total},
          {"counters", s.counters},
          {"diagnostics", s.diagnostics}};
}

Result<engine::JobSpec> JobSpecFromJson(const Json& j) {
  try {
    engine::JobSpec spec;
    spec.input = j.at("input").get<std::string>();
    spec.output = j.at("output").get<std::string>();
    spec.mapper_cmd = j.at("mapper").get<std::string>();
    if (j.contains("reducer") && !j["reducer"].is_null()) {
      spec.reducer_cmd = j["reducer"].get<std::string>();
    }
    if (j.contains("files")) spec.files = j["files"].get<std::vector<std::string>>();
    if (j.contains("input_format")) spec.input_format = j["input_format"].get<std::string>();
    if (j.contains("num_reducers")) spec.num_reducers = j["num_reducers"].get<int>();
    if (j.contains("job_name") && !j["job_name"].is_null()) {
      spec.job_name = j["job_name"].get<std::string>();
    }
    return spec;
  } catch (const Json::exception& e) {
    return InvalidArgument(std::string("bad job spec: ") + e.what());
  }
}

Result<engine::JobStatus> JobStatusFromJson(const Json& j) {
  try {
    engine::JobStatus s;
    s.id = j.at("id").get<std::string>();
    auto phase = engine::PhaseFromName(j.at("phase").get<std::string>());
    if (!phase) return Status(ErrorCode::kProtocolError, "unknown phase");
    s.phase = *phase;
    s.map_done = j.at("map_done").get<int>();
    s.map_total = j.at("map_total").get<int>();
    s.reduce_done = j.at("reduce_done").get<int>();
    s.reduce_total = j.at("reduce_total").get<int>();
    s.counters = j.at("counters").get<std::map<std::string, int64_t>>();
    s.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return s;
  } catch (const Json::exception& e) {
    return Status(ErrorCode::kProtocolError, std::string("bad job status: ") + e.what());
  }
}

Json OkResponse() { return {{"ok", true}}; }

Json ErrorResponse(const Status& status) {
  return {{"ok", false},
          {"error", std::string(ErrorCodeName(status.code()))},
          {"message", status.message()}};
}

Status ResponseStatus(const Json& response) {
  if (!response.is_object() || !response.contains("ok")) {
    return Status(ErrorCode::kProtocolError, "response without 'ok'");
  }
  if (response["ok"].get<bool>()) return Status::OK();
  const std::string code = response.value("error", "INTERNAL");
  return Status(ErrorCodeFromName(code), response.value("message", code));
}

}  // namespace mrs::jobd
