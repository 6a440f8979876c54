// Copyright 2026 The lpbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpb/record.h"

#include <fstream>

#include "lpb/check.h"

namespace lpb {

nlohmann::json record_to_json(const EpisodeRecord& r) {
  nlohmann::json j;
  j["format_version"] = kRecordFormatVersion;
  j["protocol"] = r.protocol;
  j["variant"] = r.variant;
  j["method"] = r.method;
  j["env"] = r.env;
  j["seed"] = r.seed;
  j["episode_index"] = r.episode_index;
  j["task"] = {{"episode", r.task_episode},
               {"t", r.task_t},
               {"offset", r.task_offset},
               {"budget", r.task_budget}};
  j["config_hash"] = r.config_hash;
  j["success"] = r.success;
  j["steps_taken"] = r.steps_taken;
  j["raw_actions"] = r.raw_actions;
  j["latent_goal_distances"] = r.latent_goal_distances;
  j["plan_calls"] = r.plan_calls;
  j["predictor_calls"] = r.predictor_calls;
  j["model_forwards"] = r.model_forwards;
  j["wall_ms_total"] = r.wall_ms_total;
  j["wall_ms_per_plan_call"] = r.wall_ms_per_plan_call;
  return j;
}

EpisodeRecord record_from_json(const nlohmann::json& j) {
  LPB_CHECK_MSG(j.value("format_version", 0) == kRecordFormatVersion,
                "unrecognized record format");
  EpisodeRecord r;
  r.protocol = j.at("protocol").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.env = j.at("env").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  r.episode_index = j.at("episode_index").get<int>();
  r.task_episode = j.at("task").at("episode").get<int>();
  r.task_t = j.at("task").at("t").get<int>();
  r.task_offset = j.at("task").at("offset").get<int>();
  r.task_budget = j.at("task").at("budget").get<int>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.success = j.at("success").get<bool>();
  r.steps_taken = j.at("steps_taken").get<int>();
  r.raw_actions = j.at("raw_actions").get<std::vector<std::vector<double>>>();
  r.latent_goal_distances =
      j.at("latent_goal_distances").get<std::vector<double>>();
  r.plan_calls = j.at("plan_calls").get<int64_t>();
  r.predictor_calls = j.at("predictor_calls").get<int64_t>();
  r.model_forwards = j.at("model_forwards").get<int64_t>();
  r.wall_ms_total = j.at("wall_ms_total").get<double>();
  r.wall_ms_per_plan_call =
      j.at("wall_ms_per_plan_call").get<std::vector<double>>();
  return r;
}

void append_jsonl(const std::string& path,
                  const std::vector<EpisodeRecord>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw MissingArtifact("cannot open records file: " + path);
  for (const auto& r : records) out << record_to_json(r).dump() << "\n";
}

std::vector<EpisodeRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact("records file not found: " + path);
  std::vector<EpisodeRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    LPB_CHECK_MSG(!j.is_discarded(), "bad JSON line in " + path);
    out.push_back(record_from_json(j));
  }
  return out;
}

}  // namespace lpb
