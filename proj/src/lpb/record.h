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

#ifndef LPB_RECORD_H_
#define LPB_RECORD_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace lpb {

// One evaluated episode, serialized as one JSON line. Aggregate tables are
// pure functions of these records.
struct EpisodeRecord {
  std::string protocol;
  std::string variant;  // sweep point id, empty outside sweeps
  std::string method;
  std::string env;
  uint64_t seed = 0;
  int episode_index = -1;
  int task_episode = -1;
  int task_t = -1;
  int task_offset = 0;
  int task_budget = 0;
  std::string config_hash;
  bool success = false;
  int steps_taken = 0;
  std::vector<std::vector<double>> raw_actions;        // executed env actions
  std::vector<double> latent_goal_distances;           // steps_taken + 1
  int64_t plan_calls = 0;       // solver invocations / per-step re-encodings
  int64_t predictor_calls = 0;
  int64_t model_forwards = 0;   // amortized-controller forwards
  double wall_ms_total = 0.0;
  std::vector<double> wall_ms_per_plan_call;
};

constexpr int kRecordFormatVersion = 1;

nlohmann::json record_to_json(const EpisodeRecord& r);
EpisodeRecord record_from_json(const nlohmann::json& j);

void append_jsonl(const std::string& path, const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> read_jsonl(const std::string& path);

}  // namespace lpb

#endif  // LPB_RECORD_H_
