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

#include "lpb/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "json.hpp"
#include "lpb/check.h"

namespace lpb {

int64_t DemoDataset::total_steps() const {
  int64_t n = 0;
  for (const auto& e : episodes) n += e.steps;
  return n;
}

std::vector<double> DemoDataset::obs_vec(int episode, int t) const {
  const Episode& e = episodes[episode];
  const double* p = e.obs_at(t, obs_dim);
  return std::vector<double>(p, p + obs_dim);
}

std::vector<double> DemoDataset::act_vec(int episode, int t) const {
  const Episode& e = episodes[episode];
  const double* p = e.act_at(t, act_dim);
  return std::vector<double>(p, p + act_dim);
}

DemoDataset DemoDataset::subset(const std::vector<int>& episode_indices) const {
  DemoDataset out;
  out.env = env;
  out.obs_dim = obs_dim;
  out.act_dim = act_dim;
  out.expert_mode = expert_mode;
  out.episodes.reserve(episode_indices.size());
  for (int i : episode_indices) out.episodes.push_back(episodes[i]);
  return out;
}

void save_dataset(const DemoDataset& ds, const std::string& prefix) {
  nlohmann::json index;
  index["format_version"] = 1;
  index["env_id"] = env_name(ds.env);
  index["obs_dim"] = ds.obs_dim;
  index["act_dim"] = ds.act_dim;
  index["expert"] = ds.expert_mode;
  nlohmann::json lengths = nlohmann::json::array();
  nlohmann::json seeds = nlohmann::json::array();
  nlohmann::json success = nlohmann::json::array();
  nlohmann::json offsets = nlohmann::json::array();
  int64_t offset = 0;
  for (const auto& e : ds.episodes) {
    lengths.push_back(e.steps);
    seeds.push_back(e.seed);
    success.push_back(e.success);
    offsets.push_back(offset);
    offset += static_cast<int64_t>(sizeof(float)) *
              (static_cast<int64_t>(e.obs.size()) +
               static_cast<int64_t>(e.act.size()));
  }
  index["lengths"] = std::move(lengths);
  index["seeds"] = std::move(seeds);
  index["success"] = std::move(success);
  index["offsets"] = std::move(offsets);

  std::ofstream ji(prefix + ".json", std::ios::trunc);
  if (!ji) throw MissingArtifact("cannot write dataset index: " + prefix);
  ji << index.dump(2) << "\n";

  std::ofstream bin(prefix + ".bin", std::ios::binary | std::ios::trunc);
  if (!bin) throw MissingArtifact("cannot write dataset payload: " + prefix);
  std::vector<float> buf;
  for (const auto& e : ds.episodes) {
    buf.clear();
    buf.reserve(e.obs.size() + e.act.size());
    for (double v : e.obs) buf.push_back(static_cast<float>(v));
    for (double v : e.act) buf.push_back(static_cast<float>(v));
    bin.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
}

DemoDataset load_dataset(const std::string& prefix) {
  std::ifstream ji(prefix + ".json");
  if (!ji) throw MissingArtifact("dataset index not found: " + prefix + ".json");
  nlohmann::json index = nlohmann::json::parse(ji, nullptr, false);
  if (index.is_discarded() || index.value("format_version", 0) != 1) {
    throw MissingArtifact("unrecognized dataset index: " + prefix);
  }
  DemoDataset ds;
  ds.env = env_from_name(index.at("env_id").get<std::string>());
  ds.obs_dim = index.at("obs_dim").get<int>();
  ds.act_dim = index.at("act_dim").get<int>();
  ds.expert_mode = index.value("expert", "greedy");
  LPB_CHECK(ds.obs_dim == obs_dim(ds.env));
  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw MissingArtifact("dataset payload not found: " + prefix + ".bin");
  const auto& lengths = index.at("lengths");
  const auto& seeds = index.at("seeds");
  const auto& success = index.at("success");
  std::vector<float> buf;
  for (size_t i = 0; i < lengths.size(); ++i) {
    Episode e;
    e.steps = lengths[i].get<int>();
    e.seed = seeds[i].get<uint64_t>();
    e.success = success[i].get<bool>();
    size_t obs_n = static_cast<size_t>(e.steps + 1) * ds.obs_dim;
    size_t act_n = static_cast<size_t>(e.steps) * ds.act_dim;
    buf.resize(obs_n + act_n);
    bin.read(reinterpret_cast<char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!bin) throw MissingArtifact("truncated dataset payload: " + prefix);
    e.obs.assign(buf.begin(), buf.begin() + obs_n);
    e.act.assign(buf.begin() + obs_n, buf.end());
    ds.episodes.push_back(std::move(e));
  }
  return ds;
}

namespace {

float f32(double v) { return static_cast<float>(v); }

// Runs one chained-goal episode. Returns false when the first goal is not
// reached in time.
bool run_episode(EnvId env, int max_len, uint64_t seed, bool paced,
                 Episode* out) {
  Rng rng(seed);
  Rng init_rng = rng.stream("init");
  Rng goal_rng = rng.stream("goals");
  EnvState s = env_init_state(env, init_rng);
  std::vector<double> goal = env_sample_goal(env, goal_rng);
  int nd = obs_dim(env);
  int ad = action_spec(env).dim;
  out->steps = max_len;
  out->seed = seed;
  out->obs.clear();
  out->act.clear();
  out->obs.reserve(static_cast<size_t>(max_len + 1) * nd);
  out->act.reserve(static_cast<size_t>(max_len) * ad);
  for (double v : s.v) out->obs.push_back(v);
  int goals_reached = 0;
  int pace_left = 0;
  if (paced) {
    // Constant-velocity segments: |a| per step close to (but under) the
    // bound in the widest coordinate.
    double span = std::max(std::abs(goal[0] - s.v[0]), std::abs(goal[1] - s.v[1]));
    pace_left = std::max(1, static_cast<int>(std::ceil(span / 0.08)));
  }
  for (int t = 0; t < max_len; ++t) {
    std::vector<double> a = paced ? paced_expert_action(s, goal, pace_left)
                                  : expert_action(s, goal, env);
    for (double& v : a) v = f32(v);  // actions stored as f32; step what we store
    s = env_step(s, a.data());
    for (double v : a) out->act.push_back(v);
    for (double v : s.v) out->obs.push_back(v);
    if (paced) pace_left = std::max(1, pace_left - 1);
    if (env_success(s.v, goal, env)) {
      ++goals_reached;
      goal = env_sample_goal(env, goal_rng);
      if (paced) {
        double span =
            std::max(std::abs(goal[0] - s.v[0]), std::abs(goal[1] - s.v[1]));
        pace_left = std::max(1, static_cast<int>(std::ceil(span / 0.08)));
      }
    }
  }
  out->success = goals_reached >= 1;
  return out->success;
}

}  // namespace

DemoDataset collect_dataset(EnvId env, int n_episodes, int max_len, Rng rng,
                            const std::string& mode) {
  LPB_CHECK_MSG(n_episodes >= 1, "need at least one episode");
  LPB_CHECK_MSG(mode == "greedy" || mode == "paced", "unknown expert mode");
  LPB_CHECK_MSG(mode != "paced" || env == EnvId::kPointMass,
                "paced expert only exists for point_mass");
  DemoDataset ds;
  ds.env = env;
  ds.obs_dim = obs_dim(env);
  ds.act_dim = action_spec(env).dim;
  ds.expert_mode = mode;
  Rng seeds = rng.stream("collect");
  constexpr int kMaxRetries = 50;
  for (int i = 0; i < n_episodes; ++i) {
    Episode e;
    bool ok = false;
    uint64_t seed = 0;
    for (int attempt = 0; attempt < kMaxRetries && !ok; ++attempt) {
      seed = seeds.split(static_cast<uint64_t>(i) * kMaxRetries + attempt)
                 .next_u64();
      ok = run_episode(env, max_len, seed, mode == "paced", &e);
    }
    if (!ok) {
      throw NumericalError(std::string("expert retry budget exhausted on ") +
                           env_name(env) + " around seed " +
                           std::to_string(seed));
    }
    ds.episodes.push_back(std::move(e));
  }
  return ds;
}

void split_episodes(const DemoDataset& ds, double frac, Rng rng,
                    std::vector<int>* first, std::vector<int>* second) {
  int n = static_cast<int>(ds.episodes.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with the provided stream.
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.uniform_int(i + 1));
    std::swap(order[i], order[j]);
  }
  int n_first = static_cast<int>(std::ceil(frac * n));
  first->assign(order.begin(), order.begin() + n_first);
  second->assign(order.begin() + n_first, order.end());
  std::sort(first->begin(), first->end());
  std::sort(second->begin(), second->end());
}

std::vector<GoalTask> sample_tasks(const DemoDataset& ds, int n, int offset,
                                   int budget, Rng rng) {
  std::vector<int> all(ds.episodes.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return sample_tasks_from(ds, all, n, offset, budget, rng);
}

std::vector<GoalTask> sample_tasks_from(const DemoDataset& ds,
                                        const std::vector<int>& allowed, int n,
                                        int offset, int budget, Rng rng) {
  LPB_CHECK_MSG(offset >= 1 && budget >= 1, "bad task parameters");
  // Valid (episode, t) starts.
  std::vector<std::pair<int, int>> starts;
  for (int e : allowed) {
    int T = ds.episodes[e].steps;
    for (int t = 0; t + offset <= T; ++t) starts.emplace_back(e, t);
  }
  LPB_CHECK_MSG(!starts.empty(), "no episode long enough for requested offset");
  std::vector<GoalTask> tasks;
  tasks.reserve(n);
  for (int i = 0; i < n; ++i) {
    auto [e, t] = starts[rng.uniform_int(static_cast<int64_t>(starts.size()))];
    GoalTask task;
    task.env = ds.env;
    task.start_obs = ds.obs_vec(e, t);
    task.goal_obs = ds.obs_vec(e, t + offset);
    task.goal_offset_steps = offset;
    task.budget = budget;
    task.episode_index = e;
    task.t_index = t;
    tasks.push_back(std::move(task));
  }
  return tasks;
}

}  // namespace lpb
