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

#ifndef LPB_DATASET_H_
#define LPB_DATASET_H_

#include <string>
#include <vector>

#include "lpb/env.h"
#include "lpb/rng.h"

namespace lpb {

// One demonstration trajectory: T+1 observations, T actions.
struct Episode {
  int steps = 0;  // T
  std::vector<double> obs;  // (T+1) x obs_dim, row-major
  std::vector<double> act;  // T x act_dim
  uint64_t seed = 0;
  bool success = false;

  const double* obs_at(int t, int obs_dim) const { return obs.data() + static_cast<size_t>(t) * obs_dim; }
  const double* act_at(int t, int act_dim) const { return act.data() + static_cast<size_t>(t) * act_dim; }
};

struct DemoDataset {
  EnvId env = EnvId::kPointMass;
  int obs_dim = 0;
  int act_dim = 0;
  std::string expert_mode = "greedy";
  std::vector<Episode> episodes;

  int64_t total_steps() const;
  std::vector<double> obs_vec(int episode, int t) const;
  std::vector<double> act_vec(int episode, int t) const;

  // Episode-level subsets (data-efficiency / held-out protocols).
  DemoDataset subset(const std::vector<int>& episode_indices) const;
};

// Container on disk: <prefix>.json index + <prefix>.bin little-endian f32
// payload (observations then actions per episode).
void save_dataset(const DemoDataset& ds, const std::string& prefix);
DemoDataset load_dataset(const std::string& prefix);

// Expert demonstrations from randomized starts, chaining fresh goals until
// max_len steps so long-offset goal tasks can be sampled from the data. Only
// episodes whose first goal is reached are stored; failures retry with a
// fresh derived seed (bounded).
// mode: "greedy" (default experts) or "paced" (point_mass constant-velocity).
DemoDataset collect_dataset(EnvId env, int n_episodes, int max_len, Rng rng,
                            const std::string& mode = "greedy");

// Deterministic 90/10-style episode split (shuffle by rng, first
// ceil(frac*n) go to `first`).
void split_episodes(const DemoDataset& ds, double frac, Rng rng,
                    std::vector<int>* first, std::vector<int>* second);

// A goal-conditioned evaluation task drawn from a stored episode.
struct GoalTask {
  EnvId env;
  std::vector<double> start_obs;
  std::vector<double> goal_obs;
  int goal_offset_steps = 0;
  int budget = 0;
  int episode_index = -1;
  int t_index = -1;
};

// Samples start frames uniformly over (episode, t) with t + offset within
// range. All methods evaluated under one protocol must consume the same list.
std::vector<GoalTask> sample_tasks(const DemoDataset& ds, int n, int offset,
                                   int budget, Rng rng);
// Restricted to episodes in `allowed` (held-out protocol).
std::vector<GoalTask> sample_tasks_from(const DemoDataset& ds,
                                        const std::vector<int>& allowed, int n,
                                        int offset, int budget, Rng rng);

}  // namespace lpb

#endif  // LPB_DATASET_H_
