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

#ifndef LPB_PROTOCOLS_H_
#define LPB_PROTOCOLS_H_

#include <string>
#include <vector>

#include "lpb/gc_idm.h"
#include "lpb/pairwise_idm.h"
#include "lpb/runio.h"
#include "lpb/solvers.h"
#include "lpb/world_model.h"

namespace lpb {

// Desk-scale defaults shared by the CLI and the acceptance suite.
int default_dataset_episodes();
int default_episode_length();
WorldModelConfig default_wm_config();
GcIdmConfig default_idm_config();
PairwiseConfig default_pairwise_config();
SolverConfig default_solver_config(SolverKind kind);

struct ProtocolOptions {
  Workspace ws;
  std::vector<EnvId> envs = all_envs();
  std::vector<uint64_t> seeds = {42, 123, 456};
  std::vector<std::string> methods = {};  // empty -> protocol default
  int n_episodes = 200;
  int offset = 25;
  int budget = 50;
  int jobs = 1;
  uint64_t protocol_seed = 7;  // matched-task sampling seed
};

// Named evaluation protocols. Each run writes records.jsonl plus aggregate
// CSV artifacts (and the sweep SVG) under ws.eval_dir(<name>) and returns
// the list of files written. Protocols that evaluate variant models train
// and cache them under the model directory first; everything else requires
// the standard artifacts and fails before any episode otherwise.
//   headline         gc_idm vs cem, matched tasks, all seeds
//   solver_family    gc_idm vs cem/icem/mppi/gradient
//   pareto           cem compute sweep + reference marker (+ SVG)
//   goal_offset      offsets {5,10,15,25,35,50}
//   budget           budgets {5,...,100} under H_max clamping
//   hmax             H_max grid {5,10,25,50,100}
//   horizon_embed    H_max=1 / H_max=5 / H_max=1 wide / default
//   noise            fixed input-noise grid {0,...,0.5}
//   noise_schedule   uniform-sigma schedule grid
//   arch             width {128..1024} and depth {1..5} sweeps
//   data_efficiency  episode-level fractions {1,...,100}%
//   heldout          90/10 episode split, evaluated on the held-out part
//   pairwise_oracle  ground-truth-pair metrics vs test noise
//   pairwise_noise   training-noise sweep with lerp execution
//   pairwise_plan    lerp/refine configurations vs gc_idm, cross-wall tasks
std::vector<std::string> protocol_names();
std::vector<std::string> run_protocol(const std::string& name,
                                      const ProtocolOptions& opt);

// Recomputes every CSV artifact of a protocol from its records.jsonl alone.
std::vector<std::string> regenerate_reports(const Workspace& ws,
                                            const std::string& protocol);

// Artifact loading with early, precise failures.
DemoDataset require_dataset(const Workspace& ws, EnvId env, bool val = false);
WorldModel require_world_model(const Workspace& ws, EnvId env);
GcIdm require_gc_idm(const Workspace& ws, EnvId env, uint64_t seed,
                     const std::string& tag = "");
// Trains and caches a variant model when its checkpoint does not exist yet.
GcIdm ensure_gc_idm_variant(const Workspace& ws, EnvId env, uint64_t seed,
                            const std::string& tag, const GcIdmConfig& cfg,
                            const DemoDataset& ds, const WorldModel& wm);
PairwiseIdm ensure_pairwise_variant(const Workspace& ws, EnvId env,
                                    const std::string& tag,
                                    const PairwiseConfig& cfg,
                                    const DemoDataset& ds,
                                    const WorldModel& wm);

// Tasks whose start and goal lie on opposite sides of the two_room wall.
std::vector<GoalTask> sample_cross_wall_tasks(const DemoDataset& ds, int n,
                                              int offset, int budget, Rng rng);

// Parallel episode evaluation (jobs > 1) with records emitted in task order.
std::vector<EpisodeRecord> run_episodes(
    const std::vector<GoalTask>& tasks, int jobs,
    const std::function<EpisodeRecord(const GoalTask&, int)>& fn);

}  // namespace lpb

#endif  // LPB_PROTOCOLS_H_
