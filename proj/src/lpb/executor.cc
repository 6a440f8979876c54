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

#include "lpb/executor.h"

#include <chrono>
#include <cmath>

#include "lpb/check.h"

namespace lpb {

namespace {
double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace

EpisodeRecord receding_horizon_execute(const GoalTask& task,
                                       const WorldModel& wm,
                                       const PlanConfig& plan_cfg,
                                       const SolverConfig& solver_cfg,
                                       Rng rng) {
  LPB_CHECK_MSG(task.budget >= 1, "budget must be positive");
  EpisodeRecord rec;
  rec.env = env_name(task.env);
  rec.task_episode = task.episode_index;
  rec.task_t = task.t_index;
  rec.task_offset = task.goal_offset_steps;
  rec.task_budget = task.budget;

  WorldModelLatent model(wm);
  const ActionSpec& spec = action_spec(task.env);
  auto episode_t0 = std::chrono::steady_clock::now();
  std::vector<double> z_goal = wm.encode(task.goal_obs);
  EnvState state = state_from_obs(task.env, task.start_obs);
  std::vector<double> obs = task.start_obs;
  {
    std::vector<double> z0 = wm.encode(obs);
    rec.latent_goal_distances.push_back(
        std::sqrt(sqdist(z0.data(), z_goal.data(), z0.size())));
  }
  rec.success = env_success(obs, task.goal_obs, task.env);
  bool done = rec.success;
  while (!done && rec.steps_taken < task.budget) {
    auto plan_t0 = std::chrono::steady_clock::now();
    std::vector<double> z = wm.encode(obs);
    PlanResult result =
        plan(z, z_goal, model, spec, plan_cfg, solver_cfg, rng);
    rec.wall_ms_per_plan_call.push_back(ms_since(plan_t0));
    ++rec.plan_calls;
    for (int i = 0; i < plan_cfg.receding_horizon && !done; ++i) {
      std::vector<double> a = tensor_row(result.actions, i);
      for (int r = 0; r < plan_cfg.action_block && !done; ++r) {
        state = env_step(state, a.data());
        obs = state.v;
        ++rec.steps_taken;
        rec.raw_actions.push_back(a);
        std::vector<double> zt = wm.encode(obs);
        rec.latent_goal_distances.push_back(
            std::sqrt(sqdist(zt.data(), z_goal.data(), zt.size())));
        if (env_success(obs, task.goal_obs, task.env)) {
          rec.success = true;
          done = true;
        } else if (rec.steps_taken >= task.budget) {
          done = true;
        }
      }
    }
  }
  rec.predictor_calls = model.calls();
  rec.model_forwards = 0;
  rec.wall_ms_total = ms_since(episode_t0);
  return rec;
}

}  // namespace lpb
