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

#ifndef LPB_EXECUTOR_H_
#define LPB_EXECUTOR_H_

#include "lpb/dataset.h"
#include "lpb/record.h"
#include "lpb/solvers.h"
#include "lpb/world_model.h"

namespace lpb {

// Receding-horizon control with a sampling/gradient planner: encode, plan,
// commit receding_horizon planned actions with each expanded into
// action_block raw env steps, re-encode, replan. Success is checked after
// every raw step. Fills the accounting and timing fields of the record;
// protocol metadata is left to the caller.
EpisodeRecord receding_horizon_execute(const GoalTask& task,
                                       const WorldModel& wm,
                                       const PlanConfig& plan_cfg,
                                       const SolverConfig& solver_cfg,
                                       Rng rng);

}  // namespace lpb

#endif  // LPB_EXECUTOR_H_
