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

#ifndef LPB_SOLVERS_H_
#define LPB_SOLVERS_H_

#include <string>
#include <vector>

#include "lpb/env.h"
#include "lpb/latent_model.h"
#include "lpb/rng.h"

namespace lpb {

struct PlanConfig {
  int horizon = 5;           // predictor steps per candidate rollout
  int receding_horizon = 5;  // planned actions committed per plan call
  int action_block = 5;      // raw env repeats per planned action
};

enum class SolverKind { kCem, kMppi, kIcem, kGradient };
const char* solver_name(SolverKind k);
SolverKind solver_from_name(const std::string& name);

struct SolverConfig {
  SolverKind kind = SolverKind::kCem;
  int num_samples = 300;
  int n_steps = 30;  // refinement iterations
  int topk = 30;
  double var_scale = 1.0;
  double temperature = 0.5;   // mppi
  double noise_beta = 2.0;    // icem colored noise exponent
  int elite_keep = 5;         // icem elites reinjected
  double keep_fraction = 0.1; // icem population fraction reserved for elites
  double lr = 1.0;            // gradient planner step size
  uint64_t seed = 0;
};

struct PlanCost {
  int64_t rollouts = 0;
  int64_t predictor_calls = 0;
  double wall_clock_ms = 0.0;
};

struct PlanResult {
  Tensor actions;  // [horizon, act_dim]
  PlanCost cost;
  double best_cost = 0.0;
  // Best elite cost after each refinement iteration (sampling solvers).
  std::vector<double> iteration_best;
  // Softmax weights of the final mppi iteration (sum to 1).
  std::vector<double> mppi_weights;
};

// Squared Euclidean distance in latent space.
double terminal_cost(const std::vector<double>& z, const std::vector<double>& z_goal);

// Unit-variance power-law temporal noise (exponent beta over the sequence
// axis); beta = 0 reduces to exact white Gaussian noise.
std::vector<double> colored_noise(double beta, int n, Rng& rng);

PlanResult plan(const std::vector<double>& z0, const std::vector<double>& z_goal,
                LatentModel& model, const ActionSpec& spec,
                const PlanConfig& plan_cfg, const SolverConfig& solver_cfg,
                Rng& rng);

}  // namespace lpb

#endif  // LPB_SOLVERS_H_
