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

#ifndef LPB_ENV_H_
#define LPB_ENV_H_

#include <string>
#include <vector>

#include "lpb/rng.h"

namespace lpb {

// Deterministic toy control environments. Observations are full state
// vectors; state components are quantized to f32 after every step so stored
// episodes replay exactly.
//
//   two_room    2-D position, velocity actions, a vertical wall at x=0.5
//               with a door gap; swept substep collision, no tunneling.
//   push_block  circular pusher and circular block, quasi-static contact.
//   reacher     two revolute joints, velocity actions, obs = angles + tip.
//   point_mass  pure integrator, the analytic test bed.
enum class EnvId { kTwoRoom, kPushBlock, kReacher, kPointMass };

const char* env_name(EnvId id);
EnvId env_from_name(const std::string& name);
std::vector<EnvId> all_envs();

struct ActionSpec {
  int dim = 0;
  std::vector<double> low, high;
};

int obs_dim(EnvId id);
const ActionSpec& action_spec(EnvId id);
// Per-coordinate observation bounds (used to normalize encoder inputs).
void obs_bounds(EnvId id, std::vector<double>* lo, std::vector<double>* hi);

// State and observation coincide for every environment here.
struct EnvState {
  EnvId id;
  std::vector<double> v;
};

EnvState state_from_obs(EnvId id, const std::vector<double>& obs);
std::vector<double> observe(const EnvState& s);

// Clips the action to the spec, integrates one step, clamps to the
// workspace, quantizes to f32. Throws on non-finite actions.
EnvState env_step(const EnvState& s, const double* action);

// Closed threshold (<= 0.05) on the env-specific goal slice: agent position
// for two_room/point_mass, fingertip for reacher, block center for
// push_block.
bool env_success(const std::vector<double>& obs,
                 const std::vector<double>& goal_obs, EnvId id);
double goal_distance(const std::vector<double>& obs,
                     const std::vector<double>& goal_obs, EnvId id);
constexpr double kSuccessThreshold = 0.05;

// Scripted controllers used for demonstration collection.
std::vector<double> expert_action(const EnvState& s,
                                  const std::vector<double>& goal_obs,
                                  EnvId id);
// Constant-velocity variant for point_mass: a = (goal - z) / steps_left.
std::vector<double> paced_expert_action(const EnvState& s,
                                        const std::vector<double>& goal_obs,
                                        int steps_left);

EnvState env_init_state(EnvId id, Rng& rng);
// A random reachable goal observation (full scene state).
std::vector<double> env_sample_goal(EnvId id, Rng& rng);

// Reacher helpers (shared with diagnostics/tests).
void reacher_tip(double q1, double q2, double* x, double* y);
bool reacher_ik_elbow_up(double x, double y, double* q1, double* q2);

// two_room geometry (shared with tests). The agent radius is a dyadic
// rational so the wall-face coordinates 0.5 +/- r survive f32 quantization
// exactly.
constexpr double kWallX = 0.5;
constexpr double kDoorLow = 0.45;
constexpr double kDoorHigh = 0.55;
constexpr double kAgentRadius = 0.0078125;  // 1/128
// push_block geometry.
constexpr double kPusherRadius = 0.03;
constexpr double kBlockRadius = 0.05;

}  // namespace lpb

#endif  // LPB_ENV_H_
