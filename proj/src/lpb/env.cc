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

#include "lpb/env.h"

#include <algorithm>
#include <cmath>

#include "lpb/check.h"

namespace lpb {
namespace {

constexpr double kReacherL1 = 0.5;
constexpr double kReacherL2 = 0.5;
constexpr double kReacherQMin = -M_PI;
constexpr double kReacherQMax = M_PI;
constexpr int kSubsteps = 32;

double clampd(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

double f32q(double v) { return static_cast<double>(static_cast<float>(v)); }

void quantize(std::vector<double>* v) {
  for (double& x : *v) x = f32q(x);
}

ActionSpec box_spec(int dim, double mag) {
  ActionSpec s;
  s.dim = dim;
  s.low.assign(dim, -mag);
  s.high.assign(dim, mag);
  return s;
}

const ActionSpec kTwoRoomSpec = box_spec(2, 0.1);
const ActionSpec kPushBlockSpec = box_spec(2, 0.05);
const ActionSpec kReacherSpec = box_spec(2, 0.2);
const ActionSpec kPointMassSpec = box_spec(2, 0.1);

// Inside the wall band and outside the door opening (with agent radius).
bool two_room_blocked(double x, double y) {
  if (std::abs(x - kWallX) >= kAgentRadius) return false;
  return y < kDoorLow + kAgentRadius || y > kDoorHigh - kAgentRadius;
}

}  // namespace

const char* env_name(EnvId id) {
  switch (id) {
    case EnvId::kTwoRoom: return "two_room";
    case EnvId::kPushBlock: return "push_block";
    case EnvId::kReacher: return "reacher";
    case EnvId::kPointMass: return "point_mass";
  }
  return "?";
}

EnvId env_from_name(const std::string& name) {
  for (EnvId id : all_envs()) {
    if (name == env_name(id)) return id;
  }
  throw ConfigError("unknown environment: " + name);
}

std::vector<EnvId> all_envs() {
  return {EnvId::kTwoRoom, EnvId::kPushBlock, EnvId::kReacher,
          EnvId::kPointMass};
}

int obs_dim(EnvId id) {
  switch (id) {
    case EnvId::kTwoRoom: return 2;
    case EnvId::kPushBlock: return 4;
    case EnvId::kReacher: return 4;
    case EnvId::kPointMass: return 2;
  }
  return 0;
}

const ActionSpec& action_spec(EnvId id) {
  switch (id) {
    case EnvId::kTwoRoom: return kTwoRoomSpec;
    case EnvId::kPushBlock: return kPushBlockSpec;
    case EnvId::kReacher: return kReacherSpec;
    case EnvId::kPointMass: return kPointMassSpec;
  }
  return kPointMassSpec;
}

void obs_bounds(EnvId id, std::vector<double>* lo, std::vector<double>* hi) {
  switch (id) {
    case EnvId::kTwoRoom:
    case EnvId::kPointMass:
      *lo = {0.0, 0.0};
      *hi = {1.0, 1.0};
      return;
    case EnvId::kPushBlock:
      *lo = {0.0, 0.0, 0.0, 0.0};
      *hi = {1.0, 1.0, 1.0, 1.0};
      return;
    case EnvId::kReacher:
      *lo = {kReacherQMin, kReacherQMin, -1.0, -1.0};
      *hi = {kReacherQMax, kReacherQMax, 1.0, 1.0};
      return;
  }
  throw ContractViolation("bad env id");
}

EnvState state_from_obs(EnvId id, const std::vector<double>& obs) {
  LPB_CHECK_MSG(static_cast<int>(obs.size()) == obs_dim(id),
                "observation dimension mismatch");
  return EnvState{id, obs};
}

std::vector<double> observe(const EnvState& s) { return s.v; }

void reacher_tip(double q1, double q2, double* x, double* y) {
  *x = kReacherL1 * std::cos(q1) + kReacherL2 * std::cos(q1 + q2);
  *y = kReacherL1 * std::sin(q1) + kReacherL2 * std::sin(q1 + q2);
}

bool reacher_ik_elbow_up(double x, double y, double* q1, double* q2) {
  double d2 = x * x + y * y;
  double c2 = (d2 - kReacherL1 * kReacherL1 - kReacherL2 * kReacherL2) /
              (2.0 * kReacherL1 * kReacherL2);
  if (c2 < -1.0 - 1e-9 || c2 > 1.0 + 1e-9) return false;
  c2 = clampd(c2, -1.0, 1.0);
  double t2 = -std::acos(c2);  // elbow-up branch
  double t1 = std::atan2(y, x) -
              std::atan2(kReacherL2 * std::sin(t2),
                         kReacherL1 + kReacherL2 * std::cos(t2));
  // Wrap into [-pi, pi].
  while (t1 > M_PI) t1 -= 2.0 * M_PI;
  while (t1 < -M_PI) t1 += 2.0 * M_PI;
  *q1 = t1;
  *q2 = t2;
  return true;
}

namespace {

EnvState step_two_room(const EnvState& s, const double* a) {
  double x = s.v[0], y = s.v[1];
  // Axis-decomposed substeps with sliding. Substeps are much shorter than
  // the wall band (2 * radius), so the wall cannot be tunneled.
  double dx = a[0] / kSubsteps, dy = a[1] / kSubsteps;
  for (int i = 0; i < kSubsteps; ++i) {
    double nx = clampd(x + dx, kAgentRadius, 1.0 - kAgentRadius);
    if (two_room_blocked(nx, y)) {
      // Stop against the wall face on the current side.
      nx = x < kWallX ? kWallX - kAgentRadius : kWallX + kAgentRadius;
    }
    x = nx;
    double ny = clampd(y + dy, kAgentRadius, 1.0 - kAgentRadius);
    if (!two_room_blocked(x, ny)) y = ny;  // else stopped at a door jamb
  }
  EnvState out{s.id, {x, y}};
  quantize(&out.v);
  return out;
}

EnvState step_push_block(const EnvState& s, const double* a) {
  double px = s.v[0], py = s.v[1], bx = s.v[2], by = s.v[3];
  double dx = a[0] / kSubsteps, dy = a[1] / kSubsteps;
  const double contact = kPusherRadius + kBlockRadius;
  for (int i = 0; i < kSubsteps; ++i) {
    px = clampd(px + dx, kPusherRadius, 1.0 - kPusherRadius);
    py = clampd(py + dy, kPusherRadius, 1.0 - kPusherRadius);
    double nx = bx - px, ny = by - py;
    double dist = std::sqrt(nx * nx + ny * ny);
    if (dist < contact) {
      // Quasi-static: translate the block along the contact normal.
      if (dist < 1e-9) {
        nx = 1.0;
        ny = 0.0;
        dist = 1.0;
      }
      double ux = nx / dist, uy = ny / dist;
      double overlap = contact - dist;
      bx = clampd(bx + ux * overlap, kBlockRadius, 1.0 - kBlockRadius);
      by = clampd(by + uy * overlap, kBlockRadius, 1.0 - kBlockRadius);
      // If the block could not move (wall), the pusher stops at contact.
      nx = bx - px;
      ny = by - py;
      dist = std::sqrt(nx * nx + ny * ny);
      if (dist < contact && dist > 1e-9) {
        px = bx - nx / dist * contact;
        py = by - ny / dist * contact;
      }
    }
  }
  EnvState out{s.id, {px, py, bx, by}};
  quantize(&out.v);
  return out;
}

EnvState step_reacher(const EnvState& s, const double* a) {
  double q1 = clampd(s.v[0] + a[0], kReacherQMin, kReacherQMax);
  double q2 = clampd(s.v[1] + a[1], kReacherQMin, kReacherQMax);
  double tx, ty;
  reacher_tip(q1, q2, &tx, &ty);
  EnvState out{s.id, {q1, q2, tx, ty}};
  quantize(&out.v);
  return out;
}

EnvState step_point_mass(const EnvState& s, const double* a) {
  EnvState out{s.id,
               {clampd(s.v[0] + a[0], 0.0, 1.0), clampd(s.v[1] + a[1], 0.0, 1.0)}};
  quantize(&out.v);
  return out;
}

}  // namespace

EnvState env_step(const EnvState& s, const double* action) {
  const ActionSpec& spec = action_spec(s.id);
  double clipped[8];
  for (int i = 0; i < spec.dim; ++i) {
    LPB_CHECK_MSG(std::isfinite(action[i]), "non-finite action");
    clipped[i] = clampd(action[i], spec.low[i], spec.high[i]);
  }
  switch (s.id) {
    case EnvId::kTwoRoom: return step_two_room(s, clipped);
    case EnvId::kPushBlock: return step_push_block(s, clipped);
    case EnvId::kReacher: return step_reacher(s, clipped);
    case EnvId::kPointMass: return step_point_mass(s, clipped);
  }
  throw ContractViolation("bad env id");
}

double goal_distance(const std::vector<double>& obs,
                     const std::vector<double>& goal_obs, EnvId id) {
  LPB_CHECK_MSG(obs.size() == goal_obs.size() &&
                    static_cast<int>(obs.size()) == obs_dim(id),
                "env mismatch in success predicate");
  int lo = 0;
  switch (id) {
    case EnvId::kTwoRoom:
    case EnvId::kPointMass: lo = 0; break;
    case EnvId::kReacher:
    case EnvId::kPushBlock: lo = 2; break;
  }
  double ax = obs[lo] - goal_obs[lo];
  double ay = obs[lo + 1] - goal_obs[lo + 1];
  return std::sqrt(ax * ax + ay * ay);
}

bool env_success(const std::vector<double>& obs,
                 const std::vector<double>& goal_obs, EnvId id) {
  return goal_distance(obs, goal_obs, id) <= kSuccessThreshold;
}

namespace {

std::vector<double> clip_to_spec(std::vector<double> a, const ActionSpec& spec) {
  for (int i = 0; i < spec.dim; ++i) a[i] = clampd(a[i], spec.low[i], spec.high[i]);
  return a;
}

std::vector<double> expert_two_room(const EnvState& s,
                                    const std::vector<double>& goal) {
  double x = s.v[0], y = s.v[1];
  bool same_side = (x < kWallX) == (goal[0] < kWallX);
  // Strictly inside the door band means the agent is mid-doorway; heading
  // for the goal directly avoids a fixed point at the waypoint itself.
  bool in_doorway = std::abs(x - kWallX) < kAgentRadius;
  double tx = (same_side || in_doorway) ? goal[0] : kWallX;
  double ty = (same_side || in_doorway) ? goal[1]
                                        : 0.5 * (kDoorLow + kDoorHigh);
  return clip_to_spec({tx - x, ty - y}, kTwoRoomSpec);
}

std::vector<double> expert_reacher(const EnvState& s,
                                   const std::vector<double>& goal) {
  double q1t, q2t;
  if (!reacher_ik_elbow_up(goal[2], goal[3], &q1t, &q2t)) {
    q1t = goal[0];
    q2t = goal[1];
  }
  return clip_to_spec({q1t - s.v[0], q2t - s.v[1]}, kReacherSpec);
}

std::vector<double> expert_push_block(const EnvState& s,
                                      const std::vector<double>& goal) {
  const double contact = kPusherRadius + kBlockRadius;
  const double clearance = 0.025;
  double px = s.v[0], py = s.v[1], bx = s.v[2], by = s.v[3];
  double gx = goal[2], gy = goal[3];
  double tox = gx - bx, toy = gy - by;
  double tod = std::sqrt(tox * tox + toy * toy);
  if (tod <= 0.35 * kSuccessThreshold) return {0.0, 0.0};
  double ux = tox / tod, uy = toy / tod;  // push direction
  // Staging point behind the block along the block->goal ray.
  double sx = bx - ux * (contact + clearance);
  double sy = by - uy * (contact + clearance);
  double rpx = px - bx, rpy = py - by;
  double rd = std::sqrt(rpx * rpx + rpy * rpy);
  double align = rd > 1e-9 ? (-(rpx * ux + rpy * uy)) / rd : -1.0;
  if (align > 0.97) {
    // Lined up behind the block: advance into it toward the goal, but do
    // not overshoot the goal.
    double step = std::min(tod, 0.04);
    return clip_to_spec({ux * step + (sx - px), uy * step + (sy - py)},
                        kPushBlockSpec);
  }
  // Approach the staging point; orbit the block when the direct path would
  // disturb it.
  if (rd < contact + clearance * 0.6 ||
      (rd < contact + 2.5 * clearance && align < 0.2)) {
    // Too close for a direct approach: orbit along the tangent, with a mild
    // radial push back out to the staging ring.
    double inv = 1.0 / std::max(rd, 1e-9);
    double tx = -rpy * inv, ty = rpx * inv;
    // Pick the tangent direction that reduces the angle to the staging point.
    double cross = rpx * (sy - by) - rpy * (sx - bx);
    if (cross < 0) {
      tx = -tx;
      ty = -ty;
    }
    double radial = (contact + clearance) - rd;
    return clip_to_spec({0.05 * tx + 0.6 * radial * rpx * inv,
                         0.05 * ty + 0.6 * radial * rpy * inv},
                        kPushBlockSpec);
  }
  return clip_to_spec({sx - px, sy - py}, kPushBlockSpec);
}

}  // namespace

std::vector<double> expert_action(const EnvState& s,
                                  const std::vector<double>& goal_obs,
                                  EnvId id) {
  LPB_CHECK(s.id == id);
  switch (id) {
    case EnvId::kTwoRoom: return expert_two_room(s, goal_obs);
    case EnvId::kPushBlock: return expert_push_block(s, goal_obs);
    case EnvId::kReacher: return expert_reacher(s, goal_obs);
    case EnvId::kPointMass:
      return clip_to_spec({goal_obs[0] - s.v[0], goal_obs[1] - s.v[1]},
                          kPointMassSpec);
  }
  throw ContractViolation("bad env id");
}

std::vector<double> paced_expert_action(const EnvState& s,
                                        const std::vector<double>& goal_obs,
                                        int steps_left) {
  LPB_CHECK(s.id == EnvId::kPointMass);
  LPB_CHECK_MSG(steps_left >= 1, "paced expert needs steps_left >= 1");
  double inv = 1.0 / static_cast<double>(steps_left);
  return clip_to_spec(
      {(goal_obs[0] - s.v[0]) * inv, (goal_obs[1] - s.v[1]) * inv},
      kPointMassSpec);
}

EnvState env_init_state(EnvId id, Rng& rng) {
  switch (id) {
    case EnvId::kPointMass:
      return {id, {rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)}};
    case EnvId::kTwoRoom: {
      bool left = rng.uniform() < 0.5;
      double x = left ? rng.uniform(0.05, kWallX - kAgentRadius - 0.02)
                      : rng.uniform(kWallX + kAgentRadius + 0.02, 0.95);
      return {id, {x, rng.uniform(0.05, 0.95)}};
    }
    case EnvId::kReacher: {
      // Angles quantized first so the stored tip equals FK of the stored
      // angles exactly (replay identity).
      double q1 = f32q(rng.uniform(-2.6, 2.6));
      double q2 = f32q(rng.uniform(-2.4, -0.15));
      double tx, ty;
      reacher_tip(q1, q2, &tx, &ty);
      return {id, {q1, q2, f32q(tx), f32q(ty)}};
    }
    case EnvId::kPushBlock: {
      double bx = rng.uniform(0.2, 0.8), by = rng.uniform(0.2, 0.8);
      double px, py;
      do {
        px = rng.uniform(0.08, 0.92);
        py = rng.uniform(0.08, 0.92);
      } while (std::hypot(px - bx, py - by) <
               kPusherRadius + kBlockRadius + 0.02);
      EnvState s{id, {px, py, bx, by}};
      quantize(&s.v);
      return s;
    }
  }
  throw ContractViolation("bad env id");
}

std::vector<double> env_sample_goal(EnvId id, Rng& rng) {
  switch (id) {
    case EnvId::kPointMass:
      return {f32q(rng.uniform(0.08, 0.92)), f32q(rng.uniform(0.08, 0.92))};
    case EnvId::kTwoRoom: {
      bool left = rng.uniform() < 0.5;
      double x = left ? rng.uniform(0.08, kWallX - kAgentRadius - 0.03)
                      : rng.uniform(kWallX + kAgentRadius + 0.03, 0.92);
      return {f32q(x), f32q(rng.uniform(0.08, 0.92))};
    }
    case EnvId::kReacher: {
      double q1 = f32q(rng.uniform(-2.6, 2.6));
      double q2 = f32q(rng.uniform(-2.4, -0.15));
      double tx, ty;
      reacher_tip(q1, q2, &tx, &ty);
      return {q1, q2, f32q(tx), f32q(ty)};
    }
    case EnvId::kPushBlock: {
      double bx = rng.uniform(0.25, 0.75), by = rng.uniform(0.25, 0.75);
      // Goal scene: pusher resting at the contact point it would finish at.
      double ang = rng.uniform(0.0, 2.0 * M_PI);
      double px = clampd(bx - std::cos(ang) * (kPusherRadius + kBlockRadius),
                         kPusherRadius, 1.0 - kPusherRadius);
      double py = clampd(by - std::sin(ang) * (kPusherRadius + kBlockRadius),
                         kPusherRadius, 1.0 - kPusherRadius);
      std::vector<double> g = {px, py, bx, by};
      quantize(&g);
      return g;
    }
  }
  throw ContractViolation("bad env id");
}

}  // namespace lpb
