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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "lpb/check.h"
#include "lpb/env.h"

namespace lpb {
namespace {

TEST_CASE("point_mass is a pure integrator") {
  EnvState s{EnvId::kPointMass, {0.3, 0.3}};
  double a[2] = {0.2, 0.0};  // clipped to 0.1
  EnvState s2 = env_step(s, a);
  CHECK(s2.v[0] == doctest::Approx(0.4).epsilon(1e-7));
  double a2[2] = {0.05, -0.02};
  EnvState s3 = env_step(s, a2);
  CHECK(s3.v[0] == doctest::Approx(0.35).epsilon(1e-7));
  CHECK(s3.v[1] == doctest::Approx(0.28).epsilon(1e-7));
}

TEST_CASE("two_room wall clamps x at the face") {
  EnvState s{EnvId::kTwoRoom, {0.47, 0.2}};
  double a[2] = {0.1, 0.0};
  EnvState s2 = env_step(s, a);
  CHECK(s2.v[0] == doctest::Approx(kWallX - kAgentRadius).epsilon(1e-6));
  CHECK(s2.v[1] == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("two_room matches a fine-substep oracle") {
  // Same contact law at 64x finer resolution: diagonal push into the wall.
  auto fine = [](EnvState s, double ax, double ay, int reps) {
    for (int r = 0; r < reps; ++r) {
      // Simulate with tiny action chunks; env_step internally substeps again.
      double a[2] = {ax / reps, ay / reps};
      s = env_step(s, a);
    }
    return s;
  };
  EnvState s{EnvId::kTwoRoom, {0.47, 0.30}};
  double a[2] = {0.08, 0.06};
  EnvState coarse = env_step(s, a);
  EnvState oracle = fine(s, 0.08, 0.06, 64);
  CHECK(coarse.v[0] == doctest::Approx(oracle.v[0]).epsilon(5e-3));
  CHECK(std::abs(coarse.v[1] - oracle.v[1]) < 5e-3);
}

TEST_CASE("two_room never places the agent inside the wall") {
  Rng rng(3);
  for (int ep = 0; ep < 50; ++ep) {
    Rng r = rng.split(ep);
    EnvState s = env_init_state(EnvId::kTwoRoom, r);
    for (int t = 0; t < 60; ++t) {
      double a[2] = {r.uniform(-0.1, 0.1), r.uniform(-0.1, 0.1)};
      s = env_step(s, a);
      bool inside_band = std::abs(s.v[0] - kWallX) < kAgentRadius - 1e-9;
      bool in_door = s.v[1] >= kDoorLow + kAgentRadius - 1e-9 &&
                     s.v[1] <= kDoorHigh - kAgentRadius + 1e-9;
      CHECK((!inside_band || in_door));
    }
  }
}

TEST_CASE("two_room passes through the door") {
  EnvState s{EnvId::kTwoRoom, {0.3, 0.5}};
  double a[2] = {0.1, 0.0};
  for (int i = 0; i < 5; ++i) s = env_step(s, a);
  CHECK(s.v[0] > kWallX + kAgentRadius);  // crossed through the gap
}

TEST_CASE("reacher zero action keeps the state, tip matches fk") {
  Rng rng(4);
  EnvState s = env_init_state(EnvId::kReacher, rng);
  double a[2] = {0.0, 0.0};
  EnvState s2 = env_step(s, a);
  CHECK(s2.v == s.v);
  double tx, ty;
  reacher_tip(s.v[0], s.v[1], &tx, &ty);
  CHECK(s.v[2] == doctest::Approx(tx).epsilon(1e-6));
  CHECK(s.v[3] == doctest::Approx(ty).epsilon(1e-6));
}

TEST_CASE("reacher ik round-trips fk on the elbow-up branch") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    double q1 = rng.uniform(-2.6, 2.6), q2 = rng.uniform(-2.4, -0.15);
    double x, y, r1, r2;
    reacher_tip(q1, q2, &x, &y);
    REQUIRE(reacher_ik_elbow_up(x, y, &r1, &r2));
    CHECK(r1 == doctest::Approx(q1).epsilon(1e-6));
    CHECK(r2 == doctest::Approx(q2).epsilon(1e-6));
  }
}

TEST_CASE("success predicate thresholds") {
  std::vector<double> o{0.2, 0.2}, g{0.2, 0.2};
  CHECK(env_success(o, g, EnvId::kPointMass));
  g = {0.4, 0.2};
  CHECK(!env_success(o, g, EnvId::kPointMass));
  g = {0.25, 0.2};  // distance exactly 0.05: closed threshold
  CHECK(env_success(o, g, EnvId::kPointMass));
}

TEST_CASE("push_block contact is quasi-static and impenetrable") {
  // Pusher drives straight into the block; block translates along the normal.
  EnvState s{EnvId::kPushBlock, {0.40, 0.5, 0.5, 0.5}};
  double a[2] = {0.05, 0.0};
  for (int i = 0; i < 6; ++i) {
    s = env_step(s, a);
    double d = std::hypot(s.v[0] - s.v[2], s.v[1] - s.v[3]);
    CHECK(d >= kPusherRadius + kBlockRadius - 1e-6);
  }
  CHECK(s.v[2] > 0.5);                      // block moved along +x
  CHECK(s.v[3] == doctest::Approx(0.5).epsilon(1e-6));  // pure normal push
}

TEST_CASE("experts") {
  SUBCASE("point_mass proportional") {
    EnvState s{EnvId::kPointMass, {0.0, 0.0}};
    auto a = expert_action(s, {0.05, 0.0}, EnvId::kPointMass);
    CHECK(a[0] == doctest::Approx(0.05));
    CHECK(a[1] == doctest::Approx(0.0));
  }
  SUBCASE("two_room routes through the door center") {
    EnvState s{EnvId::kTwoRoom, {0.2, 0.8}};
    auto a = expert_action(s, {0.8, 0.2}, EnvId::kTwoRoom);
    // Heads toward (0.5, 0.5), not toward the goal.
    CHECK(a[0] > 0.0);
    CHECK(a[1] < 0.0);
    double frac = a[1] / a[0];
    CHECK(frac == doctest::Approx((0.5 - 0.8) / (0.5 - 0.2)).epsilon(1e-6));
  }
  SUBCASE("reacher at goal angles gives zero action") {
    double q1 = 0.7, q2 = -1.1, tx, ty;
    reacher_tip(q1, q2, &tx, &ty);
    EnvState s{EnvId::kReacher, {q1, q2, tx, ty}};
    auto a = expert_action(s, {q1, q2, tx, ty}, EnvId::kReacher);
    CHECK(std::abs(a[0]) < 1e-6);
    CHECK(std::abs(a[1]) < 1e-6);
  }
}

TEST_CASE("expert competence: >= 99% over 500 seeded tasks at budget 100") {
  for (EnvId env : all_envs()) {
    CAPTURE(env_name(env));
    Rng rng(fnv1a64(env_name(env), std::strlen(env_name(env))));
    int ok = 0;
    const int kTasks = 500;
    for (int i = 0; i < kTasks; ++i) {
      Rng r = rng.split(i);
      EnvState s = env_init_state(env, r);
      std::vector<double> goal = env_sample_goal(env, r);
      bool reached = env_success(s.v, goal, env);
      for (int t = 0; t < 100 && !reached; ++t) {
        auto a = expert_action(s, goal, env);
        s = env_step(s, a.data());
        reached = env_success(s.v, goal, env);
      }
      ok += reached;
    }
    CHECK(ok >= 495);
  }
}

TEST_CASE("non-finite action is rejected") {
  EnvState s{EnvId::kPointMass, {0.5, 0.5}};
  double a[2] = {std::nan(""), 0.0};
  CHECK_THROWS_AS(env_step(s, a), ContractViolation);
}

}  // namespace
}  // namespace lpb
