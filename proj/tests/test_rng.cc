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

#include "lpb/rng.h"

namespace lpb {
namespace {

TEST_CASE("same seed, same draws") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("named streams are independent of sibling creation") {
  Rng root(42);
  Rng wm1 = root.stream("world_model");
  // Creating other streams must not perturb this one.
  Rng root2(42);
  (void)root2.stream("solver");
  (void)root2.stream("dataset");
  Rng wm2 = root2.stream("world_model");
  for (int i = 0; i < 20; ++i) CHECK(wm1.next_u64() == wm2.next_u64());
}

TEST_CASE("distinct names and splits give distinct draws") {
  Rng root(1);
  CHECK(root.stream("a").next_u64() != root.stream("b").next_u64());
  CHECK(root.split(0).next_u64() != root.split(1).next_u64());
}

TEST_CASE("uniform and gaussian moments") {
  Rng rng(123);
  const int n = 200000;
  double us = 0, gs = 0, g2 = 0;
  for (int i = 0; i < n; ++i) {
    us += rng.uniform();
    double g = rng.gaussian();
    gs += g;
    g2 += g * g;
  }
  CHECK(us / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(gs / n == doctest::Approx(0.0).scale(1).epsilon(0.01));
  CHECK(g2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uniform_int stays in range and covers it") {
  Rng rng(9);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) counts[rng.uniform_int(7)]++;
  for (int c : counts) CHECK(c > 700);
}

}  // namespace
}  // namespace lpb
