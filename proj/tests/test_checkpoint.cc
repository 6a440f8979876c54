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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lpb/check.h"
#include "lpb/checkpoint.h"
#include "testutil.h"

namespace lpb {
namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST_CASE("checkpoint round-trip is bit-exact") {
  Rng rng(42);
  ParamSet ps;
  ps.add("enc.l0.w", test::random_tensor({5, 7}, rng));
  ps.add("enc.l0.b", test::random_tensor({7}, rng));
  ps.add("head.w", test::random_tensor({7, 2}, rng, 0.01));
  nlohmann::json meta = {{"d", 7}, {"lambda", 1.0}};
  std::string p1 = test::temp_path("ckpt_a.ckpt");
  std::string p2 = test::temp_path("ckpt_b.ckpt");
  save_checkpoint(p1, ps, "world_model", meta);
  LoadedCheckpoint loaded = load_checkpoint(p1);
  CHECK(loaded.kind == "world_model");
  CHECK(loaded.meta.at("d") == 7);
  CHECK(loaded.params.size() == 3);
  CHECK(loaded.params.at(0).name == "enc.l0.w");
  save_checkpoint(p2, loaded.params, loaded.kind, loaded.meta);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1).size() > 0);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("checkpoint rejects non-finite values") {
  ParamSet ps;
  ps.add("w", Tensor({2}, 1.0));
  ps.value(0).data[1] = std::nan("");
  std::string p = test::temp_path("ckpt_nan.ckpt");
  CHECK_THROWS_AS(save_checkpoint(p, ps, "k", {}), NumericalError);
  std::remove(p.c_str());
}

TEST_CASE("missing checkpoint raises MissingArtifact") {
  CHECK_THROWS_AS(load_checkpoint("definitely_not_here.ckpt"), MissingArtifact);
}

TEST_CASE("checksum is stable and order-sensitive") {
  Rng rng(1);
  ParamSet a, b;
  Tensor t1 = test::random_tensor({3, 3}, rng);
  Tensor t2 = test::random_tensor({3}, rng);
  a.add("x", t1);
  a.add("y", t2);
  b.add("x", t1);
  b.add("y", t2);
  CHECK(a.value_checksum() == b.value_checksum());
  b.value(0).data[0] += 1.0;
  CHECK(a.value_checksum() != b.value_checksum());
}

}  // namespace
}  // namespace lpb
