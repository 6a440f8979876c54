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
#include "lpb/smallalg.h"
#include "lpb/world_model.h"
#include "testutil.h"

namespace lpb {
namespace {

TEST_CASE("sigreg values") {
  Rng rng(3);
  Tensor z = test::random_tensor({64, 5}, rng);
  for (double& v : z.data) v = 1.7 * v - 0.4;
  whiten_rows(&z);
  CHECK(sigreg(z) < 1e-10);  // exactly whitened batch

  Tensor zeros({16, 7});
  CHECK(sigreg(zeros) == doctest::Approx(7.0));  // ||0 - I||_F^2 = d

  Tensor one({1, 4});
  CHECK_THROWS_AS(sigreg(one), ContractViolation);
}

TEST_CASE("sigreg sampling error shrinks with batch size") {
  Rng rng(5);
  const int d = 32;
  auto draw = [&](int n) {
    Tensor z({n, d});
    rng.fill_gaussian(z.ptr(), z.numel());
    return sigreg(z);
  };
  double small = 0, big = 0;
  for (int rep = 0; rep < 3; ++rep) {
    small += draw(512);
    big += draw(4096);
  }
  CHECK(big < small);
  CHECK(big / 3 < 1.0);  // ~ d^2/n
}

TEST_CASE("sigreg gradient matches central differences") {
  Rng rng(6);
  Tensor z = test::random_tensor({10, 4}, rng);
  Tensor g = sigreg_gradient(z);
  auto loss = [&] { return sigreg(z); };
  CHECK(test::fd_rel_err(loss, &z, g) < 1e-4);
}

DemoDataset point_mass_data(int episodes, uint64_t seed) {
  return collect_dataset(EnvId::kPointMass, episodes, 100, Rng(seed));
}

WorldModelConfig small_wm_config() {
  WorldModelConfig cfg;
  cfg.d = 32;
  cfg.hidden = 128;
  cfg.batch = 256;
  cfg.epochs = 40;
  return cfg;
}

TEST_CASE("encode determinism and batch consistency") {
  DemoDataset ds = point_mass_data(3, 1);
  WorldModelConfig cfg = small_wm_config();
  cfg.obs_dim = ds.obs_dim;
  cfg.act_dim = ds.act_dim;
  WorldModel wm(cfg, Rng(7));
  std::vector<double> obs = ds.obs_vec(0, 0);
  auto z1 = wm.encode(obs);
  auto z2 = wm.encode(obs);
  CHECK(z1 == z2);
  Tensor batch({4, 2});
  for (int i = 0; i < 4; ++i) {
    set_tensor_row(&batch, i, ds.episodes[0].obs_at(i, ds.obs_dim));
  }
  Tensor zb = wm.encode_batch(batch);
  for (int i = 0; i < 4; ++i) {
    auto zi = wm.encode(ds.obs_vec(0, i));
    for (int j = 0; j < cfg.d; ++j) CHECK(zb.at(i, j) == zi[j]);
  }
}

TEST_CASE("predictor call counter increments per row") {
  WorldModelConfig cfg = small_wm_config();
  cfg.obs_dim = 2;
  cfg.act_dim = 2;
  WorldModel wm(cfg, Rng(9));
  int64_t before = global_predictor_calls().load();
  Tensor z({1, 32}), a({1, 2});
  wm.predict_batch(z, a);
  CHECK(global_predictor_calls().load() == before + 1);
  Tensor z3({3, 32}), a3({3, 2});
  wm.predict_batch(z3, a3);
  CHECK(global_predictor_calls().load() == before + 4);
}

TEST_CASE("training improves prediction, isotropy, and local injectivity") {
  DemoDataset train = point_mass_data(40, 21);
  DemoDataset heldout = collect_dataset(EnvId::kPointMass, 45, 100, Rng(99));
  WorldModelConfig cfg = small_wm_config();
  WorldModel untrained(
      [&] {
        WorldModelConfig c = cfg;
        c.obs_dim = train.obs_dim;
        c.act_dim = train.act_dim;
        return c;
      }(),
      Rng(42).stream("init"));
  std::vector<TrainCurveRow> curve;
  WorldModel wm = train_world_model(train, cfg, Rng(42), &curve);
  REQUIRE(!curve.empty());

  // Held-out one-step error: lower than 0.1x the mean latent norm, and at
  // least 3x better than the untrained model.
  PredictionQuality qt = evaluate_prediction(wm, heldout);
  PredictionQuality q0 = evaluate_prediction(untrained, heldout);
  CHECK(qt.mean_error < 0.1 * qt.mean_latent_norm);
  CHECK(q0.mean_error / qt.mean_error > 3.0);

  // Prediction loss fell by >= 3x from initialization (training curve).
  double first = curve.front().loss_a;
  double last_avg = 0.0;
  int tail = std::min<size_t>(10, curve.size());
  for (int i = 0; i < tail; ++i) last_avg += curve[curve.size() - 1 - i].loss_a;
  last_avg /= tail;
  CHECK(first / last_avg >= 3.0);

  // Isotropy on >= 4096 held-out latents.
  int64_t frames = 0;
  for (const auto& e : heldout.episodes) frames += e.steps + 1;
  REQUIRE(frames >= 4096);
  Tensor all({frames, 2});
  int64_t r = 0;
  for (const auto& e : heldout.episodes) {
    for (int t = 0; t <= e.steps; ++t) set_tensor_row(&all, r++, e.obs_at(t, 2));
  }
  Tensor z = wm.encode_batch(all);
  std::vector<double> mean;
  Tensor cov;
  mean_and_covariance(z, &mean, &cov);
  CHECK(std::sqrt(sqnorm(mean.data(), mean.size())) < 0.1);
  auto evals = symmetric_eigenvalues(cov);
  CHECK(evals.front() > 0.0);
  CHECK(evals.back() / evals.front() < 10.0);

  // Post-training sigreg on a held-out batch is below its value at init.
  Tensor z0 = untrained.encode_batch(all);
  CHECK(sigreg(z) < sigreg(z0));

  // Local injectivity: the latent nearest neighbor of a held-out frame sits
  // nearby in state space (recall@1 > 0.9 against the train frames).
  Tensor train_states({train.total_steps() + static_cast<int64_t>(train.episodes.size()), 2});
  r = 0;
  for (const auto& e : train.episodes) {
    for (int t = 0; t <= e.steps; ++t) set_tensor_row(&train_states, r++, e.obs_at(t, 2));
  }
  Tensor train_z = wm.encode_batch(train_states);
  Rng pick(5);
  int hits = 0;
  const int kQueries = 200;
  for (int q = 0; q < kQueries; ++q) {
    int64_t qi = pick.uniform_int(frames);
    const double* zq = z.row_ptr(qi);
    int64_t bestj = 0;
    double bestd = 1e300;
    for (int64_t j = 0; j < train_z.rows(); ++j) {
      double dd = sqdist(zq, train_z.row_ptr(j), 32);
      if (dd < bestd) {
        bestd = dd;
        bestj = j;
      }
    }
    double sd = std::sqrt(sqdist(all.row_ptr(qi), train_states.row_ptr(bestj), 2));
    hits += sd <= 0.05 ? 1 : 0;
  }
  CHECK(hits > 0.9 * kQueries);

  // Checkpoint round-trip preserves behavior bit-exactly.
  wm.save("lpb_test_tmp_wm.ckpt");
  WorldModel back = WorldModel::load("lpb_test_tmp_wm.ckpt");
  CHECK(back.checksum() == wm.checksum());
  std::remove("lpb_test_tmp_wm.ckpt");
}

TEST_CASE("without the regularizer the latent covariance collapses") {
  DemoDataset train = point_mass_data(25, 31);
  WorldModelConfig cfg = small_wm_config();
  cfg.epochs = 60;
  WorldModelConfig cfg0 = cfg;
  cfg0.lambda = 0.0;
  WorldModel plain = train_world_model(train, cfg0, Rng(4), nullptr);
  WorldModel init_model(
      [&] {
        WorldModelConfig c = cfg0;
        c.obs_dim = train.obs_dim;
        c.act_dim = train.act_dim;
        return c;
      }(),
      Rng(4).stream("init"));
  Tensor frames({train.total_steps(), 2});
  int64_t r = 0;
  for (const auto& e : train.episodes) {
    for (int t = 0; t < e.steps; ++t) set_tensor_row(&frames, r++, e.obs_at(t, 2));
  }
  auto trace_of = [&](const WorldModel& m) {
    Tensor z = m.encode_batch(frames);
    std::vector<double> mean;
    Tensor cov;
    mean_and_covariance(z, &mean, &cov);
    double tr = 0.0;
    for (int i = 0; i < 32; ++i) tr += cov.at(i, i);
    return tr;
  };
  CHECK(trace_of(plain) < 0.1 * trace_of(init_model));
}

TEST_CASE("training is deterministic given the seed") {
  DemoDataset train = point_mass_data(6, 13);
  WorldModelConfig cfg = small_wm_config();
  cfg.epochs = 3;
  WorldModel a = train_world_model(train, cfg, Rng(1234), nullptr);
  WorldModel b = train_world_model(train, cfg, Rng(1234), nullptr);
  a.save("lpb_test_tmp_wm_a.ckpt");
  b.save("lpb_test_tmp_wm_b.ckpt");
  std::ifstream fa("lpb_test_tmp_wm_a.ckpt", std::ios::binary);
  std::ifstream fb("lpb_test_tmp_wm_b.ckpt", std::ios::binary);
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(!sa.str().empty());
  std::remove("lpb_test_tmp_wm_a.ckpt");
  std::remove("lpb_test_tmp_wm_b.ckpt");
}

}  // namespace
}  // namespace lpb
