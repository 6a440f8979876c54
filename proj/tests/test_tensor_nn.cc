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
#include "lpb/adamw.h"
#include "lpb/blocks.h"
#include "lpb/mlp.h"
#include "lpb/params.h"
#include "testutil.h"

namespace lpb {
namespace {

using test::dot_all;
using test::fd_rel_err;
using test::random_tensor;

TEST_CASE("linear identity and hand arithmetic") {
  Tensor x = Tensor::row({1.0, 0.0});
  Tensor w({2, 2});
  w.at(0, 0) = 1.0;
  w.at(1, 1) = 1.0;
  Tensor b({2});
  Tensor y = linear_forward(x, w, b);
  CHECK(y.at(0, 0) == 1.0);
  CHECK(y.at(0, 1) == 0.0);

  Tensor x2 = Tensor::row({1.0, 1.0});
  Tensor w2({2, 1}, 1.0);
  Tensor b2({1}, 1.0);
  CHECK(linear_forward(x2, w2, b2).at(0, 0) == 3.0);

  CHECK_THROWS_AS(linear_forward(x, w2, b), ContractViolation);
}

TEST_CASE("linear gradients vs central differences") {
  Rng rng(5);
  Tensor x = random_tensor({3, 4}, rng);
  Tensor w = random_tensor({4, 6}, rng);
  Tensor b = random_tensor({6}, rng);
  Tensor r = random_tensor({3, 6}, rng);  // loss = <y, r>
  auto loss = [&] { return dot_all(linear_forward(x, w, b), r); };
  Tensor dx, dw(w.shape), db(b.shape);
  linear_backward(x, w, r, &dx, &dw, &db);
  CHECK(fd_rel_err(loss, &x, dx) < 1e-4);
  CHECK(fd_rel_err(loss, &w, dw) < 1e-4);
  CHECK(fd_rel_err(loss, &b, db) < 1e-4);
}

TEST_CASE("layernorm basics") {
  Tensor gain({4}, 1.0), bias({4});
  Tensor c({1, 4}, 3.7);  // constant row -> zero output
  Tensor y = layernorm_forward(c, gain, bias, 1e-5);
  for (double v : y.data) CHECK(v == doctest::Approx(0.0).scale(1));

  Tensor gain2({2}, 1.0), bias2({2});
  Tensor x = Tensor::row({1.0, -1.0});  // already standardized
  Tensor y2 = layernorm_forward(x, gain2, bias2, 1e-12);
  CHECK(y2.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(y2.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("layernorm gradients vs central differences") {
  Rng rng(6);
  Tensor x = random_tensor({4, 5}, rng);
  Tensor gain = random_tensor({5}, rng);
  Tensor bias = random_tensor({5}, rng);
  Tensor r = random_tensor({4, 5}, rng);
  auto loss = [&] { return dot_all(layernorm_forward(x, gain, bias, 1e-5), r); };
  LayerNormCache cache;
  layernorm_forward(x, gain, bias, 1e-5, &cache);
  Tensor dx, dgain(gain.shape), dbias(bias.shape);
  layernorm_backward(cache, gain, r, &dx, &dgain, &dbias);
  CHECK(fd_rel_err(loss, &x, dx) < 1e-4);
  CHECK(fd_rel_err(loss, &gain, dgain) < 1e-4);
  CHECK(fd_rel_err(loss, &bias, dbias) < 1e-4);
}

TEST_CASE("gelu value and gradient") {
  Tensor z({1, 1});
  CHECK(gelu(z).at(0, 0) == 0.0);

  Rng rng(7);
  Tensor x = random_tensor({3, 7}, rng);
  Tensor r = random_tensor({3, 7}, rng);
  auto loss = [&] { return dot_all(gelu(x), r); };
  Tensor dx;
  gelu_backward(x, r, &dx);
  CHECK(fd_rel_err(loss, &x, dx) < 1e-4);
}

TEST_CASE("dropout eval identity and train-mode mean") {
  Rng rng(8);
  Tensor x = random_tensor({2, 5}, rng);
  Tensor y = dropout(x, 0.1, rng, /*train=*/false);
  CHECK(y.data == x.data);

  // Monte-Carlo oracle: E[dropout(x)] == x with inverted scaling.
  Tensor x1({1, 4});
  x1.data = {1.0, -2.0, 0.5, 3.0};
  Tensor acc({1, 4});
  const int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    Tensor d = dropout(x1, 0.1, rng, /*train=*/true);
    tensor_axpy(1.0 / kDraws, d, &acc);
  }
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(acc.data[j] - x1.data[j]) / std::abs(x1.data[j]) < 0.01);
  }

  CHECK_THROWS_AS(dropout(x1, 1.0, rng, true), ContractViolation);
}

TEST_CASE("dropout backward uses the saved mask") {
  Rng rng(88);
  Tensor x = random_tensor({4, 8}, rng);
  Tensor mask;
  Tensor y = dropout(x, 0.3, rng, true, &mask);
  Tensor dy = random_tensor({4, 8}, rng);
  Tensor dx;
  dropout_backward(mask, dy, &dx);
  for (size_t i = 0; i < dx.data.size(); ++i) {
    CHECK(dx.data[i] == dy.data[i] * mask.data[i]);
    CHECK(y.data[i] == x.data[i] * mask.data[i]);
  }
}

TEST_CASE("sinusoidal encoding") {
  Tensor e0 = sinusoidal_encode(0.0, 8);
  for (int k = 0; k < 4; ++k) {
    CHECK(e0.data[2 * k] == 0.0);      // sin slots
    CHECK(e0.data[2 * k + 1] == 1.0);  // cos slots
  }
  CHECK_THROWS_AS(sinusoidal_encode(0.5, 7), ContractViolation);

  // Injective on a 1/H grid at dim 64.
  const int kGrid = 50;
  std::vector<Tensor> enc;
  for (int i = 0; i < kGrid; ++i) {
    enc.push_back(sinusoidal_encode((i + 1) / double(kGrid), 64));
    for (double v : enc.back().data) CHECK(std::abs(v) <= 1.0);
  }
  for (int i = 0; i < kGrid; ++i) {
    for (int j = i + 1; j < kGrid; ++j) {
      CHECK(std::sqrt(sqdist(enc[i].ptr(), enc[j].ptr(), 64)) > 1e-6);
    }
  }
}

TEST_CASE("adaln-zero identity at zero init and scaling") {
  Rng rng(9);
  Tensor h = random_tensor({3, 6}, rng);
  Tensor c = random_tensor({3, 4}, rng);
  Tensor wg({4, 6}), bg({6}), wb({4, 6}), bb({6});  // zero init
  Tensor y = adaln_zero_forward(h, c, wg, bg, wb, bb);
  CHECK(y.data == h.data);  // bitwise

  // gamma(c) = 1 (via bias), beta(c) = 0 -> output doubles h.
  Tensor bg1({6}, 1.0);
  Tensor y2 = adaln_zero_forward(h, c, wg, bg1, wb, bb);
  for (size_t i = 0; i < y2.data.size(); ++i) {
    CHECK(y2.data[i] == doctest::Approx(2.0 * h.data[i]));
  }
}

TEST_CASE("adaln-zero gradients vs central differences") {
  Rng rng(10);
  Tensor h = random_tensor({3, 6}, rng);
  Tensor c = random_tensor({3, 4}, rng);
  Tensor wg = random_tensor({4, 6}, rng, 0.3);
  Tensor bg = random_tensor({6}, rng, 0.3);
  Tensor wb = random_tensor({4, 6}, rng, 0.3);
  Tensor bb = random_tensor({6}, rng, 0.3);
  Tensor r = random_tensor({3, 6}, rng);
  auto loss = [&] {
    return dot_all(adaln_zero_forward(h, c, wg, bg, wb, bb), r);
  };
  AdalnCache cache;
  adaln_zero_forward(h, c, wg, bg, wb, bb, &cache);
  Tensor dh, dc, dwg(wg.shape), dbg(bg.shape), dwb(wb.shape), dbb(bb.shape);
  adaln_zero_backward(cache, wg, wb, r, &dh, &dc, &dwg, &dbg, &dwb, &dbb);
  CHECK(fd_rel_err(loss, &h, dh) < 1e-4);
  CHECK(fd_rel_err(loss, &c, dc) < 1e-4);
  CHECK(fd_rel_err(loss, &wg, dwg) < 1e-4);
  CHECK(fd_rel_err(loss, &bg, dbg) < 1e-4);
  CHECK(fd_rel_err(loss, &wb, dwb) < 1e-4);
  CHECK(fd_rel_err(loss, &bb, dbb) < 1e-4);
}

TEST_CASE("mlp forward/backward composition vs central differences") {
  Rng rng(11);
  ParamSet ps;
  MlpConfig cfg;
  cfg.in = 5;
  cfg.hidden = 8;
  cfg.out = 3;
  cfg.hidden_layers = 2;
  cfg.layer_norm = true;
  cfg.dropout = 0.0;
  Rng init = rng.stream("init");
  Mlp mlp(&ps, "m", cfg, &init);
  Tensor x = random_tensor({4, 5}, rng);
  Tensor r = random_tensor({4, 3}, rng);
  auto loss = [&] { return dot_all(mlp.forward(x), r); };
  Mlp::Cache cache;
  mlp.forward(x, false, nullptr, &cache);
  ps.zero_grads();
  Tensor dx = mlp.backward(cache, r);
  CHECK(fd_rel_err(loss, &x, dx) < 1e-4);
  for (int i = 0; i < ps.size(); ++i) {
    CAPTURE(ps.at(i).name);
    CHECK(fd_rel_err(loss, &ps.value(i), ps.at(i).grad) < 1e-4);
  }
}

TEST_CASE("adamw zero gradient leaves parameters unchanged") {
  ParamSet ps;
  Rng rng(1);
  ps.add("w", random_tensor({3, 3}, rng));
  Tensor before = ps.value(0);
  OptimState opt = make_optim_state(ps, {1e-3, 1e-5, 100}, /*wd=*/0.0, 1.0);
  ps.zero_grads();
  adamw_step(&ps, &opt);
  CHECK(ps.value(0).data == before.data);
  CHECK(opt.step == 1);
}

TEST_CASE("adamw drives a quadratic to zero") {
  ParamSet ps;
  ps.add("w", Tensor({1}, 1.0));
  OptimState opt = make_optim_state(ps, {0.1, 0.001, 200}, 0.0, 0.0);
  for (int i = 0; i < 200; ++i) {
    ps.zero_grads();
    ps.grad(0).data[0] = 2.0 * ps.value(0).data[0];  // d/dw of w^2
    adamw_step(&ps, &opt);
  }
  CHECK(std::abs(ps.value(0).data[0]) < 1e-3);
}

TEST_CASE("adamw clips the global gradient norm") {
  ParamSet ps;
  ps.add("w", Tensor({4}));
  OptimState opt = make_optim_state(ps, {1e-3, 1e-3, 10}, 0.0, 1.0);
  ps.zero_grads();
  for (int i = 0; i < 4; ++i) ps.grad(0).data[i] = 5.0;  // norm 10
  adamw_step(&ps, &opt);
  // First moment is (1 - beta1) * g_eff; recover the effective norm.
  double norm = std::sqrt(tensor_sqnorm(opt.m[0])) / (1.0 - opt.beta1);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adamw aborts on NaN gradient naming the parameter") {
  ParamSet ps;
  ps.add("enc.w", Tensor({2}));
  OptimState opt = make_optim_state(ps, {1e-3, 1e-3, 10}, 0.0, 1.0);
  ps.grad(0).data[0] = std::nan("");
  try {
    adamw_step(&ps, &opt);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("enc.w") != std::string::npos);
  }
}

TEST_CASE("cosine schedule endpoints") {
  CosineSchedule s{1e-3, 1e-5, 100};
  CHECK(s.at(0) == doctest::Approx(1e-3));
  CHECK(s.at(100) == doctest::Approx(1e-5));
  CHECK(s.at(500) == doctest::Approx(1e-5));
  CHECK(s.at(50) == doctest::Approx((1e-3 + 1e-5) / 2));
}

TEST_CASE("initializers are deterministic and have the right spread") {
  Rng a(42), b(42);
  Tensor t1 = kaiming_init({512, 4}, a);
  Tensor t2 = kaiming_init({512, 4}, b);
  CHECK(t1.data == t2.data);

  Rng mc(7);
  Tensor big = kaiming_init({512, 200}, mc);  // ~1e5 draws, fan_in 512
  double mean = 0, sq = 0;
  for (double v : big.data) {
    mean += v;
    sq += v * v;
  }
  mean /= big.numel();
  double std = std::sqrt(sq / big.numel() - mean * mean);
  CHECK(std == doctest::Approx(std::sqrt(2.0 / 512.0)).epsilon(0.05));

  Tensor sm = small_init({400, 250}, 0.01, mc);
  double sq2 = 0;
  for (double v : sm.data) sq2 += v * v;
  CHECK(std::sqrt(sq2 / sm.numel()) == doctest::Approx(0.01).epsilon(0.05));
}

TEST_CASE("paramset rejects duplicates and keeps order") {
  ParamSet ps;
  ps.add("b", Tensor({1}));
  ps.add("a", Tensor({1}));
  CHECK(ps.at(0).name == "b");
  CHECK(ps.at(1).name == "a");
  CHECK_THROWS_AS(ps.add("a", Tensor({1})), ContractViolation);
}

}  // namespace
}  // namespace lpb
