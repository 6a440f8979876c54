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

#include <algorithm>
#include <cmath>

#include "lpb/check.h"
#include "lpb/solvers.h"

namespace lpb {
namespace {

// Asymptotic Kolmogorov-Smirnov p-value against the standard normal.
double ks_pvalue_standard_normal(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  size_t n = xs.size();
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double cdf = 0.5 * std::erfc(-xs[i] * M_SQRT1_2);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  double lambda = d * (std::sqrt(static_cast<double>(n)) + 0.12 +
                       0.11 / std::sqrt(static_cast<double>(n)));
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::min(1.0, std::max(0.0, p));
}

// Latent model whose output ignores the action: every candidate costs the
// same, exposing the weighting path.
class ConstantLatent : public LatentModel {
 public:
  explicit ConstantLatent(int dim) : dim_(dim) {}
  int latent_dim() const override { return dim_; }
  int action_dim() const override { return dim_; }
  void predict_grads(const std::any&, const Tensor& dznext, Tensor* dz,
                     Tensor* da) override {
    if (dz) *dz = dznext;
    if (da) {
      *da = dznext;
      da->fill(0.0);
    }
  }

 protected:
  Tensor do_predict(const Tensor& z, const Tensor&, std::any*) override {
    return z;
  }

 private:
  int dim_;
};

// Records every action batch fed to the integrator (for elite-reuse checks).
class RecordingIntegrator : public LatentModel {
 public:
  explicit RecordingIntegrator(int dim) : dim_(dim) {}
  int latent_dim() const override { return dim_; }
  int action_dim() const override { return dim_; }
  void predict_grads(const std::any&, const Tensor& dznext, Tensor* dz,
                     Tensor* da) override {
    if (dz) *dz = dznext;
    if (da) *da = dznext;
  }
  std::vector<Tensor> batches;

 protected:
  Tensor do_predict(const Tensor& z, const Tensor& a, std::any*) override {
    batches.push_back(a);
    Tensor out = z;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += a.data[i];
    return out;
  }

 private:
  int dim_;
};

const ActionSpec kSpec2 = [] {
  ActionSpec s;
  s.dim = 2;
  s.low = {-0.1, -0.1};
  s.high = {0.1, 0.1};
  return s;
}();

TEST_CASE("terminal cost is squared euclidean distance") {
  CHECK(terminal_cost({1.0, 2.0}, {1.0, 2.0}) == 0.0);
  CHECK(terminal_cost({1.0, 0.0}, {-1.0, 0.0}) == doctest::Approx(4.0));
  double base = terminal_cost({0.3, 0.4}, {0.0, 0.0});
  CHECK(terminal_cost({0.35, 0.4}, {0.0, 0.0}) > base);
}

TEST_CASE("cem accounting matches the closed form at defaults") {
  IntegratorLatent model(2);
  SolverConfig sc;
  sc.kind = SolverKind::kCem;
  PlanConfig pc;
  Rng rng(1);
  PlanResult r = plan({0.2, 0.2}, {0.4, 0.3}, model, kSpec2, pc, sc, rng);
  CHECK(r.cost.rollouts == 9000);
  CHECK(r.cost.predictor_calls == 45000);
  CHECK(r.cost.predictor_calls == r.cost.rollouts * pc.horizon);
}

TEST_CASE("zero-iteration cem returns its single sample") {
  IntegratorLatent model(2);
  SolverConfig sc;
  sc.kind = SolverKind::kCem;
  sc.num_samples = 1;
  sc.n_steps = 1;
  sc.topk = 1;
  PlanConfig pc;
  Rng rng(3);
  Rng probe(3);  // same stream: reconstruct the sample it must return
  PlanResult r = plan({0.0, 0.0}, {0.5, 0.5}, model, kSpec2, pc, sc, rng);
  CHECK(r.cost.rollouts == 1);
  for (int k = 0; k < pc.horizon; ++k) {
    for (int j = 0; j < 2; ++j) {
      double expect = std::clamp(std::sqrt(sc.var_scale) * probe.gaussian(),
                                 -0.1, 0.1);
      CHECK(r.actions.at(k, j) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("solvers recover the one-step analytic optimum on an integrator") {
  // plan horizon 1: the unique optimum of the terminal cost is z_g - z0.
  std::vector<double> z0 = {0.30, 0.60};
  std::vector<double> zg = {0.37, 0.52};
  PlanConfig pc;
  pc.horizon = 1;
  SUBCASE("cem") {
    IntegratorLatent model(2);
    SolverConfig sc;
    sc.kind = SolverKind::kCem;
    Rng rng(11);
    PlanResult r = plan(z0, zg, model, kSpec2, pc, sc, rng);
    CHECK(std::abs(r.actions.at(0, 0) - 0.07) < 0.02);
    CHECK(std::abs(r.actions.at(0, 1) + 0.08) < 0.02);
  }
  SUBCASE("icem") {
    IntegratorLatent model(2);
    SolverConfig sc;
    sc.kind = SolverKind::kIcem;
    Rng rng(12);
    PlanResult r = plan(z0, zg, model, kSpec2, pc, sc, rng);
    CHECK(std::abs(r.actions.at(0, 0) - 0.07) < 0.02);
    CHECK(std::abs(r.actions.at(0, 1) + 0.08) < 0.02);
  }
  SUBCASE("mppi") {
    IntegratorLatent model(2);
    SolverConfig sc;
    sc.kind = SolverKind::kMppi;
    sc.temperature = 0.001;
    sc.var_scale = 0.01;
    Rng rng(13);
    PlanResult r = plan(z0, zg, model, kSpec2, pc, sc, rng);
    CHECK(std::abs(r.actions.at(0, 0) - 0.07) < 0.02);
    CHECK(std::abs(r.actions.at(0, 1) + 0.08) < 0.02);
  }
  SUBCASE("gradient") {
    IntegratorLatent model(2);
    SolverConfig sc;
    sc.kind = SolverKind::kGradient;
    sc.num_samples = 2;
    Rng rng(14);
    PlanResult r = plan(z0, zg, model, kSpec2, pc, sc, rng);
    CHECK(std::abs(r.actions.at(0, 0) - 0.07) < 1e-3);
    CHECK(std::abs(r.actions.at(0, 1) + 0.08) < 1e-3);
  }
}

TEST_CASE("cem best elite cost is non-increasing over iterations") {
  for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    IntegratorLatent model(2);
    SolverConfig sc;
    sc.kind = SolverKind::kCem;
    sc.num_samples = 100;
    sc.n_steps = 10;
    sc.topk = 10;
    PlanConfig pc;
    Rng rng(seed);
    PlanResult r = plan({0.1, 0.9}, {0.8, 0.4}, model, kSpec2, pc, sc, rng);
    for (size_t i = 1; i < r.iteration_best.size(); ++i) {
      CHECK(r.iteration_best[i] <= r.iteration_best[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("mppi weights: uniform under equal costs, sharp at low temperature") {
  ConstantLatent constant(2);
  SolverConfig sc;
  sc.kind = SolverKind::kMppi;
  sc.num_samples = 50;
  sc.n_steps = 1;
  PlanConfig pc;
  Rng rng(5);
  PlanResult r = plan({0.0, 0.0}, {1.0, 1.0}, constant, kSpec2, pc, sc, rng);
  REQUIRE(r.mppi_weights.size() == 50);
  double sum = 0.0;
  for (double w : r.mppi_weights) {
    CHECK(w == doctest::Approx(1.0 / 50).epsilon(1e-9));
    sum += w;
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);

  IntegratorLatent integ(2);
  sc.temperature = 1e-4;
  Rng rng2(6);
  PlanResult r2 = plan({0.0, 0.0}, {0.05, -0.03}, integ, kSpec2, pc, sc, rng2);
  double wmax = *std::max_element(r2.mppi_weights.begin(), r2.mppi_weights.end());
  CHECK(wmax > 0.99);
  double sum2 = 0.0;
  for (double w : r2.mppi_weights) sum2 += w;
  CHECK(std::abs(sum2 - 1.0) < 1e-9);
}

TEST_CASE("icem reinjects the previous best elite verbatim") {
  RecordingIntegrator model(2);
  SolverConfig sc;
  sc.kind = SolverKind::kIcem;
  sc.num_samples = 40;
  sc.n_steps = 2;
  sc.topk = 8;
  PlanConfig pc;
  std::vector<double> z0 = {0.2, 0.2}, zg = {0.6, 0.5};
  Rng rng(9);
  plan(z0, zg, model, kSpec2, pc, sc, rng);
  REQUIRE(static_cast<int>(model.batches.size()) == 2 * pc.horizon);
  // Reconstruct iteration-1 candidate sequences and costs.
  auto seq_of = [&](int iter, int i) {
    std::vector<double> seq;
    for (int k = 0; k < pc.horizon; ++k) {
      const Tensor& b = model.batches[iter * pc.horizon + k];
      seq.push_back(b.at(i, 0));
      seq.push_back(b.at(i, 1));
    }
    return seq;
  };
  int best = -1;
  double best_cost = 1e18;
  for (int i = 0; i < sc.num_samples; ++i) {
    std::vector<double> z = z0;
    auto seq = seq_of(0, i);
    for (int k = 0; k < pc.horizon; ++k) {
      z[0] += seq[2 * k];
      z[1] += seq[2 * k + 1];
    }
    double c = terminal_cost(z, zg);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  CHECK(seq_of(1, 0) == seq_of(0, best));
}

TEST_CASE("colored noise: beta=0 is white, beta=2 is temporally correlated") {
  Rng rng(42);
  const int kSeqs = 10000, kLen = 5;
  double corr0 = 0.0, corr2 = 0.0;
  int64_t pairs = 0;
  std::vector<double> whites;
  whites.reserve(kSeqs * kLen);
  for (int s = 0; s < kSeqs; ++s) {
    auto w = colored_noise(0.0, kLen, rng);
    auto r = colored_noise(2.0, kLen, rng);
    for (int t = 0; t + 1 < kLen; ++t) {
      corr0 += w[t] * w[t + 1];
      corr2 += r[t] * r[t + 1];
      ++pairs;
    }
    for (double v : w) whites.push_back(v);
  }
  corr0 /= pairs;
  corr2 /= pairs;
  CHECK(corr2 - corr0 > 0.3);
  CHECK(std::abs(corr0) < 0.05);
  // Unit marginals, exactly Gaussian at beta=0.
  CHECK(ks_pvalue_standard_normal(whites) > 0.01);
}

TEST_CASE("gradient planner accounting and the lr=0 identity") {
  IntegratorLatent model(2);
  SolverConfig sc;
  sc.kind = SolverKind::kGradient;
  sc.num_samples = 2;
  sc.n_steps = 30;
  PlanConfig pc;  // horizon 5
  Rng rng(77);
  PlanResult r = plan({0.0, 0.0}, {0.3, 0.3}, model, kSpec2, pc, sc, rng);
  CHECK(r.cost.rollouts == 60);
  CHECK(r.cost.predictor_calls == 300);

  sc.lr = 0.0;
  sc.num_samples = 1;
  sc.n_steps = 3;
  Rng rng2(78);
  Rng probe(78);
  PlanResult r2 = plan({0.0, 0.0}, {0.3, 0.3}, model, kSpec2, pc, sc, rng2);
  for (int k = 0; k < pc.horizon; ++k) {
    for (int j = 0; j < 2; ++j) {
      double expect = std::clamp(std::sqrt(sc.var_scale) * probe.gaussian(),
                                 -0.1, 0.1);
      CHECK(r2.actions.at(k, j) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("seeded determinism across solvers") {
  for (SolverKind kind : {SolverKind::kCem, SolverKind::kMppi,
                          SolverKind::kIcem, SolverKind::kGradient}) {
    CAPTURE(solver_name(kind));
    SolverConfig sc;
    sc.kind = kind;
    sc.num_samples = kind == SolverKind::kGradient ? 2 : 60;
    sc.n_steps = 4;
    sc.topk = 10;
    PlanConfig pc;
    IntegratorLatent m1(2), m2(2);
    Rng a(123), b(123);
    PlanResult r1 = plan({0.1, 0.2}, {0.5, 0.4}, m1, kSpec2, pc, sc, a);
    PlanResult r2 = plan({0.1, 0.2}, {0.5, 0.4}, m2, kSpec2, pc, sc, b);
    CHECK(r1.actions.data == r2.actions.data);
  }
}

TEST_CASE("emitted actions respect the bounds") {
  for (SolverKind kind : {SolverKind::kCem, SolverKind::kMppi,
                          SolverKind::kIcem, SolverKind::kGradient}) {
    IntegratorLatent model(2);
    SolverConfig sc;
    sc.kind = kind;
    sc.num_samples = kind == SolverKind::kGradient ? 2 : 40;
    sc.n_steps = 3;
    sc.topk = 8;
    PlanConfig pc;
    Rng rng(5);
    PlanResult r = plan({0.0, 0.0}, {4.0, -4.0}, model, kSpec2, pc, sc, rng);
    for (double v : r.actions.data) {
      CHECK(v <= 0.1 + 1e-12);
      CHECK(v >= -0.1 - 1e-12);
    }
  }
}

}  // namespace
}  // namespace lpb
