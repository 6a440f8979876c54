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

#include "lpb/solvers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lpb/check.h"

namespace lpb {

const char* solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::kCem: return "cem";
    case SolverKind::kMppi: return "mppi";
    case SolverKind::kIcem: return "icem";
    case SolverKind::kGradient: return "gradient";
  }
  return "?";
}

SolverKind solver_from_name(const std::string& name) {
  for (SolverKind k : {SolverKind::kCem, SolverKind::kMppi, SolverKind::kIcem,
                       SolverKind::kGradient}) {
    if (name == solver_name(k)) return k;
  }
  throw ConfigError("unknown solver: " + name);
}

double terminal_cost(const std::vector<double>& z,
                     const std::vector<double>& z_goal) {
  LPB_CHECK(z.size() == z_goal.size());
  return sqdist(z.data(), z_goal.data(), static_cast<int64_t>(z.size()));
}

std::vector<double> colored_noise(double beta, int n, Rng& rng) {
  LPB_CHECK(n >= 1);
  if (n == 1) return {rng.gaussian()};
  // Hermitian spectrum with power-law amplitudes s_k = f_k^(-beta/2); the
  // zero-frequency amplitude reuses f_1 so the spectrum stays finite. The
  // output is normalized to exactly unit marginal variance, and beta = 0
  // makes the transform orthogonal, i.e. exact white noise.
  int m = n / 2;  // highest distinct frequency index (Nyquist if n even)
  std::vector<double> s(m + 1);
  double f1 = 1.0 / n;
  for (int k = 0; k <= m; ++k) {
    double f = std::max(static_cast<double>(k) / n, f1);
    s[k] = std::pow(f, -beta / 2.0);
  }
  bool even = (n % 2) == 0;
  std::vector<double> re(m + 1, 0.0), im(m + 1, 0.0);
  re[0] = s[0] * rng.gaussian();
  double var_sum = s[0] * s[0];
  for (int k = 1; k <= m; ++k) {
    bool nyquist = even && k == m;
    if (nyquist) {
      re[k] = s[k] * rng.gaussian();
      var_sum += s[k] * s[k];
    } else {
      re[k] = s[k] * rng.gaussian() * M_SQRT1_2;
      im[k] = s[k] * rng.gaussian() * M_SQRT1_2;
      var_sum += 2.0 * s[k] * s[k];
    }
  }
  double inv_sigma = 1.0 / std::sqrt(var_sum / n);
  std::vector<double> x(n);
  for (int t = 0; t < n; ++t) {
    double acc = re[0];
    for (int k = 1; k <= m; ++k) {
      double theta = 2.0 * M_PI * k * t / n;
      bool nyquist = even && k == m;
      double w = nyquist ? 1.0 : 2.0;
      acc += w * (re[k] * std::cos(theta) - im[k] * std::sin(theta));
    }
    x[t] = acc / std::sqrt(static_cast<double>(n)) * inv_sigma;
  }
  return x;
}

namespace {

struct ActionMatrix {
  // [num_samples, horizon * act_dim]
  Tensor data;
  int horizon = 0;
  int act_dim = 0;
  double* seq(int64_t i) { return data.row_ptr(i); }
  const double* seq(int64_t i) const { return data.row_ptr(i); }
  double* at(int64_t i, int k) { return data.row_ptr(i) + k * act_dim; }
};

void clip_sequences(ActionMatrix* am, const ActionSpec& spec) {
  int64_t n = am->data.rows();
  for (int64_t i = 0; i < n; ++i) {
    double* p = am->seq(i);
    for (int k = 0; k < am->horizon; ++k) {
      for (int j = 0; j < am->act_dim; ++j) {
        double& v = p[k * am->act_dim + j];
        v = std::min(spec.high[j], std::max(spec.low[j], v));
      }
    }
  }
}

// Batched rollout of every candidate; returns terminal costs.
std::vector<double> rollout_costs(const ActionMatrix& am,
                                  const std::vector<double>& z0,
                                  const std::vector<double>& z_goal,
                                  LatentModel& model) {
  int64_t n = am.data.rows();
  int d = model.latent_dim();
  Tensor z({n, static_cast<int64_t>(d)});
  for (int64_t i = 0; i < n; ++i) set_tensor_row(&z, i, z0.data());
  Tensor a({n, static_cast<int64_t>(am.act_dim)});
  for (int k = 0; k < am.horizon; ++k) {
    for (int64_t i = 0; i < n; ++i) {
      std::copy(am.seq(i) + k * am.act_dim, am.seq(i) + (k + 1) * am.act_dim,
                a.row_ptr(i));
    }
    z = model.predict(z, a);
  }
  std::vector<double> costs(n);
  for (int64_t i = 0; i < n; ++i) {
    costs[i] = sqdist(z.row_ptr(i), z_goal.data(), d);
  }
  return costs;
}

// Indices of the k smallest costs; ties broken by sample index.
std::vector<int64_t> topk_indices(const std::vector<double>& costs, int k) {
  std::vector<int64_t> idx(costs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int64_t a, int64_t b) {
    return costs[a] < costs[b];
  });
  idx.resize(k);
  return idx;
}

constexpr double kVarFloor = 1e-6;

PlanResult plan_sampling(const std::vector<double>& z0,
                         const std::vector<double>& z_goal, LatentModel& model,
                         const ActionSpec& spec, const PlanConfig& pc,
                         const SolverConfig& sc, Rng& rng) {
  const int h = pc.horizon;
  const int ad = spec.dim;
  const int64_t len = static_cast<int64_t>(h) * ad;
  const int n = sc.num_samples;
  LPB_CHECK_MSG(sc.topk >= 1 && sc.topk <= n, "topk must be within num_samples");
  std::vector<double> mean(len, 0.0);
  std::vector<double> var(len, sc.var_scale);
  int64_t start_calls = model.calls();
  PlanResult result;
  int n_keep = 0;
  if (sc.kind == SolverKind::kIcem) {
    n_keep = std::min<int>(sc.elite_keep,
                           static_cast<int>(sc.keep_fraction * n));
    n_keep = std::max(0, std::min(n_keep, n - 1));
  }
  ActionMatrix elites{Tensor({std::max(1, sc.topk), len}), h, ad};
  int have_elites = 0;
  for (int iter = 0; iter < sc.n_steps; ++iter) {
    ActionMatrix cand{Tensor({static_cast<int64_t>(n), len}), h, ad};
    int fresh_begin = 0;
    if (sc.kind == SolverKind::kIcem && have_elites > 0) {
      int reuse = std::min(n_keep, have_elites);
      for (int i = 0; i < reuse; ++i) {
        std::copy(elites.seq(i), elites.seq(i) + len, cand.seq(i));
      }
      fresh_begin = reuse;
    }
    for (int64_t i = fresh_begin; i < n; ++i) {
      double* p = cand.seq(i);
      if (sc.kind == SolverKind::kIcem) {
        // Temporally correlated perturbations per action dimension.
        for (int j = 0; j < ad; ++j) {
          std::vector<double> noise = colored_noise(sc.noise_beta, h, rng);
          for (int k = 0; k < h; ++k) {
            int64_t o = static_cast<int64_t>(k) * ad + j;
            p[o] = mean[o] + std::sqrt(var[o]) * noise[k];
          }
        }
      } else {
        for (int64_t o = 0; o < len; ++o) {
          p[o] = mean[o] + std::sqrt(var[o]) * rng.gaussian();
        }
      }
    }
    clip_sequences(&cand, spec);
    std::vector<double> costs = rollout_costs(cand, z0, z_goal, model);
    result.cost.rollouts += n;
    if (sc.kind == SolverKind::kMppi) {
      double cmin = *std::min_element(costs.begin(), costs.end());
      if (!std::isfinite(cmin)) {
        throw NumericalError("all candidate costs non-finite in mppi");
      }
      double wsum = 0.0;
      std::vector<double> w(n);
      for (int i = 0; i < n; ++i) {
        w[i] = std::exp(-(costs[i] - cmin) / sc.temperature);
        wsum += w[i];
      }
      std::fill(mean.begin(), mean.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        double wi = w[i] / wsum;
        const double* p = cand.seq(i);
        for (int64_t o = 0; o < len; ++o) mean[o] += wi * p[o];
      }
      if (iter + 1 == sc.n_steps) {
        result.mppi_weights.resize(n);
        for (int i = 0; i < n; ++i) result.mppi_weights[i] = w[i] / wsum;
      }
      result.iteration_best.push_back(cmin);
    } else {
      std::vector<int64_t> elite = topk_indices(costs, sc.topk);
      std::fill(mean.begin(), mean.end(), 0.0);
      for (int64_t e : elite) {
        const double* p = cand.seq(e);
        for (int64_t o = 0; o < len; ++o) mean[o] += p[o];
      }
      for (int64_t o = 0; o < len; ++o) mean[o] /= sc.topk;
      std::fill(var.begin(), var.end(), 0.0);
      for (int64_t e : elite) {
        const double* p = cand.seq(e);
        for (int64_t o = 0; o < len; ++o) {
          double c = p[o] - mean[o];
          var[o] += c * c;
        }
      }
      for (int64_t o = 0; o < len; ++o) {
        var[o] = std::max(var[o] / sc.topk, kVarFloor);
      }
      for (int i = 0; i < sc.topk; ++i) {
        std::copy(cand.seq(elite[i]), cand.seq(elite[i]) + len, elites.seq(i));
      }
      have_elites = sc.topk;
      result.iteration_best.push_back(costs[elite[0]]);
    }
  }
  result.actions = Tensor({static_cast<int64_t>(h), static_cast<int64_t>(ad)});
  std::copy(mean.begin(), mean.end(), result.actions.data.begin());
  result.best_cost = result.iteration_best.back();
  result.cost.predictor_calls = model.calls() - start_calls;
  return result;
}

PlanResult plan_gradient(const std::vector<double>& z0,
                         const std::vector<double>& z_goal, LatentModel& model,
                         const ActionSpec& spec, const PlanConfig& pc,
                         const SolverConfig& sc, Rng& rng) {
  const int h = pc.horizon;
  const int ad = spec.dim;
  const int64_t len = static_cast<int64_t>(h) * ad;
  const int n = sc.num_samples;
  const int d = model.latent_dim();
  int64_t start_calls = model.calls();
  ActionMatrix cand{Tensor({static_cast<int64_t>(n), len}), h, ad};
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t o = 0; o < len; ++o) {
      cand.seq(i)[o] = std::sqrt(sc.var_scale) * rng.gaussian();
    }
  }
  clip_sequences(&cand, spec);
  PlanResult result;
  std::vector<bool> alive(n, true);
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> best_seq(len, 0.0);
  std::copy(cand.seq(0), cand.seq(0) + len, best_seq.begin());
  for (int step = 0; step < sc.n_steps; ++step) {
    // Forward with caches.
    Tensor z({static_cast<int64_t>(n), static_cast<int64_t>(d)});
    for (int64_t i = 0; i < n; ++i) set_tensor_row(&z, i, z0.data());
    std::vector<std::any> caches(h);
    Tensor a({static_cast<int64_t>(n), static_cast<int64_t>(ad)});
    for (int k = 0; k < h; ++k) {
      for (int64_t i = 0; i < n; ++i) {
        std::copy(cand.seq(i) + k * ad, cand.seq(i) + (k + 1) * ad,
                  a.row_ptr(i));
      }
      z = model.predict_cached(z, a, &caches[k]);
    }
    result.cost.rollouts += n;
    double iter_best = std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < n; ++i) {
      double c = sqdist(z.row_ptr(i), z_goal.data(), d);
      iter_best = std::min(iter_best, c);
      if (alive[i] && std::isfinite(c) && c < best_cost) {
        best_cost = c;
        std::copy(cand.seq(i), cand.seq(i) + len, best_seq.begin());
      }
    }
    result.iteration_best.push_back(iter_best);
    // Reverse pass: half-squared terminal cost, so lr = 1 is the exact
    // one-step solve on an integrator latent.
    Tensor dz({static_cast<int64_t>(n), static_cast<int64_t>(d)});
    for (int64_t i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        dz.at(i, j) = z.at(i, j) - z_goal[j];
      }
    }
    for (int k = h - 1; k >= 0; --k) {
      Tensor dz_prev, da;
      model.predict_grads(caches[k], dz, &dz_prev, &da);
      for (int64_t i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        bool finite = true;
        for (int j = 0; j < ad; ++j) {
          if (!std::isfinite(da.at(i, j))) finite = false;
        }
        if (!finite) {
          alive[i] = false;  // drop this candidate, keep the others
          continue;
        }
        double* p = cand.seq(i) + k * ad;
        for (int j = 0; j < ad; ++j) {
          p[j] -= sc.lr * da.at(i, j);
          p[j] = std::min(spec.high[j], std::max(spec.low[j], p[j]));
        }
      }
      dz = std::move(dz_prev);
    }
  }
  result.actions = Tensor({static_cast<int64_t>(h), static_cast<int64_t>(ad)});
  std::copy(best_seq.begin(), best_seq.end(), result.actions.data.begin());
  result.best_cost = best_cost;
  result.cost.predictor_calls = model.calls() - start_calls;
  return result;
}

}  // namespace

PlanResult plan(const std::vector<double>& z0, const std::vector<double>& z_goal,
                LatentModel& model, const ActionSpec& spec,
                const PlanConfig& pc, const SolverConfig& sc, Rng& rng) {
  LPB_CHECK_MSG(static_cast<int>(z0.size()) == model.latent_dim() &&
                    z0.size() == z_goal.size(),
                "latent dimension mismatch in plan()");
  LPB_CHECK(pc.horizon >= 1 && sc.num_samples >= 1 && sc.n_steps >= 1);
  LPB_CHECK(sc.temperature > 0.0 && sc.lr >= 0.0);
  if (sc.kind == SolverKind::kGradient) {
    return plan_gradient(z0, z_goal, model, spec, pc, sc, rng);
  }
  return plan_sampling(z0, z_goal, model, spec, pc, sc, rng);
}

}  // namespace lpb
