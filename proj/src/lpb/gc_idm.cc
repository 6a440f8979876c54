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

#include "lpb/gc_idm.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "lpb/adamw.h"
#include "lpb/check.h"
#include "lpb/checkpoint.h"

namespace lpb {

double normalize_horizon(int steps_remaining, int H_max) {
  LPB_CHECK_MSG(steps_remaining >= 1, "steps_remaining must be >= 1");
  LPB_CHECK(H_max >= 1);
  return static_cast<double>(std::min(steps_remaining, H_max)) /
         static_cast<double>(H_max);
}

GcIdm::GcIdm(const GcIdmConfig& cfg, Rng init_rng)
    : cfg_(cfg), ps_(std::make_unique<ParamSet>()) {
  LPB_CHECK(cfg.d > 0 && cfg.act_dim > 0 && cfg.H_max >= 1);
  Rng bb_rng = init_rng.stream("backbone");
  Rng hz_rng = init_rng.stream("horizon");
  Rng head_rng = init_rng.stream("head");
  MlpConfig bb{2 * cfg.d, cfg.hidden, 0, cfg.layers, /*layer_norm=*/true,
               cfg.dropout, /*has_head=*/false};
  backbone_ = Mlp(ps_.get(), "bb", bb, &bb_rng);
  MlpConfig hz{cfg.horizon_dim, cfg.horizon_hidden, cfg.horizon_hidden, 1,
               /*layer_norm=*/false, /*dropout=*/0.0};
  horizon_mlp_ = Mlp(ps_.get(), "hz", hz, &hz_rng);
  // Modulation projections start at exactly zero so the horizon signal is
  // inert until training asks for it.
  wg_ = ps_->add("mod.gamma.w",
                 Tensor({static_cast<int64_t>(cfg.horizon_hidden),
                         static_cast<int64_t>(cfg.hidden)}));
  bg_ = ps_->add("mod.gamma.b", Tensor({static_cast<int64_t>(cfg.hidden)}));
  wb_ = ps_->add("mod.beta.w",
                 Tensor({static_cast<int64_t>(cfg.horizon_hidden),
                         static_cast<int64_t>(cfg.hidden)}));
  bb_ = ps_->add("mod.beta.b", Tensor({static_cast<int64_t>(cfg.hidden)}));
  head_w_ = ps_->add("head.w", small_init({cfg.hidden, cfg.act_dim}, 0.01,
                                          head_rng));
  head_b_ = ps_->add("head.b", Tensor({static_cast<int64_t>(cfg.act_dim)}));
}

GcIdm GcIdm::load(const std::string& path) {
  LoadedCheckpoint ckpt = load_checkpoint(path);
  if (ckpt.kind != "gc_idm") {
    throw MissingArtifact("expected a gc_idm checkpoint: " + path);
  }
  GcIdm m;
  m.cfg_.d = ckpt.meta.at("d").get<int>();
  m.cfg_.act_dim = ckpt.meta.at("act_dim").get<int>();
  m.cfg_.hidden = ckpt.meta.at("hidden").get<int>();
  m.cfg_.layers = ckpt.meta.at("layers").get<int>();
  m.cfg_.horizon_dim = ckpt.meta.at("horizon_dim").get<int>();
  m.cfg_.horizon_hidden = ckpt.meta.at("horizon_hidden").get<int>();
  m.cfg_.H_max = ckpt.meta.at("H_max").get<int>();
  m.cfg_.dropout = ckpt.meta.at("dropout").get<double>();
  m.cfg_.noise_sigma = ckpt.meta.at("sigma").get<double>();
  m.cfg_.noise_schedule = ckpt.meta.value("noise_schedule", "fixed");
  m.ps_ = std::make_unique<ParamSet>(std::move(ckpt.params));
  MlpConfig bb{2 * m.cfg_.d, m.cfg_.hidden, 0, m.cfg_.layers, true,
               m.cfg_.dropout, false};
  m.backbone_ = Mlp(m.ps_.get(), "bb", bb, nullptr);
  MlpConfig hz{m.cfg_.horizon_dim, m.cfg_.horizon_hidden, m.cfg_.horizon_hidden,
               1, false, 0.0};
  m.horizon_mlp_ = Mlp(m.ps_.get(), "hz", hz, nullptr);
  m.wg_ = m.ps_->index_of("mod.gamma.w");
  m.bg_ = m.ps_->index_of("mod.gamma.b");
  m.wb_ = m.ps_->index_of("mod.beta.w");
  m.bb_ = m.ps_->index_of("mod.beta.b");
  m.head_w_ = m.ps_->index_of("head.w");
  m.head_b_ = m.ps_->index_of("head.b");
  return m;
}

void GcIdm::save(const std::string& path) const {
  nlohmann::json meta = {
      {"d", cfg_.d},
      {"act_dim", cfg_.act_dim},
      {"hidden", cfg_.hidden},
      {"layers", cfg_.layers},
      {"horizon_dim", cfg_.horizon_dim},
      {"horizon_hidden", cfg_.horizon_hidden},
      {"H_max", cfg_.H_max},
      {"dropout", cfg_.dropout},
      {"sigma", cfg_.noise_sigma},
      {"noise_schedule", cfg_.noise_schedule},
  };
  save_checkpoint(path, *ps_, "gc_idm", meta);
}

Tensor GcIdm::forward_batch(const Tensor& z, const Tensor& z_goal,
                            const std::vector<int>& h_steps, bool train,
                            Rng* dropout_rng, Cache* cache) const {
  LPB_CHECK_MSG(z.cols() == cfg_.d && z_goal.cols() == cfg_.d &&
                    z.rows() == z_goal.rows() &&
                    static_cast<int64_t>(h_steps.size()) == z.rows(),
                "gc_idm input shape mismatch");
  std::vector<double> fracs(h_steps.size());
  for (size_t i = 0; i < h_steps.size(); ++i) {
    fracs[i] = normalize_horizon(h_steps[i], cfg_.H_max);
  }
  Tensor x = concat_cols(z, z_goal);
  Tensor henc = sinusoidal_encode_batch(fracs, cfg_.horizon_dim);
  Tensor hb = backbone_.forward(x, train, dropout_rng,
                                cache ? &cache->backbone : nullptr);
  Tensor emb = horizon_mlp_.forward(henc, false, nullptr,
                                    cache ? &cache->horizon : nullptr);
  Tensor mod = adaln_zero_forward(hb, emb, ps_->value(wg_), ps_->value(bg_),
                                  ps_->value(wb_), ps_->value(bb_),
                                  cache ? &cache->adaln : nullptr);
  if (cache) cache->head_in = mod;
  return linear_forward(mod, ps_->value(head_w_), ps_->value(head_b_));
}

std::vector<double> GcIdm::act(const std::vector<double>& z,
                               const std::vector<double>& z_goal,
                               int h_steps) const {
  Tensor zt = Tensor::row(z);
  Tensor zg = Tensor::row(z_goal);
  return tensor_row(forward_batch(zt, zg, {h_steps}), 0);
}

Tensor GcIdm::backward(const Cache& cache, const Tensor& dy) const {
  Tensor dmod;
  linear_backward(cache.head_in, ps_->value(head_w_), dy, &dmod,
                  &ps_->grad(head_w_), &ps_->grad(head_b_));
  Tensor dh, dc;
  adaln_zero_backward(cache.adaln, ps_->value(wg_), ps_->value(wb_), dmod, &dh,
                      &dc, &ps_->grad(wg_), &ps_->grad(bg_), &ps_->grad(wb_),
                      &ps_->grad(bb_));
  horizon_mlp_.backward(cache.horizon, dc);
  return backbone_.backward(cache.backbone, dh);
}

TripleSampler::TripleSampler(const DemoDataset& ds, int H_max)
    : H_max_(H_max) {
  LPB_CHECK_MSG(!ds.episodes.empty(), "empty dataset");
  totals_.assign(H_max, 0);
  cum_.assign(H_max, {});
  for (int h = 1; h <= H_max; ++h) {
    auto& cum = cum_[h - 1];
    cum.reserve(ds.episodes.size());
    int64_t total = 0;
    for (const Episode& e : ds.episodes) {
      int64_t count = std::max(0, e.steps - h + 1);
      total += count;
      cum.push_back(total);
    }
    totals_[h - 1] = total;
  }
  LPB_CHECK_MSG(totals_[0] > 0, "no (t, h) training pairs exist");
}

TripleSampler::Triple TripleSampler::sample(Rng& rng) const {
  // Uniform h first (the training distribution over horizons), then a
  // uniform valid (episode, t) for that h. Horizons with no valid positions
  // are resampled.
  int h = 0;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    h = 1 + static_cast<int>(rng.uniform_int(H_max_));
    if (totals_[h - 1] > 0) break;
    h = 0;
  }
  LPB_CHECK_MSG(h > 0, "could not sample a feasible horizon");
  int64_t pick = rng.uniform_int(totals_[h - 1]);
  const auto& cum = cum_[h - 1];
  int e = static_cast<int>(
      std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin());
  int64_t base = e == 0 ? 0 : cum[e - 1];
  int t = static_cast<int>(pick - base);
  return {e, t, h};
}

namespace {

// Frozen per-episode latents for fast batch assembly.
std::vector<Tensor> encode_all(const DemoDataset& ds, const WorldModel& wm) {
  std::vector<Tensor> latents;
  latents.reserve(ds.episodes.size());
  for (const Episode& e : ds.episodes) {
    Tensor x({static_cast<int64_t>(e.steps + 1),
              static_cast<int64_t>(ds.obs_dim)});
    for (int t = 0; t <= e.steps; ++t) {
      set_tensor_row(&x, t, e.obs_at(t, ds.obs_dim));
    }
    latents.push_back(wm.encode_batch(x));
  }
  return latents;
}

}  // namespace

GcIdm train_gc_idm(const DemoDataset& ds, const WorldModel& wm,
                   GcIdmConfig cfg, Rng rng, std::vector<TrainCurveRow>* curve) {
  LPB_CHECK_MSG(!ds.episodes.empty(), "empty dataset");
  LPB_CHECK_MSG(cfg.noise_schedule == "fixed" || cfg.noise_schedule == "uniform",
                "unknown noise schedule");
  cfg.d = wm.config().d;
  cfg.act_dim = ds.act_dim;
  uint64_t frozen = wm.checksum();
  GcIdm model(cfg, rng.stream("init"));
  std::vector<Tensor> latents = encode_all(ds, wm);
  TripleSampler sampler(ds, cfg.H_max);
  int64_t n = ds.total_steps();
  int64_t batch = std::min<int64_t>(cfg.batch, std::max<int64_t>(n, 2));
  int64_t steps_per_epoch = std::max<int64_t>(1, n / batch);
  int64_t total_steps = steps_per_epoch * cfg.epochs;
  OptimState opt = make_optim_state(model.params(),
                                    {cfg.lr, cfg.lr / 100.0, total_steps},
                                    cfg.weight_decay, cfg.clip_norm);
  Rng sample_rng = rng.stream("triples");
  Rng noise_rng = rng.stream("noise");
  Rng dropout_rng = rng.stream("dropout");
  int64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int64_t b = 0; b < steps_per_epoch; ++b) {
      Tensor z({batch, static_cast<int64_t>(cfg.d)});
      Tensor zg({batch, static_cast<int64_t>(cfg.d)});
      Tensor target({batch, static_cast<int64_t>(cfg.act_dim)});
      std::vector<int> hs(batch);
      for (int64_t r = 0; r < batch; ++r) {
        TripleSampler::Triple tr = sampler.sample(sample_rng);
        set_tensor_row(&z, r, latents[tr.episode].row_ptr(tr.t));
        set_tensor_row(&zg, r, latents[tr.episode].row_ptr(tr.t + tr.h));
        set_tensor_row(&target, r, ds.episodes[tr.episode].act_at(tr.t, cfg.act_dim));
        hs[r] = tr.h;
      }
      double sigma = cfg.noise_sigma;
      if (cfg.noise_schedule == "uniform" && cfg.noise_sigma > 0.0) {
        sigma = noise_rng.uniform(0.0, cfg.noise_sigma);
      }
      if (sigma > 0.0) {
        for (double& v : z.data) v += sigma * noise_rng.gaussian();
        for (double& v : zg.data) v += sigma * noise_rng.gaussian();
      }
      GcIdm::Cache cache;
      Tensor pred = model.forward_batch(z, zg, hs, /*train=*/true,
                                        &dropout_rng, &cache);
      double mse = 0.0;
      Tensor dy({batch, static_cast<int64_t>(cfg.act_dim)});
      for (int64_t r = 0; r < batch; ++r) {
        for (int j = 0; j < cfg.act_dim; ++j) {
          double diff = pred.at(r, j) - target.at(r, j);
          mse += diff * diff;
          dy.at(r, j) = 2.0 * diff / static_cast<double>(batch);
        }
      }
      mse /= static_cast<double>(batch);
      if (!std::isfinite(mse)) {
        throw NumericalError("gc_idm loss diverged at step " +
                             std::to_string(step));
      }
      model.params().zero_grads();
      model.backward(cache, dy);
      double lr = adamw_step(&model.params(), &opt);
      if (curve) curve->push_back({step, mse, sigma, lr});
      ++step;
    }
  }
  LPB_CHECK_MSG(wm.checksum() == frozen,
                "world model was mutated during gc_idm training");
  return model;
}

EpisodeRecord closed_loop_control(const GoalTask& task, const WorldModel& wm,
                                  const GcIdm& model) {
  LPB_CHECK_MSG(task.budget >= 1, "budget must be positive");
  EpisodeRecord rec;
  rec.env = env_name(task.env);
  rec.task_episode = task.episode_index;
  rec.task_t = task.t_index;
  rec.task_offset = task.goal_offset_steps;
  rec.task_budget = task.budget;
  const ActionSpec& spec = action_spec(task.env);
  auto episode_t0 = std::chrono::steady_clock::now();
  // The goal embedding is encoded once and cached for the whole episode.
  std::vector<double> z_goal = wm.encode(task.goal_obs);
  EnvState state = state_from_obs(task.env, task.start_obs);
  std::vector<double> obs = task.start_obs;
  {
    std::vector<double> z0 = wm.encode(obs);
    rec.latent_goal_distances.push_back(
        std::sqrt(sqdist(z0.data(), z_goal.data(), z0.size())));
  }
  rec.success = env_success(obs, task.goal_obs, task.env);
  const int T = task.budget;
  for (int t = 1; t <= T && !rec.success; ++t) {
    auto step_t0 = std::chrono::steady_clock::now();
    std::vector<double> z = wm.encode(obs);  // one re-encoding per step
    int h = T - t + 1;
    std::vector<double> a = model.act(z, z_goal, h);
    rec.wall_ms_per_plan_call.push_back(
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - step_t0)
            .count());
    ++rec.plan_calls;
    ++rec.model_forwards;
    for (int j = 0; j < spec.dim; ++j) {
      a[j] = std::min(spec.high[j], std::max(spec.low[j], a[j]));
    }
    state = env_step(state, a.data());
    obs = state.v;
    ++rec.steps_taken;
    rec.raw_actions.push_back(a);
    std::vector<double> zt = wm.encode(obs);
    rec.latent_goal_distances.push_back(
        std::sqrt(sqdist(zt.data(), z_goal.data(), zt.size())));
    rec.success = env_success(obs, task.goal_obs, task.env);
  }
  rec.predictor_calls = 0;
  rec.wall_ms_total = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - episode_t0)
                          .count();
  return rec;
}

}  // namespace lpb
