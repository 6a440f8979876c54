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

#include "lpb/pairwise_idm.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lpb/adamw.h"
#include "lpb/check.h"
#include "lpb/checkpoint.h"

namespace lpb {

PairwiseIdm::PairwiseIdm(const PairwiseConfig& cfg, Rng init_rng)
    : cfg_(cfg), ps_(std::make_unique<ParamSet>()) {
  LPB_CHECK(cfg.d > 0 && cfg.act_dim > 0 && cfg.frameskip >= 1);
  Rng net_rng = init_rng.stream("net");
  MlpConfig mc{2 * cfg.d, cfg.hidden, cfg.act_dim * cfg.frameskip, cfg.layers,
               /*layer_norm=*/true, cfg.dropout, /*has_head=*/true,
               /*head_init_sigma=*/0.01};
  net_ = Mlp(ps_.get(), "net", mc, &net_rng);
}

PairwiseIdm PairwiseIdm::load(const std::string& path) {
  LoadedCheckpoint ckpt = load_checkpoint(path);
  if (ckpt.kind != "pairwise_idm") {
    throw MissingArtifact("expected a pairwise_idm checkpoint: " + path);
  }
  PairwiseIdm m;
  m.cfg_.d = ckpt.meta.at("d").get<int>();
  m.cfg_.act_dim = ckpt.meta.at("act_dim").get<int>();
  m.cfg_.hidden = ckpt.meta.at("hidden").get<int>();
  m.cfg_.layers = ckpt.meta.at("layers").get<int>();
  m.cfg_.dropout = ckpt.meta.at("dropout").get<double>();
  m.cfg_.train_sigma = ckpt.meta.at("sigma").get<double>();
  m.cfg_.frameskip = ckpt.meta.value("frameskip", 1);
  m.ps_ = std::make_unique<ParamSet>(std::move(ckpt.params));
  MlpConfig mc{2 * m.cfg_.d, m.cfg_.hidden, m.cfg_.act_dim * m.cfg_.frameskip,
               m.cfg_.layers, true, m.cfg_.dropout, true, 0.01};
  m.net_ = Mlp(m.ps_.get(), "net", mc, nullptr);
  return m;
}

void PairwiseIdm::save(const std::string& path) const {
  nlohmann::json meta = {
      {"d", cfg_.d},         {"act_dim", cfg_.act_dim},
      {"hidden", cfg_.hidden}, {"layers", cfg_.layers},
      {"dropout", cfg_.dropout}, {"sigma", cfg_.train_sigma},
      {"frameskip", cfg_.frameskip},
  };
  save_checkpoint(path, *ps_, "pairwise_idm", meta);
}

std::vector<double> PairwiseIdm::act(const std::vector<double>& z,
                                     const std::vector<double>& z_next) const {
  Tensor a = Tensor::row(z);
  Tensor b = Tensor::row(z_next);
  return tensor_row(forward_batch(a, b), 0);
}

Tensor PairwiseIdm::forward_batch(const Tensor& z, const Tensor& z_next,
                                  bool train, Rng* dropout_rng,
                                  Mlp::Cache* cache) const {
  LPB_CHECK_MSG(z.cols() == cfg_.d && z_next.cols() == cfg_.d &&
                    z.rows() == z_next.rows(),
                "pairwise input shape mismatch");
  return net_.forward(concat_cols(z, z_next), train, dropout_rng, cache);
}

void PairwiseIdm::backward(const Mlp::Cache& cache, const Tensor& dy) const {
  net_.backward(cache, dy);
}

PairwiseIdm train_pairwise(const DemoDataset& ds, const WorldModel& wm,
                           PairwiseConfig cfg, Rng rng,
                           std::vector<TrainCurveRow>* curve) {
  LPB_CHECK_MSG(!ds.episodes.empty(), "empty dataset");
  cfg.d = wm.config().d;
  cfg.act_dim = ds.act_dim;
  uint64_t frozen = wm.checksum();
  PairwiseIdm model(cfg, rng.stream("init"));
  // Frozen latents.
  std::vector<Tensor> latents;
  latents.reserve(ds.episodes.size());
  std::vector<std::pair<int, int>> pairs;
  for (size_t e = 0; e < ds.episodes.size(); ++e) {
    const Episode& ep = ds.episodes[e];
    Tensor x({static_cast<int64_t>(ep.steps + 1),
              static_cast<int64_t>(ds.obs_dim)});
    for (int t = 0; t <= ep.steps; ++t) set_tensor_row(&x, t, ep.obs_at(t, ds.obs_dim));
    latents.push_back(wm.encode_batch(x));
    for (int t = 0; t + cfg.frameskip <= ep.steps; ++t) {
      pairs.emplace_back(static_cast<int>(e), t);
    }
  }
  int64_t n = static_cast<int64_t>(pairs.size());
  LPB_CHECK_MSG(n >= 1, "not enough transitions");
  int64_t batch = std::min<int64_t>(cfg.batch, n);
  int64_t steps_per_epoch = std::max<int64_t>(1, n / batch);
  int64_t total_steps = steps_per_epoch * cfg.epochs;
  OptimState opt = make_optim_state(model.params(),
                                    {cfg.lr, cfg.lr / 100.0, total_steps},
                                    cfg.weight_decay, cfg.clip_norm);
  Rng shuffle_rng = rng.stream("shuffle");
  Rng noise_rng = rng.stream("noise");
  Rng dropout_rng = rng.stream("dropout");
  std::vector<int64_t> order(n);
  for (int64_t i = 0; i < n; ++i) order[i] = i;
  int out_dim = cfg.act_dim * cfg.frameskip;
  int64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng er = shuffle_rng.split(epoch);
    for (int64_t i = n - 1; i > 0; --i) {
      int64_t j = er.uniform_int(i + 1);
      std::swap(order[i], order[j]);
    }
    for (int64_t b = 0; b < steps_per_epoch; ++b) {
      Tensor z({batch, static_cast<int64_t>(cfg.d)});
      Tensor zn({batch, static_cast<int64_t>(cfg.d)});
      Tensor target({batch, static_cast<int64_t>(out_dim)});
      for (int64_t r = 0; r < batch; ++r) {
        auto [e, t] = pairs[order[b * batch + r]];
        set_tensor_row(&z, r, latents[e].row_ptr(t));
        set_tensor_row(&zn, r, latents[e].row_ptr(t + cfg.frameskip));
        for (int k = 0; k < cfg.frameskip; ++k) {
          const double* a = ds.episodes[e].act_at(t + k, cfg.act_dim);
          std::copy(a, a + cfg.act_dim,
                    target.row_ptr(r) + k * cfg.act_dim);
        }
      }
      if (cfg.train_sigma > 0.0) {
        for (double& v : z.data) v += cfg.train_sigma * noise_rng.gaussian();
        for (double& v : zn.data) v += cfg.train_sigma * noise_rng.gaussian();
      }
      Mlp::Cache cache;
      Tensor pred = model.forward_batch(z, zn, true, &dropout_rng, &cache);
      double mse = 0.0;
      Tensor dy({batch, static_cast<int64_t>(out_dim)});
      for (int64_t r = 0; r < batch; ++r) {
        for (int j = 0; j < out_dim; ++j) {
          double diff = pred.at(r, j) - target.at(r, j);
          mse += diff * diff;
          dy.at(r, j) = 2.0 * diff / static_cast<double>(batch);
        }
      }
      mse /= static_cast<double>(batch);
      if (!std::isfinite(mse)) {
        throw NumericalError("pairwise loss diverged at step " +
                             std::to_string(step));
      }
      model.params().zero_grads();
      model.backward(cache, dy);
      double lr = adamw_step(&model.params(), &opt);
      if (curve) curve->push_back({step, mse, cfg.train_sigma, lr});
      ++step;
    }
  }
  LPB_CHECK_MSG(wm.checksum() == frozen,
                "world model was mutated during pairwise training");
  return model;
}

OracleMetrics oracle_eval(const PairwiseIdm& model, const DemoDataset& ds,
                          const WorldModel& wm, double test_sigma, Rng rng) {
  const PairwiseConfig& cfg = model.config();
  Rng noise = rng.stream("oracle_noise");
  std::vector<double> preds, targets;
  int64_t n_rows = 0;
  double mse = 0.0, cos_sum = 0.0;
  int out_dim = cfg.act_dim * cfg.frameskip;
  std::vector<double> sse(out_dim, 0.0), sum(out_dim, 0.0), sumsq(out_dim, 0.0);
  std::vector<std::vector<double>> all_pred, all_tgt;
  for (const Episode& ep : ds.episodes) {
    if (ep.steps < cfg.frameskip) continue;
    int rows = ep.steps - cfg.frameskip + 1;
    Tensor x({static_cast<int64_t>(ep.steps + 1), static_cast<int64_t>(ds.obs_dim)});
    for (int t = 0; t <= ep.steps; ++t) set_tensor_row(&x, t, ep.obs_at(t, ds.obs_dim));
    Tensor lat = wm.encode_batch(x);
    Tensor z({static_cast<int64_t>(rows), static_cast<int64_t>(cfg.d)});
    Tensor zn({static_cast<int64_t>(rows), static_cast<int64_t>(cfg.d)});
    for (int t = 0; t < rows; ++t) {
      set_tensor_row(&z, t, lat.row_ptr(t));
      set_tensor_row(&zn, t, lat.row_ptr(t + cfg.frameskip));
    }
    if (test_sigma > 0.0) {
      for (double& v : z.data) v += test_sigma * noise.gaussian();
      for (double& v : zn.data) v += test_sigma * noise.gaussian();
    }
    Tensor pred = model.forward_batch(z, zn);
    for (int t = 0; t < rows; ++t) {
      std::vector<double> tgt(out_dim);
      for (int k = 0; k < cfg.frameskip; ++k) {
        const double* a = ep.act_at(t + k, cfg.act_dim);
        std::copy(a, a + cfg.act_dim, tgt.data() + k * cfg.act_dim);
      }
      const double* p = pred.row_ptr(t);
      double dot = 0.0, np = 0.0, nt = 0.0;
      for (int j = 0; j < out_dim; ++j) {
        double diff = p[j] - tgt[j];
        mse += diff * diff;
        sse[j] += diff * diff;
        sum[j] += tgt[j];
        sumsq[j] += tgt[j] * tgt[j];
        dot += p[j] * tgt[j];
        np += p[j] * p[j];
        nt += tgt[j] * tgt[j];
      }
      cos_sum += (np > 1e-24 && nt > 1e-24) ? dot / std::sqrt(np * nt) : 1.0;
      ++n_rows;
    }
  }
  OracleMetrics m;
  if (n_rows == 0) return m;
  m.mse = mse / (static_cast<double>(n_rows) * out_dim);
  m.cosine_sim = cos_sum / n_rows;
  double r2_acc = 0.0;
  for (int j = 0; j < out_dim; ++j) {
    double mean = sum[j] / n_rows;
    double sst = sumsq[j] - n_rows * mean * mean;
    r2_acc += sst > 1e-24 ? 1.0 - sse[j] / sst : 1.0;
  }
  m.r2 = r2_acc / out_dim;
  return m;
}

std::vector<std::vector<double>> lerp_plan(const std::vector<double>& z_start,
                                           const std::vector<double>& z_goal,
                                           int H) {
  LPB_CHECK_MSG(H >= 1, "lerp needs H >= 1");
  LPB_CHECK(z_start.size() == z_goal.size());
  std::vector<std::vector<double>> path(H + 1);
  for (int i = 0; i <= H; ++i) {
    double alpha = static_cast<double>(i) / H;
    path[i].resize(z_start.size());
    for (size_t j = 0; j < z_start.size(); ++j) {
      path[i][j] = i == 0   ? z_start[j]
                   : i == H ? z_goal[j]
                            : (1.0 - alpha) * z_start[j] + alpha * z_goal[j];
    }
  }
  return path;
}

namespace {

std::vector<std::vector<double>> decode_actions(
    const std::vector<std::vector<double>>& path, const PairwiseIdm& model,
    const ActionSpec& spec, int64_t* idm_forwards) {
  int H = static_cast<int>(path.size()) - 1;
  std::vector<std::vector<double>> actions(H);
  for (int i = 0; i < H; ++i) {
    actions[i] = model.act(path[i], path[i + 1]);
    ++*idm_forwards;
    for (int j = 0; j < spec.dim; ++j) {
      actions[i][j] = std::min(spec.high[j], std::max(spec.low[j], actions[i][j]));
    }
  }
  return actions;
}

// Rollout through the predictor anchored at path[0]; returns the visited
// latents (H+1 points) and adds H predictor calls.
std::vector<std::vector<double>> rollout_path(
    const std::vector<double>& z_start,
    const std::vector<std::vector<double>>& actions, const WorldModel& wm,
    int64_t* calls) {
  std::vector<std::vector<double>> out;
  out.reserve(actions.size() + 1);
  out.push_back(z_start);
  Tensor z = Tensor::row(z_start);
  for (const auto& a : actions) {
    z = wm.predict_batch(z, Tensor::row(a));
    out.push_back(tensor_row(z, 0));
  }
  *calls += static_cast<int64_t>(actions.size());
  return out;
}

}  // namespace

RefineResult refine_path(const std::vector<std::vector<double>>& path,
                         const std::vector<double>& z_goal,
                         const PairwiseIdm& model, const WorldModel& wm,
                         const ActionSpec& spec, int refine_rounds,
                         int n_candidates, double perturb_sigma, Rng& rng) {
  LPB_CHECK(refine_rounds >= 0 && n_candidates >= 1 && path.size() >= 2);
  RefineResult best;
  best.score = std::numeric_limits<double>::infinity();
  int64_t predictor_calls = 0;
  int64_t idm_forwards = 0;
  bool any_scored = false;
  for (int c = 0; c < n_candidates; ++c) {
    std::vector<std::vector<double>> p = path;
    if (c > 0) {
      // Interior-point perturbations only; endpoints stay anchored.
      for (size_t i = 1; i + 1 < p.size(); ++i) {
        for (double& v : p[i]) v += perturb_sigma * rng.gaussian();
      }
    }
    std::vector<std::vector<double>> actions =
        decode_actions(p, model, spec, &idm_forwards);
    if (refine_rounds == 0 && n_candidates == 1) {
      best.actions = actions;  // unscored fast path, zero predictor calls
      break;
    }
    // Each rollout both scores the current decoding and, when another round
    // follows, supplies the corrected path to re-decode from. K rounds cost
    // exactly K * H predictor calls per candidate (one when K = 0 and the
    // selection needs a score).
    int rounds = std::max(refine_rounds, 1);
    for (int k = 0; k < rounds; ++k) {
      std::vector<std::vector<double>> rolled =
          rollout_path(path[0], actions, wm, &predictor_calls);
      double score = sqdist(rolled.back().data(), z_goal.data(),
                            static_cast<int64_t>(z_goal.size()));
      if (score < best.score) {
        best.score = score;
        best.actions = actions;
      }
      any_scored = true;
      if (k + 1 < rounds) {
        actions = decode_actions(rolled, model, spec, &idm_forwards);
      }
    }
  }
  if (!any_scored) best.score = -1.0;
  best.predictor_calls = predictor_calls;
  best.idm_forwards = idm_forwards;
  return best;
}

EpisodeRecord pairwise_episode(const GoalTask& task, const PairwiseIdm& model,
                               const WorldModel& wm, int refine_rounds,
                               int n_candidates, double perturb_sigma,
                               Rng rng) {
  EpisodeRecord rec;
  rec.env = env_name(task.env);
  rec.task_episode = task.episode_index;
  rec.task_t = task.t_index;
  rec.task_offset = task.goal_offset_steps;
  rec.task_budget = task.budget;
  const ActionSpec& spec = action_spec(task.env);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> z_start = wm.encode(task.start_obs);
  std::vector<double> z_goal = wm.encode(task.goal_obs);
  auto path = lerp_plan(z_start, z_goal, task.budget);
  RefineResult plan = refine_path(path, z_goal, model, wm, spec, refine_rounds,
                                  n_candidates, perturb_sigma, rng);
  rec.plan_calls = 1;
  rec.predictor_calls = plan.predictor_calls;
  rec.model_forwards = plan.idm_forwards;
  rec.wall_ms_per_plan_call.push_back(
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - t0)
          .count());
  // Open-loop execution of the decoded sequence.
  EnvState state = state_from_obs(task.env, task.start_obs);
  std::vector<double> obs = task.start_obs;
  {
    std::vector<double> z = wm.encode(obs);
    rec.latent_goal_distances.push_back(
        std::sqrt(sqdist(z.data(), z_goal.data(), z.size())));
  }
  rec.success = env_success(obs, task.goal_obs, task.env);
  for (size_t i = 0; i < plan.actions.size() && !rec.success &&
                     rec.steps_taken < task.budget;
       ++i) {
    state = env_step(state, plan.actions[i].data());
    obs = state.v;
    ++rec.steps_taken;
    rec.raw_actions.push_back(plan.actions[i]);
    std::vector<double> z = wm.encode(obs);
    rec.latent_goal_distances.push_back(
        std::sqrt(sqdist(z.data(), z_goal.data(), z.size())));
    rec.success = env_success(obs, task.goal_obs, task.env);
  }
  rec.wall_ms_total = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return rec;
}

}  // namespace lpb
