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

#include "lpb/world_model.h"

#include <algorithm>
#include <cmath>

#include "lpb/adamw.h"
#include "lpb/check.h"
#include "lpb/checkpoint.h"
#include "lpb/kernels.h"
#include "lpb/smallalg.h"

namespace lpb {

std::atomic<int64_t>& global_predictor_calls() {
  static std::atomic<int64_t> counter{0};
  return counter;
}

double sigreg(const Tensor& z) {
  LPB_CHECK_MSG(z.rows() >= 2, "isotropy penalty undefined for a batch of 1");
  std::vector<double> mean;
  Tensor cov;
  mean_and_covariance(z, &mean, &cov);
  double p = 0.0;
  for (double m : mean) p += m * m;
  for (int64_t i = 0; i < cov.rows(); ++i) {
    for (int64_t j = 0; j < cov.cols(); ++j) {
      double c = cov.at(i, j) - (i == j ? 1.0 : 0.0);
      p += c * c;
    }
  }
  return p;
}

Tensor sigreg_gradient(const Tensor& z) {
  LPB_CHECK_MSG(z.rows() >= 2, "isotropy penalty undefined for a batch of 1");
  int64_t n = z.rows(), d = z.cols();
  std::vector<double> mean;
  Tensor cov;
  mean_and_covariance(z, &mean, &cov);
  // d/dz_k [ ||mu||^2 ] = (2/n) mu
  // d/dz_k [ ||C-I||_F^2 ] = (4/n) (C-I)(z_k - mu)
  Tensor cmi = cov;
  for (int64_t i = 0; i < d; ++i) cmi.at(i, i) -= 1.0;
  Tensor grad({n, d});
  std::vector<double> centered(d);
  for (int64_t k = 0; k < n; ++k) {
    for (int64_t j = 0; j < d; ++j) centered[j] = z.at(k, j) - mean[j];
    double* g = grad.row_ptr(k);
    for (int64_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (int64_t j = 0; j < d; ++j) s += cmi.at(i, j) * centered[j];
      g[i] = (2.0 / n) * mean[i] + (4.0 / n) * s;
    }
  }
  return grad;
}

int feature_dim(const WorldModelConfig& cfg) {
  return cfg.obs_dim * (1 + 2 * cfg.feat_freqs);
}

void featurize_obs(const WorldModelConfig& cfg, const double* obs,
                   double* out) {
  int k = 0;
  for (int i = 0; i < cfg.obs_dim; ++i) {
    double lo = cfg.obs_lo.empty() ? 0.0 : cfg.obs_lo[i];
    double hi = cfg.obs_hi.empty() ? 1.0 : cfg.obs_hi[i];
    double u = (obs[i] - lo) / std::max(hi - lo, 1e-9);
    out[k++] = u;
    for (int f = 0; f < cfg.feat_freqs; ++f) {
      double w = M_PI * static_cast<double>(1 << f) * u;
      out[k++] = std::sin(w);
      out[k++] = std::cos(w);
    }
  }
}

WorldModel::WorldModel(const WorldModelConfig& cfg, Rng init_rng)
    : cfg_(cfg), ps_(std::make_unique<ParamSet>()) {
  LPB_CHECK(cfg.obs_dim > 0 && cfg.act_dim > 0 && cfg.d > 0);
  // lambda = 0 is allowed only as the collapse-ablation mode.
  LPB_CHECK_MSG(cfg.lambda >= 0.0, "regularizer weight must be non-negative");
  LPB_CHECK(cfg.obs_lo.empty() ||
            static_cast<int>(cfg.obs_lo.size()) == cfg.obs_dim);
  Rng enc_rng = init_rng.stream("enc");
  Rng pred_rng = init_rng.stream("pred");
  MlpConfig ec{feature_dim(cfg_), cfg.hidden, cfg.d, cfg.hidden_layers,
               /*layer_norm=*/false, /*dropout=*/0.0};
  encoder_ = Mlp(ps_.get(), "enc", ec, &enc_rng);
  MlpConfig pc{cfg.d + cfg.act_dim, cfg.hidden, cfg.d, cfg.hidden_layers,
               /*layer_norm=*/false, /*dropout=*/0.0};
  predictor_ = Mlp(ps_.get(), "pred", pc, &pred_rng);
}

WorldModel WorldModel::load(const std::string& path) {
  LoadedCheckpoint ckpt = load_checkpoint(path);
  if (ckpt.kind != "world_model") {
    throw MissingArtifact("expected a world_model checkpoint: " + path);
  }
  WorldModel wm;
  wm.cfg_.d = ckpt.meta.at("d").get<int>();
  wm.cfg_.obs_dim = ckpt.meta.at("obs_dim").get<int>();
  wm.cfg_.act_dim = ckpt.meta.at("act_dim").get<int>();
  wm.cfg_.hidden = ckpt.meta.at("hidden").get<int>();
  wm.cfg_.hidden_layers = ckpt.meta.at("hidden_layers").get<int>();
  wm.cfg_.lambda = ckpt.meta.at("lambda").get<double>();
  wm.cfg_.frameskip = ckpt.meta.at("frameskip").get<int>();
  wm.cfg_.feat_freqs = ckpt.meta.at("feat_freqs").get<int>();
  wm.cfg_.obs_lo = ckpt.meta.at("obs_lo").get<std::vector<double>>();
  wm.cfg_.obs_hi = ckpt.meta.at("obs_hi").get<std::vector<double>>();
  wm.ps_ = std::make_unique<ParamSet>(std::move(ckpt.params));
  MlpConfig ec{feature_dim(wm.cfg_), wm.cfg_.hidden, wm.cfg_.d,
               wm.cfg_.hidden_layers, false, 0.0};
  wm.encoder_ = Mlp(wm.ps_.get(), "enc", ec, nullptr);
  MlpConfig pc{wm.cfg_.d + wm.cfg_.act_dim, wm.cfg_.hidden, wm.cfg_.d,
               wm.cfg_.hidden_layers, false, 0.0};
  wm.predictor_ = Mlp(wm.ps_.get(), "pred", pc, nullptr);
  return wm;
}

void WorldModel::save(const std::string& path) const {
  nlohmann::json meta = {
      {"d", cfg_.d},           {"obs_dim", cfg_.obs_dim},
      {"act_dim", cfg_.act_dim}, {"hidden", cfg_.hidden},
      {"hidden_layers", cfg_.hidden_layers}, {"lambda", cfg_.lambda},
      {"frameskip", cfg_.frameskip}, {"feat_freqs", cfg_.feat_freqs},
      {"obs_lo", cfg_.obs_lo}, {"obs_hi", cfg_.obs_hi},
  };
  save_checkpoint(path, *ps_, "world_model", meta);
}

std::vector<double> WorldModel::encode(const std::vector<double>& obs) const {
  LPB_CHECK_MSG(static_cast<int>(obs.size()) == cfg_.obs_dim,
                "encode: observation dimension mismatch");
  Tensor x({1, static_cast<int64_t>(feature_dim(cfg_))});
  featurize_obs(cfg_, obs.data(), x.ptr());
  return tensor_row(encoder_.forward(x), 0);
}

Tensor WorldModel::encode_batch(const Tensor& obs) const {
  return encode_batch_cached(obs, nullptr);
}

Tensor WorldModel::encode_batch_cached(const Tensor& obs,
                                       Mlp::Cache* cache) const {
  LPB_CHECK_MSG(obs.cols() == cfg_.obs_dim,
                "encode: observation dimension mismatch");
  Tensor x({obs.rows(), static_cast<int64_t>(feature_dim(cfg_))});
  for (int64_t r = 0; r < obs.rows(); ++r) {
    featurize_obs(cfg_, obs.row_ptr(r), x.row_ptr(r));
  }
  return encoder_.forward(x, false, nullptr, cache);
}

Tensor WorldModel::predict_batch(const Tensor& z, const Tensor& a) const {
  return predict_batch_cached(z, a, nullptr);
}

Tensor WorldModel::predict_batch_cached(const Tensor& z, const Tensor& a,
                                        Mlp::Cache* cache) const {
  LPB_CHECK_MSG(z.cols() == cfg_.d && a.cols() == cfg_.act_dim &&
                    z.rows() == a.rows(),
                "predict: latent/action dimension mismatch");
  global_predictor_calls().fetch_add(z.rows(), std::memory_order_relaxed);
  // Residual parameterization: one step is a small latent displacement, so
  // the network regresses the increment.
  Tensor out = predictor_.forward(concat_cols(z, a), false, nullptr, cache);
  for (int64_t r = 0; r < out.rows(); ++r) {
    kernels::axpy(1.0, z.row_ptr(r), out.row_ptr(r), cfg_.d);
  }
  return out;
}

void WorldModel::predict_input_grads(const Mlp::Cache& cache,
                                     const Tensor& dznext, Tensor* dz,
                                     Tensor* da) const {
  Tensor din = predictor_.backward(cache, dznext, /*accumulate_param_grads=*/false);
  int64_t n = din.rows();
  if (dz) *dz = Tensor({n, cfg_.d});
  if (da) *da = Tensor({n, cfg_.act_dim});
  for (int64_t r = 0; r < n; ++r) {
    const double* src = din.row_ptr(r);
    if (dz) {
      std::copy(src, src + cfg_.d, dz->row_ptr(r));
      // Identity skip path.
      kernels::axpy(1.0, dznext.row_ptr(r), dz->row_ptr(r), cfg_.d);
    }
    if (da) std::copy(src + cfg_.d, src + cfg_.d + cfg_.act_dim, da->row_ptr(r));
  }
}

namespace {

struct TransitionIndex {
  std::vector<std::pair<int, int>> items;  // (episode, t)
};

TransitionIndex index_transitions(const DemoDataset& ds, int frameskip) {
  TransitionIndex idx;
  for (size_t e = 0; e < ds.episodes.size(); ++e) {
    for (int t = 0; t + frameskip <= ds.episodes[e].steps; ++t) {
      idx.items.emplace_back(static_cast<int>(e), t);
    }
  }
  return idx;
}

}  // namespace

WorldModel train_world_model(const DemoDataset& ds, WorldModelConfig cfg,
                             Rng rng, std::vector<TrainCurveRow>* curve) {
  LPB_CHECK_MSG(!ds.episodes.empty(), "empty dataset");
  cfg.obs_dim = ds.obs_dim;
  cfg.act_dim = ds.act_dim;
  obs_bounds(ds.env, &cfg.obs_lo, &cfg.obs_hi);
  WorldModel wm(cfg, rng.stream("init"));
  TransitionIndex idx = index_transitions(ds, cfg.frameskip);
  int64_t n = static_cast<int64_t>(idx.items.size());
  int64_t batch = std::min<int64_t>(cfg.batch, n);
  LPB_CHECK_MSG(batch >= 2, "need at least two transitions per batch");
  int64_t steps_per_epoch = std::max<int64_t>(1, n / batch);
  int64_t total_steps = steps_per_epoch * cfg.epochs;
  OptimState opt = make_optim_state(
      wm.params(), {cfg.lr, cfg.lr / 100.0, total_steps}, cfg.weight_decay,
      cfg.clip_norm);
  Rng shuffle_rng = rng.stream("shuffle");
  double pred_norm = -1.0, sig_norm = -1.0;  // loss normalizers, set at step 0
  std::vector<int64_t> order(n);
  for (int64_t i = 0; i < n; ++i) order[i] = i;
  int64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng er = shuffle_rng.split(epoch);
    for (int64_t i = n - 1; i > 0; --i) {
      int64_t j = er.uniform_int(i + 1);
      std::swap(order[i], order[j]);
    }
    for (int64_t b = 0; b < steps_per_epoch; ++b) {
      Tensor x({batch, static_cast<int64_t>(cfg.obs_dim)});
      Tensor xn({batch, static_cast<int64_t>(cfg.obs_dim)});
      Tensor a({batch, static_cast<int64_t>(cfg.act_dim)});
      for (int64_t r = 0; r < batch; ++r) {
        auto [e, t] = idx.items[order[b * batch + r]];
        const Episode& ep = ds.episodes[e];
        set_tensor_row(&x, r, ep.obs_at(t, cfg.obs_dim));
        set_tensor_row(&xn, r, ep.obs_at(t + cfg.frameskip, cfg.obs_dim));
        set_tensor_row(&a, r, ep.act_at(t, cfg.act_dim));
      }
      Mlp::Cache enc_cache, pred_cache, enc_next_cache;
      Tensor z = wm.encode_batch_cached(x, &enc_cache);
      Tensor zn = wm.encode_batch_cached(
          xn, cfg.stop_grad_target ? nullptr : &enc_next_cache);
      Tensor zhat = wm.predictor().forward(concat_cols(z, a), false, nullptr,
                                           &pred_cache);
      // Residual head (matches predict_batch).
      for (int64_t r = 0; r < batch; ++r) {
        for (int64_t j = 0; j < cfg.d; ++j) zhat.at(r, j) += z.at(r, j);
      }
      double pred_loss = 0.0;
      Tensor dzhat({batch, static_cast<int64_t>(cfg.d)});
      for (int64_t r = 0; r < batch; ++r) {
        for (int64_t j = 0; j < cfg.d; ++j) {
          double diff = zhat.at(r, j) - zn.at(r, j);
          pred_loss += diff * diff;
          dzhat.at(r, j) = 2.0 * diff / static_cast<double>(batch);
        }
      }
      pred_loss /= static_cast<double>(batch);
      double sig = sigreg(z);
      if (!std::isfinite(pred_loss) || !std::isfinite(sig)) {
        throw NumericalError("world model loss diverged at step " +
                             std::to_string(step));
      }
      if (pred_norm < 0.0) {
        // Normalize both terms to O(1) at initialization; lambda then weighs
        // comparable quantities.
        pred_norm = 1.0 / std::max(pred_loss, 1e-12);
        sig_norm = 1.0 / std::max(sig, 1e-12);
      }
      wm.params().zero_grads();
      // Prediction term.
      for (double& v : dzhat.data) v *= pred_norm;
      Tensor din = wm.predictor().backward(pred_cache, dzhat);
      Tensor dz({batch, static_cast<int64_t>(cfg.d)});
      for (int64_t r = 0; r < batch; ++r) {
        // MLP input path plus the residual identity path.
        for (int64_t j = 0; j < cfg.d; ++j) {
          dz.at(r, j) = din.at(r, j) + dzhat.at(r, j);
        }
      }
      // Regularizer term.
      if (cfg.lambda > 0.0) {
        Tensor dsig = sigreg_gradient(z);
        tensor_axpy(cfg.lambda * sig_norm, dsig, &dz);
      }
      wm.encoder().backward(enc_cache, dz);
      if (!cfg.stop_grad_target) {
        Tensor dzn({batch, static_cast<int64_t>(cfg.d)});
        for (int64_t r = 0; r < batch; ++r) {
          for (int64_t j = 0; j < cfg.d; ++j) {
            dzn.at(r, j) = -dzhat.at(r, j);
          }
        }
        wm.encoder().backward(enc_next_cache, dzn);
      }
      double lr = adamw_step(&wm.params(), &opt);
      if (curve) curve->push_back({step, pred_loss, sig, lr});
      ++step;
    }
  }
  return wm;
}

PredictionQuality evaluate_prediction(const WorldModel& wm,
                                      const DemoDataset& ds) {
  PredictionQuality q;
  int64_t count = 0;
  const WorldModelConfig& cfg = wm.config();
  for (const Episode& ep : ds.episodes) {
    if (ep.steps < cfg.frameskip) continue;
    Tensor x({ep.steps, static_cast<int64_t>(cfg.obs_dim)});
    Tensor xn({ep.steps, static_cast<int64_t>(cfg.obs_dim)});
    Tensor a({ep.steps, static_cast<int64_t>(cfg.act_dim)});
    int64_t rows = 0;
    for (int t = 0; t + cfg.frameskip <= ep.steps; ++t) {
      set_tensor_row(&x, rows, ep.obs_at(t, cfg.obs_dim));
      set_tensor_row(&xn, rows, ep.obs_at(t + cfg.frameskip, cfg.obs_dim));
      set_tensor_row(&a, rows, ep.act_at(t, cfg.act_dim));
      ++rows;
    }
    x.shape[0] = xn.shape[0] = a.shape[0] = rows;
    x.data.resize(rows * cfg.obs_dim);
    xn.data.resize(rows * cfg.obs_dim);
    a.data.resize(rows * cfg.act_dim);
    Tensor z = wm.encode_batch(x);
    Tensor zn = wm.encode_batch(xn);
    Tensor zhat = wm.predict_batch(z, a);
    for (int64_t r = 0; r < rows; ++r) {
      q.mean_error += std::sqrt(sqdist(zhat.row_ptr(r), zn.row_ptr(r), cfg.d));
      q.mean_latent_norm += std::sqrt(sqnorm(z.row_ptr(r), cfg.d));
      ++count;
    }
  }
  if (count > 0) {
    q.mean_error /= count;
    q.mean_latent_norm /= count;
  }
  return q;
}

}  // namespace lpb
