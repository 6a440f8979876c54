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

#ifndef LPB_WORLD_MODEL_H_
#define LPB_WORLD_MODEL_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lpb/dataset.h"
#include "lpb/mlp.h"

namespace lpb {

struct WorldModelConfig {
  int d = 32;
  int obs_dim = 0;
  int act_dim = 0;
  int hidden = 256;
  int hidden_layers = 2;
  double lambda = 1.0;  // isotropy-regularizer weight
  int frameskip = 1;
  bool stop_grad_target = true;
  // Fixed sinusoidal lifting of the observation ahead of the encoder MLP.
  // A raw low-dimensional state makes the freshly initialized encoder almost
  // affine, which strands the isotropy objective at a rank-deficient saddle;
  // the lift gives the init full-rank latent covariance. 0 disables.
  int feat_freqs = 6;
  std::vector<double> obs_lo, obs_hi;  // per-coordinate bounds for the lift
  // Optimizer settings.
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double clip_norm = 1.0;
  int epochs = 50;
  int batch = 1024;
};

// obs_dim * (1 + 2 * feat_freqs) sinusoidal observation features.
int feature_dim(const WorldModelConfig& cfg);
void featurize_obs(const WorldModelConfig& cfg, const double* obs, double* out);

// Monotone process-wide count of one-step predictor forward passes.
std::atomic<int64_t>& global_predictor_calls();

// Isotropy penalty on a batch of latents: ||mean||^2 + ||Cov - I||_F^2
// (1/n covariance). Zero exactly on a whitened batch.
double sigreg(const Tensor& z);
Tensor sigreg_gradient(const Tensor& z);

// Frozen latent world model: encoder obs->d and one-step predictor
// (d+act)->d. Inference methods are const and safe to share across threads.
class WorldModel {
 public:
  WorldModel() = default;
  WorldModel(const WorldModelConfig& cfg, Rng init_rng);

  static WorldModel load(const std::string& path);
  void save(const std::string& path) const;

  const WorldModelConfig& config() const { return cfg_; }
  int d() const { return cfg_.d; }
  ParamSet& params() { return *ps_; }
  const ParamSet& params() const { return *ps_; }
  uint64_t checksum() const { return ps_->value_checksum(); }

  std::vector<double> encode(const std::vector<double>& obs) const;
  Tensor encode_batch(const Tensor& obs) const;
  Tensor encode_batch_cached(const Tensor& obs, Mlp::Cache* cache) const;
  // One-step latent prediction; every row adds one predictor call to the
  // global counter.
  Tensor predict_batch(const Tensor& z, const Tensor& a) const;
  Tensor predict_batch_cached(const Tensor& z, const Tensor& a,
                              Mlp::Cache* cache) const;
  // Gradients of a scalar loss w.r.t. the predictor inputs, given the
  // gradient at its output. Never touches parameter gradients.
  void predict_input_grads(const Mlp::Cache& cache, const Tensor& dznext,
                           Tensor* dz, Tensor* da) const;

  // Trainer-facing access.
  Mlp& encoder() { return encoder_; }
  Mlp& predictor() { return predictor_; }
  const Mlp& encoder() const { return encoder_; }

 private:
  WorldModelConfig cfg_;
  std::unique_ptr<ParamSet> ps_;
  Mlp encoder_, predictor_;
};

struct TrainCurveRow {
  int64_t step = 0;
  double loss_a = 0.0;  // prediction term (raw)
  double loss_b = 0.0;  // regularizer term (raw)
  double lr = 0.0;
};

WorldModel train_world_model(const DemoDataset& ds, WorldModelConfig cfg,
                             Rng rng, std::vector<TrainCurveRow>* curve = nullptr);

// Mean one-step latent prediction error over a dataset's transitions,
// alongside the mean latent norm (for relative-error checks).
struct PredictionQuality {
  double mean_error = 0.0;
  double mean_latent_norm = 0.0;
};
PredictionQuality evaluate_prediction(const WorldModel& wm,
                                      const DemoDataset& ds);

}  // namespace lpb

#endif  // LPB_WORLD_MODEL_H_
