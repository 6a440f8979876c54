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

#ifndef LPB_GC_IDM_H_
#define LPB_GC_IDM_H_

#include <memory>
#include <string>
#include <vector>

#include "lpb/blocks.h"
#include "lpb/dataset.h"
#include "lpb/mlp.h"
#include "lpb/record.h"
#include "lpb/world_model.h"

namespace lpb {

// min(steps_remaining, H_max) / H_max; steps_remaining must be >= 1.
double normalize_horizon(int steps_remaining, int H_max);

struct GcIdmConfig {
  int d = 0;
  int act_dim = 0;
  int hidden = 512;
  int layers = 3;
  int horizon_dim = 64;      // sinusoidal encoding width
  int horizon_hidden = 128;  // horizon-embedding MLP width (and |c|)
  int H_max = 50;
  double dropout = 0.1;
  double noise_sigma = 0.0;             // input-noise augmentation
  std::string noise_schedule = "fixed"; // "fixed" | "uniform"
  // Optimizer settings.
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double clip_norm = 1.0;
  int epochs = 50;
  int batch = 1024;
};

// Goal-conditioned inverse dynamics controller: backbone MLP over
// z_t ++ z_goal, modulated by the remaining-horizon embedding through
// zero-initialized adaln projections immediately before the action head.
class GcIdm {
 public:
  GcIdm() = default;
  GcIdm(const GcIdmConfig& cfg, Rng init_rng);

  static GcIdm load(const std::string& path);
  void save(const std::string& path) const;

  const GcIdmConfig& config() const { return cfg_; }
  ParamSet& params() { return *ps_; }
  const ParamSet& params() const { return *ps_; }

  struct Cache {
    Mlp::Cache backbone;
    Mlp::Cache horizon;
    AdalnCache adaln;
    Tensor head_in;
  };

  // h_steps holds raw remaining-step counts; normalization and clamping to
  // H_max happen inside.
  Tensor forward_batch(const Tensor& z, const Tensor& z_goal,
                       const std::vector<int>& h_steps, bool train = false,
                       Rng* dropout_rng = nullptr, Cache* cache = nullptr) const;
  // Single-step controller output (deterministic, dropout off).
  std::vector<double> act(const std::vector<double>& z,
                          const std::vector<double>& z_goal, int h_steps) const;
  // Accumulates parameter gradients; returns d loss / d [z ++ z_goal].
  Tensor backward(const Cache& cache, const Tensor& dy) const;

 private:
  GcIdmConfig cfg_;
  std::unique_ptr<ParamSet> ps_;
  Mlp backbone_;
  Mlp horizon_mlp_;
  int wg_ = -1, bg_ = -1, wb_ = -1, bb_ = -1;  // modulation projections
  int head_w_ = -1, head_b_ = -1;
};

// Uniform-h triple sampling: h ~ U[1, H_max] first, then (episode, t)
// uniform over positions with at least h steps remaining.
class TripleSampler {
 public:
  TripleSampler(const DemoDataset& ds, int H_max);
  struct Triple {
    int episode, t, h;
  };
  Triple sample(Rng& rng) const;
  int64_t count_for_h(int h) const { return totals_[h - 1]; }

 private:
  int H_max_;
  std::vector<int64_t> totals_;             // per h
  std::vector<std::vector<int64_t>> cum_;   // per h, cumulative over episodes
};

GcIdm train_gc_idm(const DemoDataset& ds, const WorldModel& wm,
                   GcIdmConfig cfg, Rng rng,
                   std::vector<TrainCurveRow>* curve = nullptr);

// Closed-loop control: goal encoded once and cached; per step one re-encode
// and one forward pass, zero predictor calls.
EpisodeRecord closed_loop_control(const GoalTask& task, const WorldModel& wm,
                                  const GcIdm& model);

}  // namespace lpb

#endif  // LPB_GC_IDM_H_
