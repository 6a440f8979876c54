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

#ifndef LPB_PAIRWISE_IDM_H_
#define LPB_PAIRWISE_IDM_H_

#include <memory>
#include <string>
#include <vector>

#include "lpb/dataset.h"
#include "lpb/mlp.h"
#include "lpb/record.h"
#include "lpb/world_model.h"

namespace lpb {

struct PairwiseConfig {
  int d = 0;
  int act_dim = 0;
  int hidden = 512;
  int layers = 3;
  double dropout = 0.1;
  double train_sigma = 0.0;  // Gaussian noise on both inputs, training only
  // Frameskip over raw frames. 1 decodes single raw actions; larger values
  // regress stacked action chunks (kept as a negative control).
  int frameskip = 1;
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double clip_norm = 1.0;
  int epochs = 50;
  int batch = 1024;
};

// Inverse model over consecutive latent pairs: (z_t ++ z_{t+1}) -> a_t.
class PairwiseIdm {
 public:
  PairwiseIdm() = default;
  PairwiseIdm(const PairwiseConfig& cfg, Rng init_rng);

  static PairwiseIdm load(const std::string& path);
  void save(const std::string& path) const;

  const PairwiseConfig& config() const { return cfg_; }
  ParamSet& params() { return *ps_; }

  std::vector<double> act(const std::vector<double>& z,
                          const std::vector<double>& z_next) const;
  Tensor forward_batch(const Tensor& z, const Tensor& z_next,
                       bool train = false, Rng* dropout_rng = nullptr,
                       Mlp::Cache* cache = nullptr) const;
  void backward(const Mlp::Cache& cache, const Tensor& dy) const;

 private:
  PairwiseConfig cfg_;
  std::unique_ptr<ParamSet> ps_;
  Mlp net_;
};

PairwiseIdm train_pairwise(const DemoDataset& ds, const WorldModel& wm,
                           PairwiseConfig cfg, Rng rng,
                           std::vector<TrainCurveRow>* curve = nullptr);

// Metrics on ground-truth consecutive pairs with optional test-time noise.
struct OracleMetrics {
  double mse = 0.0;
  double cosine_sim = 0.0;
  double r2 = 0.0;  // per-action-dim 1 - SSE/SST, averaged
};
OracleMetrics oracle_eval(const PairwiseIdm& model, const DemoDataset& ds,
                          const WorldModel& wm, double test_sigma, Rng rng);

// Linear latent interpolation, endpoints exact: alpha_i = i / H.
std::vector<std::vector<double>> lerp_plan(const std::vector<double>& z_start,
                                           const std::vector<double>& z_goal,
                                           int H);

// Decodes a latent path into actions with optional predictor-based
// refinement and multi-candidate selection. Candidate snapshots are scored
// by the terminal latent goal distance of their predictor rollout; the
// unrefined decoding is always in the selection pool.
struct RefineResult {
  std::vector<std::vector<double>> actions;
  double score = -1.0;  // squared terminal distance; -1 when never scored
  int64_t predictor_calls = 0;
  int64_t idm_forwards = 0;
};
RefineResult refine_path(const std::vector<std::vector<double>>& path,
                         const std::vector<double>& z_goal,
                         const PairwiseIdm& model, const WorldModel& wm,
                         const ActionSpec& spec, int refine_rounds,
                         int n_candidates, double perturb_sigma, Rng& rng);

// Open-loop execution of the decoded action sequence.
EpisodeRecord pairwise_episode(const GoalTask& task, const PairwiseIdm& model,
                               const WorldModel& wm, int refine_rounds,
                               int n_candidates, double perturb_sigma, Rng rng);

}  // namespace lpb

#endif  // LPB_PAIRWISE_IDM_H_
