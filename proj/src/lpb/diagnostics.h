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

#ifndef LPB_DIAGNOSTICS_H_
#define LPB_DIAGNOSTICS_H_

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lpb/dataset.h"
#include "lpb/gc_idm.h"
#include "lpb/world_model.h"

namespace lpb {

// Conditioning of the local action-to-latent map, measured by central finite
// differences through the true environment composed with the encoder (never
// the learned predictor).
struct JacobianReport {
  Tensor b;                        // d x act_dim latent/action Jacobian
  std::vector<double> b_singular;  // descending
  double kappa_b = 0.0;
  double kappa_j_e = 0.0;  // encoder Jacobian condition = sqrt(M/m)
  double sigma_min_j_e = 0.0, sigma_max_j_e = 0.0;
  double kappa_j_f = 0.0;  // dynamics Jacobian (w.r.t. action) condition
  bool full_rank = true;
  bool bound_ok = false;  // kappa_b <= kappa_j_e * kappa_j_f within slack
  double eps = 0.0;
};

JacobianReport latent_action_jacobian(const WorldModel& wm, const EnvState& s,
                                      const std::vector<double>& action,
                                      double eps = 1e-4,
                                      double bound_slack = 0.05);
nlohmann::json jacobian_report_json(const JacobianReport& r);

// Minimum-norm least-squares action from a latent displacement:
// (B^T B)^{-1} B^T dz. Throws on rank deficiency.
std::vector<double> pseudoinverse_action(const Tensor& b,
                                         const std::vector<double>& dz);

// Open-loop controller surface for the commit-window experiment: produce
// `count` actions from the current observation without re-encoding.
using OpenLoopController = std::function<std::vector<std::vector<double>>(
    const std::vector<double>& obs, const std::vector<double>& goal_obs,
    int steps_remaining, int count)>;

OpenLoopController gc_idm_open_loop(const WorldModel& wm, const GcIdm& model);
// Deadbeat integrator controller for the analytic oracle (point_mass).
OpenLoopController deadbeat_point_mass();

// Runs the same controller with re-encoding every `window` steps and
// measures state divergence from the window-1 reference at the window
// boundaries. The same per-step action disturbance is injected in both
// runs ("bias" draws one disturbance per episode, "iid" one per step).
struct DivergenceResult {
  int window = 0;
  double mean_divergence = 0.0;
  std::vector<double> per_boundary;
};
DivergenceResult error_propagation_experiment(
    const GoalTask& task, const OpenLoopController& controller, int window,
    double noise_sigma, const std::string& noise_mode, Rng rng);

// Raw latent dumps replacing projection figures: one row per frame
// (episode, frame, distance-to-final-frame, z...), plus the first-frame
// marginal values for the distribution check.
void dump_latent_geometry(const WorldModel& wm, const DemoDataset& ds,
                          const std::string& geometry_csv_path,
                          const std::string& marginal_csv_path);

}  // namespace lpb

#endif  // LPB_DIAGNOSTICS_H_
