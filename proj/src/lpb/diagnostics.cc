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

#include "lpb/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lpb/check.h"
#include "lpb/metrics.h"
#include "lpb/smallalg.h"

namespace lpb {

JacobianReport latent_action_jacobian(const WorldModel& wm, const EnvState& s,
                                      const std::vector<double>& action,
                                      double eps, double bound_slack) {
  const int d = wm.config().d;
  const int od = obs_dim(s.id);
  const int ad = action_spec(s.id).dim;
  JacobianReport rep;
  rep.eps = eps;
  // B = d latent coordinates by central differences over each action axis,
  // through the true transition composed with the encoder.
  rep.b = Tensor({d, ad});
  for (int j = 0; j < ad; ++j) {
    std::vector<double> ap = action, am = action;
    ap[j] += eps;
    am[j] -= eps;
    std::vector<double> zp = wm.encode(env_step(s, ap.data()).v);
    std::vector<double> zm = wm.encode(env_step(s, am.data()).v);
    for (int i = 0; i < d; ++i) {
      rep.b.at(i, j) = (zp[i] - zm[i]) / (2.0 * eps);
    }
  }
  rep.b_singular = singular_values(rep.b);
  rep.kappa_b = condition_number(rep.b_singular);
  rep.full_rank = std::isfinite(rep.kappa_b);
  // J_f^(a): true dynamics w.r.t. action.
  Tensor jf({od, ad});
  for (int j = 0; j < ad; ++j) {
    std::vector<double> ap = action, am = action;
    ap[j] += eps;
    am[j] -= eps;
    EnvState sp = env_step(s, ap.data());
    EnvState sm = env_step(s, am.data());
    for (int i = 0; i < od; ++i) {
      jf.at(i, j) = (sp.v[i] - sm.v[i]) / (2.0 * eps);
    }
  }
  rep.kappa_j_f = condition_number(singular_values(jf));
  // J_e at the successor state.
  EnvState snext = env_step(s, action.data());
  Tensor je({d, od});
  for (int k = 0; k < od; ++k) {
    std::vector<double> op = snext.v, om = snext.v;
    op[k] += eps;
    om[k] -= eps;
    std::vector<double> zp = wm.encode(op);
    std::vector<double> zm = wm.encode(om);
    for (int i = 0; i < d; ++i) {
      je.at(i, k) = (zp[i] - zm[i]) / (2.0 * eps);
    }
  }
  std::vector<double> je_sv = singular_values(je);
  rep.sigma_max_j_e = je_sv.front();
  rep.sigma_min_j_e = je_sv.back();
  rep.kappa_j_e = condition_number(je_sv);
  rep.bound_ok =
      rep.full_rank && std::isfinite(rep.kappa_j_e) &&
      std::isfinite(rep.kappa_j_f) &&
      rep.kappa_b <= rep.kappa_j_e * rep.kappa_j_f * (1.0 + bound_slack);
  return rep;
}

nlohmann::json jacobian_report_json(const JacobianReport& r) {
  nlohmann::json j;
  j["b"] = r.b.data;
  j["b_shape"] = r.b.shape;
  j["b_singular"] = r.b_singular;
  j["kappa_b"] = r.full_rank ? nlohmann::json(r.kappa_b) : nlohmann::json("inf");
  j["kappa_j_e"] = r.kappa_j_e;
  j["sigma_min_j_e"] = r.sigma_min_j_e;
  j["sigma_max_j_e"] = r.sigma_max_j_e;
  j["kappa_j_f"] = r.kappa_j_f;
  j["full_rank"] = r.full_rank;
  j["bound_ok"] = r.bound_ok;
  j["eps"] = r.eps;
  return j;
}

std::vector<double> pseudoinverse_action(const Tensor& b,
                                         const std::vector<double>& dz) {
  LPB_CHECK(b.rank() == 2 && static_cast<int64_t>(dz.size()) == b.rows());
  int64_t ad = b.cols();
  Tensor btb({ad, ad});
  for (int64_t i = 0; i < ad; ++i) {
    for (int64_t j = 0; j < ad; ++j) {
      double s = 0.0;
      for (int64_t r = 0; r < b.rows(); ++r) s += b.at(r, i) * b.at(r, j);
      btb.at(i, j) = s;
    }
  }
  std::vector<double> btz(ad, 0.0);
  for (int64_t i = 0; i < ad; ++i) {
    for (int64_t r = 0; r < b.rows(); ++r) btz[i] += b.at(r, i) * dz[r];
  }
  std::vector<double> x;
  if (!solve_linear(btb, btz, &x)) {
    throw NumericalError("rank-deficient jacobian in pseudoinverse_action");
  }
  return x;
}

OpenLoopController gc_idm_open_loop(const WorldModel& wm, const GcIdm& model) {
  return [&wm, &model](const std::vector<double>& obs,
                       const std::vector<double>& goal_obs,
                       int steps_remaining, int count) {
    std::vector<double> z = wm.encode(obs);
    std::vector<double> zg = wm.encode(goal_obs);
    std::vector<std::vector<double>> actions;
    Tensor zrow = Tensor::row(z);
    for (int i = 0; i < count; ++i) {
      int h = std::max(1, steps_remaining - i);
      std::vector<double> a = model.act(tensor_row(zrow, 0), zg, h);
      actions.push_back(a);
      if (i + 1 < count) {
        // Imagined continuation only inside the commit window.
        zrow = wm.predict_batch(zrow, Tensor::row(a));
      }
    }
    return actions;
  };
}

OpenLoopController deadbeat_point_mass() {
  return [](const std::vector<double>& obs, const std::vector<double>& goal_obs,
            int, int count) {
    std::vector<std::vector<double>> actions(count,
                                             std::vector<double>(2, 0.0));
    // One corrective step, then hold: the mental model is the exact
    // integrator, so the plan believes it has arrived.
    const ActionSpec& spec = action_spec(EnvId::kPointMass);
    for (int j = 0; j < 2; ++j) {
      actions[0][j] = std::min(spec.high[j],
                               std::max(spec.low[j], goal_obs[j] - obs[j]));
    }
    return actions;
  };
}

DivergenceResult error_propagation_experiment(
    const GoalTask& task, const OpenLoopController& controller, int window,
    double noise_sigma, const std::string& noise_mode, Rng rng) {
  LPB_CHECK(window >= 1 && task.budget >= window);
  LPB_CHECK_MSG(noise_mode == "iid" || noise_mode == "bias",
                "noise_mode must be iid or bias");
  const int ad = action_spec(task.env).dim;
  const int T = task.budget;
  // Shared disturbance sequence.
  Rng noise = rng.stream("noise");
  std::vector<std::vector<double>> eps(T, std::vector<double>(ad, 0.0));
  if (noise_mode == "bias") {
    std::vector<double> bias(ad);
    noise.fill_gaussian(bias.data(), ad);
    for (int t = 0; t < T; ++t) {
      for (int j = 0; j < ad; ++j) eps[t][j] = noise_sigma * bias[j];
    }
  } else {
    for (int t = 0; t < T; ++t) {
      for (int j = 0; j < ad; ++j) eps[t][j] = noise_sigma * noise.gaussian();
    }
  }
  auto run = [&](int w) {
    std::vector<std::vector<double>> states;
    EnvState s = state_from_obs(task.env, task.start_obs);
    states.push_back(s.v);
    int t = 0;
    while (t < T) {
      int count = std::min(w, T - t);
      auto actions = controller(s.v, task.goal_obs, T - t, count);
      for (int i = 0; i < count; ++i) {
        std::vector<double> a = actions[i];
        for (int j = 0; j < ad; ++j) a[j] += eps[t][j];
        s = env_step(s, a.data());
        states.push_back(s.v);
        ++t;
      }
    }
    return states;
  };
  std::vector<std::vector<double>> ref = run(1);
  std::vector<std::vector<double>> windowed = run(window);
  DivergenceResult out;
  out.window = window;
  for (int b = window; b <= T; b += window) {
    double d = std::sqrt(
        sqdist(ref[b].data(), windowed[b].data(), static_cast<int64_t>(ref[b].size())));
    out.per_boundary.push_back(d);
    out.mean_divergence += d;
  }
  if (!out.per_boundary.empty()) {
    out.mean_divergence /= static_cast<double>(out.per_boundary.size());
  }
  return out;
}

void dump_latent_geometry(const WorldModel& wm, const DemoDataset& ds,
                          const std::string& geometry_csv_path,
                          const std::string& marginal_csv_path) {
  std::ofstream geo(geometry_csv_path, std::ios::trunc);
  if (!geo) throw MissingArtifact("cannot write " + geometry_csv_path);
  const int d = wm.config().d;
  geo << "episode,frame,goal_distance";
  for (int i = 0; i < d; ++i) geo << ",z" << i;
  geo << "\n";
  std::ofstream marg(marginal_csv_path, std::ios::trunc);
  if (!marg) throw MissingArtifact("cannot write " + marginal_csv_path);
  marg << "episode,dim,value\n";
  for (size_t e = 0; e < ds.episodes.size(); ++e) {
    const Episode& ep = ds.episodes[e];
    Tensor x({static_cast<int64_t>(ep.steps + 1),
              static_cast<int64_t>(ds.obs_dim)});
    for (int t = 0; t <= ep.steps; ++t) set_tensor_row(&x, t, ep.obs_at(t, ds.obs_dim));
    Tensor z = wm.encode_batch(x);
    const double* final_z = z.row_ptr(ep.steps);
    for (int t = 0; t <= ep.steps; ++t) {
      geo << e << ',' << t << ','
          << format_double(std::sqrt(sqdist(z.row_ptr(t), final_z, d)));
      for (int i = 0; i < d; ++i) geo << ',' << format_double(z.at(t, i));
      geo << '\n';
    }
    for (int i = 0; i < d; ++i) {
      marg << e << ',' << i << ',' << format_double(z.at(0, i)) << '\n';
    }
  }
}

}  // namespace lpb
