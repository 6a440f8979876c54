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

#include "lpb/adamw.h"

#include <cmath>

#include "lpb/check.h"

namespace lpb {

double CosineSchedule::at(int64_t step) const {
  if (total_steps <= 0) return base_lr;
  double t = static_cast<double>(std::min(step, total_steps)) /
             static_cast<double>(total_steps);
  return final_lr + 0.5 * (base_lr - final_lr) * (1.0 + std::cos(M_PI * t));
}

OptimState make_optim_state(const ParamSet& params, const CosineSchedule& lr,
                            double weight_decay, double clip_norm) {
  OptimState opt;
  opt.lr = lr;
  opt.weight_decay = weight_decay;
  opt.clip_norm = clip_norm;
  opt.m.reserve(params.size());
  opt.v.reserve(params.size());
  for (int i = 0; i < params.size(); ++i) {
    opt.m.emplace_back(params.at(i).value.shape);
    opt.v.emplace_back(params.at(i).value.shape);
  }
  return opt;
}

double adamw_step(ParamSet* params, OptimState* opt) {
  LPB_CHECK(static_cast<int>(opt->m.size()) == params->size());
  for (int i = 0; i < params->size(); ++i) {
    if (!params->grad(i).all_finite()) {
      throw NumericalError("non-finite gradient in parameter '" +
                           params->at(i).name + "' at step " +
                           std::to_string(opt->step));
    }
  }
  double clip_scale = 1.0;
  if (opt->clip_norm > 0.0) {
    double gnorm = std::sqrt(params->grad_sqnorm());
    if (gnorm > opt->clip_norm) clip_scale = opt->clip_norm / gnorm;
  }
  double lr = opt->lr.at(opt->step);
  int64_t t = opt->step + 1;
  double bc1 = 1.0 - std::pow(opt->beta1, static_cast<double>(t));
  double bc2 = 1.0 - std::pow(opt->beta2, static_cast<double>(t));
  for (int i = 0; i < params->size(); ++i) {
    Tensor& w = params->value(i);
    const Tensor& g = params->at(i).grad;
    Tensor& m = opt->m[i];
    Tensor& v = opt->v[i];
    for (size_t j = 0; j < w.data.size(); ++j) {
      double gj = g.data[j] * clip_scale;
      m.data[j] = opt->beta1 * m.data[j] + (1.0 - opt->beta1) * gj;
      v.data[j] = opt->beta2 * v.data[j] + (1.0 - opt->beta2) * gj * gj;
      double mhat = m.data[j] / bc1;
      double vhat = v.data[j] / bc2;
      w.data[j] -= lr * (mhat / (std::sqrt(vhat) + opt->eps) +
                         opt->weight_decay * w.data[j]);
    }
  }
  ++opt->step;
  return lr;
}

}  // namespace lpb
