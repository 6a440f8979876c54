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

#ifndef LPB_ADAMW_H_
#define LPB_ADAMW_H_

#include <cstdint>
#include <vector>

#include "lpb/params.h"

namespace lpb {

// Cosine annealing from base_lr to final_lr over total_steps, then flat.
struct CosineSchedule {
  double base_lr = 1e-3;
  double final_lr = 1e-5;
  int64_t total_steps = 1;
  double at(int64_t step) const;
};

struct OptimState {
  CosineSchedule lr;
  double weight_decay = 0.0;  // decoupled
  double clip_norm = 0.0;     // 0 disables clipping
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int64_t step = 0;
  std::vector<Tensor> m;  // first moments, aligned with ParamSet order
  std::vector<Tensor> v;  // second moments
};

OptimState make_optim_state(const ParamSet& params, const CosineSchedule& lr,
                            double weight_decay, double clip_norm);

// One AdamW update from the accumulated gradients. Clips the global gradient
// norm first, applies decoupled weight decay, then advances the step counter.
// Throws NumericalError naming the offending parameter on non-finite
// gradients. Returns the learning rate that was applied.
double adamw_step(ParamSet* params, OptimState* opt);

}  // namespace lpb

#endif  // LPB_ADAMW_H_
