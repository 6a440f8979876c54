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

#ifndef LPB_MLP_H_
#define LPB_MLP_H_

#include <string>
#include <vector>

#include "lpb/blocks.h"
#include "lpb/params.h"

namespace lpb {

struct MlpConfig {
  int in = 0;
  int hidden = 0;
  int out = 0;  // head width; unused when has_head is false
  int hidden_layers = 1;
  bool layer_norm = false;
  double dropout = 0.0;
  bool has_head = true;
  double head_init_sigma = -1.0;  // < 0 selects Kaiming
  double ln_eps = 1e-5;
};

// Stack of hidden blocks (Linear -> [LayerNorm] -> GELU -> [Dropout]) with an
// optional linear head. Parameters live in an external ParamSet under a name
// prefix, so several modules can share one optimizer/checkpoint.
class Mlp {
 public:
  Mlp() = default;
  // Initializes fresh parameters when init_rng is given; otherwise attaches
  // to parameters already present in ps (e.g. after a checkpoint load).
  Mlp(ParamSet* ps, const std::string& prefix, const MlpConfig& cfg,
      Rng* init_rng);

  int in_dim() const { return cfg_.in; }
  int out_dim() const { return cfg_.has_head ? cfg_.out : cfg_.hidden; }
  const MlpConfig& config() const { return cfg_; }

  struct LayerCache {
    Tensor x;
    Tensor lin;
    LayerNormCache ln;
    Tensor act_in;
    Tensor mask;  // empty when dropout inactive
  };
  struct Cache {
    std::vector<LayerCache> layers;
    Tensor head_in;
  };

  Tensor forward(const Tensor& x, bool train = false,
                 Rng* dropout_rng = nullptr, Cache* cache = nullptr) const;

  // Reverse pass from dy; returns dx. Parameter gradients accumulate into
  // the ParamSet only when accumulate_param_grads is set (inference-time
  // consumers such as the gradient planner must leave the set untouched).
  Tensor backward(const Cache& cache, const Tensor& dy,
                  bool accumulate_param_grads = true) const;

 private:
  ParamSet* ps_ = nullptr;
  MlpConfig cfg_;
  std::vector<int> w_, b_, lng_, lnb_;
  int head_w_ = -1, head_b_ = -1;
};

}  // namespace lpb

#endif  // LPB_MLP_H_
