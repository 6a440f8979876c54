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

#ifndef LPB_LATENT_MODEL_H_
#define LPB_LATENT_MODEL_H_

#include <any>
#include <cstdint>

#include "lpb/tensor.h"
#include "lpb/world_model.h"

namespace lpb {

// One-step latent dynamics as seen by the planners. Each instance carries
// its own call counter, so per-episode accounting stays exact under
// concurrent episodes. predict() is the only entry the sampling planners
// use in their inner loop.
class LatentModel {
 public:
  virtual ~LatentModel() = default;
  virtual int latent_dim() const = 0;
  virtual int action_dim() const = 0;

  Tensor predict(const Tensor& z, const Tensor& a) {
    calls_ += z.rows();
    return do_predict(z, a, nullptr);
  }
  Tensor predict_cached(const Tensor& z, const Tensor& a, std::any* cache) {
    calls_ += z.rows();
    return do_predict(z, a, cache);
  }
  // Input gradients for the gradient planner; not counted as calls.
  virtual void predict_grads(const std::any& cache, const Tensor& dznext,
                             Tensor* dz, Tensor* da) = 0;

  int64_t calls() const { return calls_; }
  void reset_calls() { calls_ = 0; }

 protected:
  virtual Tensor do_predict(const Tensor& z, const Tensor& a,
                            std::any* cache) = 0;

 private:
  int64_t calls_ = 0;
};

// The trained world model behind the LatentModel surface.
class WorldModelLatent : public LatentModel {
 public:
  explicit WorldModelLatent(const WorldModel& wm) : wm_(wm) {}
  int latent_dim() const override { return wm_.config().d; }
  int action_dim() const override { return wm_.config().act_dim; }
  void predict_grads(const std::any& cache, const Tensor& dznext, Tensor* dz,
                     Tensor* da) override {
    wm_.predict_input_grads(std::any_cast<const Mlp::Cache&>(cache), dznext,
                            dz, da);
  }

 protected:
  Tensor do_predict(const Tensor& z, const Tensor& a,
                    std::any* cache) override {
    if (!cache) return wm_.predict_batch(z, a);
    Mlp::Cache c;
    Tensor out = wm_.predict_batch_cached(z, a, &c);
    *cache = std::move(c);
    return out;
  }

 private:
  const WorldModel& wm_;
};

// Analytic integrator (z' = z + a) used by solver oracles and diagnostics:
// the latent space *is* the state space.
class IntegratorLatent : public LatentModel {
 public:
  explicit IntegratorLatent(int dim) : dim_(dim) {}
  int latent_dim() const override { return dim_; }
  int action_dim() const override { return dim_; }
  void predict_grads(const std::any&, const Tensor& dznext, Tensor* dz,
                     Tensor* da) override {
    if (dz) *dz = dznext;
    if (da) *da = dznext;
  }

 protected:
  Tensor do_predict(const Tensor& z, const Tensor& a, std::any*) override {
    Tensor out = z;
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += a.data[i];
    return out;
  }

 private:
  int dim_;
};

}  // namespace lpb

#endif  // LPB_LATENT_MODEL_H_
