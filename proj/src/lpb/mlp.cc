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

#include "lpb/mlp.h"

#include "lpb/check.h"

namespace lpb {

Mlp::Mlp(ParamSet* ps, const std::string& prefix, const MlpConfig& cfg,
         Rng* init_rng)
    : ps_(ps), cfg_(cfg) {
  LPB_CHECK(cfg.in > 0 && cfg.hidden > 0 && cfg.hidden_layers >= 1);
  LPB_CHECK(!cfg.has_head || cfg.out > 0);
  int64_t in = cfg.in;
  for (int l = 0; l < cfg.hidden_layers; ++l) {
    std::string base = prefix + ".l" + std::to_string(l);
    if (init_rng) {
      w_.push_back(ps->add(base + ".w", kaiming_init({in, cfg.hidden}, *init_rng)));
      b_.push_back(ps->add(base + ".b", Tensor({static_cast<int64_t>(cfg.hidden)})));
      if (cfg.layer_norm) {
        lng_.push_back(ps->add(base + ".ln_g",
                               Tensor({static_cast<int64_t>(cfg.hidden)}, 1.0)));
        lnb_.push_back(
            ps->add(base + ".ln_b", Tensor({static_cast<int64_t>(cfg.hidden)})));
      }
    } else {
      w_.push_back(ps->index_of(base + ".w"));
      b_.push_back(ps->index_of(base + ".b"));
      if (cfg.layer_norm) {
        lng_.push_back(ps->index_of(base + ".ln_g"));
        lnb_.push_back(ps->index_of(base + ".ln_b"));
      }
      LPB_CHECK_MSG(ps->value(w_.back()).rows() == in &&
                        ps->value(w_.back()).cols() == cfg.hidden,
                    "mlp attach shape mismatch at " + base);
    }
    in = cfg.hidden;
  }
  if (cfg.has_head) {
    std::string base = prefix + ".head";
    if (init_rng) {
      Tensor hw = cfg.head_init_sigma >= 0.0
                      ? small_init({in, cfg.out}, cfg.head_init_sigma, *init_rng)
                      : kaiming_init({in, cfg.out}, *init_rng);
      head_w_ = ps->add(base + ".w", std::move(hw));
      head_b_ = ps->add(base + ".b", Tensor({static_cast<int64_t>(cfg.out)}));
    } else {
      head_w_ = ps->index_of(base + ".w");
      head_b_ = ps->index_of(base + ".b");
    }
  }
}

Tensor Mlp::forward(const Tensor& x, bool train, Rng* dropout_rng,
                    Cache* cache) const {
  LPB_CHECK_MSG(x.cols() == cfg_.in, "mlp input width mismatch");
  bool use_dropout = train && cfg_.dropout > 0.0;
  LPB_CHECK_MSG(!use_dropout || dropout_rng != nullptr,
                "dropout in train mode needs an rng");
  if (cache) cache->layers.resize(cfg_.hidden_layers);
  Tensor h = x;
  for (int l = 0; l < cfg_.hidden_layers; ++l) {
    LayerCache* lc = cache ? &cache->layers[l] : nullptr;
    if (lc) lc->x = h;
    Tensor lin = linear_forward(h, ps_->value(w_[l]), ps_->value(b_[l]));
    Tensor act_in;
    if (cfg_.layer_norm) {
      act_in = layernorm_forward(lin, ps_->value(lng_[l]), ps_->value(lnb_[l]),
                                 cfg_.ln_eps, lc ? &lc->ln : nullptr);
    } else {
      act_in = lin;
    }
    if (lc) {
      lc->lin = std::move(lin);
      lc->act_in = act_in;
    }
    Tensor act = gelu(act_in);
    if (use_dropout) {
      h = dropout(act, cfg_.dropout, *dropout_rng, true, lc ? &lc->mask : nullptr);
    } else {
      h = std::move(act);
    }
  }
  if (!cfg_.has_head) {
    if (cache) cache->head_in = h;
    return h;
  }
  if (cache) cache->head_in = h;
  return linear_forward(h, ps_->value(head_w_), ps_->value(head_b_));
}

Tensor Mlp::backward(const Cache& cache, const Tensor& dy,
                     bool accumulate_param_grads) const {
  Tensor d = dy;
  if (cfg_.has_head) {
    Tensor dx;
    linear_backward(cache.head_in, ps_->value(head_w_), d, &dx,
                    accumulate_param_grads ? &ps_->grad(head_w_) : nullptr,
                    accumulate_param_grads ? &ps_->grad(head_b_) : nullptr);
    d = std::move(dx);
  }
  for (int l = cfg_.hidden_layers - 1; l >= 0; --l) {
    const LayerCache& lc = cache.layers[l];
    if (lc.mask.numel() > 0) {
      Tensor dd;
      dropout_backward(lc.mask, d, &dd);
      d = std::move(dd);
    }
    Tensor dact;
    gelu_backward(lc.act_in, d, &dact);
    if (cfg_.layer_norm) {
      Tensor dlin;
      layernorm_backward(lc.ln, ps_->value(lng_[l]), dact, &dlin,
                         accumulate_param_grads ? &ps_->grad(lng_[l]) : nullptr,
                         accumulate_param_grads ? &ps_->grad(lnb_[l]) : nullptr);
      dact = std::move(dlin);
    }
    Tensor dx;
    linear_backward(lc.x, ps_->value(w_[l]), dact, &dx,
                    accumulate_param_grads ? &ps_->grad(w_[l]) : nullptr,
                    accumulate_param_grads ? &ps_->grad(b_[l]) : nullptr);
    d = std::move(dx);
  }
  return d;
}

}  // namespace lpb
