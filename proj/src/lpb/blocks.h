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

#ifndef LPB_BLOCKS_H_
#define LPB_BLOCKS_H_

#include <vector>

#include "lpb/rng.h"
#include "lpb/tensor.h"

namespace lpb {

// Fixed network blocks with hand-derived reverse-mode gradients. Gradients
// accumulate (+=) into the provided parameter-gradient tensors; input
// gradients are assigned.

// y = x W + b; x [batch,in], w [in,out], b [out].
Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b);
void linear_backward(const Tensor& x, const Tensor& w, const Tensor& dy,
                     Tensor* dx, Tensor* dw, Tensor* db);

struct LayerNormCache {
  Tensor xhat;
  std::vector<double> inv_std;
};
Tensor layernorm_forward(const Tensor& x, const Tensor& gain,
                         const Tensor& bias, double eps,
                         LayerNormCache* cache = nullptr);
void layernorm_backward(const LayerNormCache& cache, const Tensor& gain,
                        const Tensor& dy, Tensor* dx, Tensor* dgain,
                        Tensor* dbias);

// tanh form: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3))).
Tensor gelu(const Tensor& x);
void gelu_backward(const Tensor& x, const Tensor& dy, Tensor* dx);

// Inverted dropout: eval mode is the identity. In train mode the returned
// mask holds the applied per-entry scale (0 or 1/(1-rate)).
Tensor dropout(const Tensor& x, double rate, Rng& rng, bool train,
               Tensor* mask = nullptr);
void dropout_backward(const Tensor& mask, const Tensor& dy, Tensor* dx);

// Interleaved sin/cos at geometric frequencies 10000^(-2k/dim).
Tensor sinusoidal_encode(double h_frac, int dim);
Tensor sinusoidal_encode_batch(const std::vector<double>& h_fracs, int dim);

// out = h * (1 + gamma(c)) + beta(c) with gamma/beta linear in c.
// Zero-initialized projections make this the exact identity on h.
struct AdalnCache {
  Tensor h, c, gamma;
};
Tensor adaln_zero_forward(const Tensor& h, const Tensor& c, const Tensor& wg,
                          const Tensor& bg, const Tensor& wb, const Tensor& bb,
                          AdalnCache* cache = nullptr);
void adaln_zero_backward(const AdalnCache& cache, const Tensor& wg,
                         const Tensor& wb, const Tensor& dy, Tensor* dh,
                         Tensor* dc, Tensor* dwg, Tensor* dbg, Tensor* dwb,
                         Tensor* dbb);

}  // namespace lpb

#endif  // LPB_BLOCKS_H_
