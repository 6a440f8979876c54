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

#include "lpb/blocks.h"

#include <cmath>

#include "lpb/check.h"
#include "lpb/kernels.h"

namespace lpb {

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;
}  // namespace

Tensor linear_forward(const Tensor& x, const Tensor& w, const Tensor& b) {
  LPB_CHECK_MSG(x.rank() == 2 && w.rank() == 2 && x.cols() == w.rows(),
                "linear_forward shape mismatch");
  LPB_CHECK_MSG(b.numel() == w.cols(), "linear_forward bias mismatch");
  Tensor y({x.rows(), w.cols()});
  kernels::gemm_nn(x.ptr(), w.ptr(), y.ptr(), x.rows(), x.cols(), w.cols());
  kernels::add_bias_rows(y.ptr(), b.ptr(), y.rows(), y.cols());
  return y;
}

void linear_backward(const Tensor& x, const Tensor& w, const Tensor& dy,
                     Tensor* dx, Tensor* dw, Tensor* db) {
  LPB_CHECK(dy.rows() == x.rows() && dy.cols() == w.cols());
  if (dx) {
    *dx = Tensor({x.rows(), x.cols()});
    kernels::gemm_nt(dy.ptr(), w.ptr(), dx->ptr(), dy.rows(), dy.cols(),
                     w.rows());
  }
  if (dw) {
    LPB_CHECK(dw->same_shape(w));
    Tensor scratch({w.rows(), w.cols()});
    kernels::gemm_tn(x.ptr(), dy.ptr(), scratch.ptr(), w.rows(), x.rows(),
                     w.cols());
    kernels::axpy(1.0, scratch.ptr(), dw->ptr(), scratch.numel());
  }
  if (db) {
    LPB_CHECK(db->numel() == dy.cols());
    Tensor scratch({dy.cols()});
    kernels::col_sums(dy.ptr(), scratch.ptr(), dy.rows(), dy.cols());
    kernels::axpy(1.0, scratch.ptr(), db->ptr(), scratch.numel());
  }
}

Tensor layernorm_forward(const Tensor& x, const Tensor& gain,
                         const Tensor& bias, double eps,
                         LayerNormCache* cache) {
  int64_t b = x.rows(), d = x.cols();
  LPB_CHECK_MSG(d >= 1 && gain.numel() == d && bias.numel() == d,
                "layernorm shape mismatch");
  LPB_CHECK_MSG(eps > 0, "layernorm eps must be positive");
  Tensor y({b, d});
  Tensor xhat({b, d});
  std::vector<double> inv(b);
  for (int64_t i = 0; i < b; ++i) {
    const double* xi = x.row_ptr(i);
    double mu = 0.0;
    for (int64_t j = 0; j < d; ++j) mu += xi[j];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      double c = xi[j] - mu;
      var += c * c;
    }
    var /= static_cast<double>(d);
    double s = 1.0 / std::sqrt(var + eps);
    inv[i] = s;
    double* xh = xhat.row_ptr(i);
    double* yi = y.row_ptr(i);
    for (int64_t j = 0; j < d; ++j) {
      xh[j] = (xi[j] - mu) * s;
      yi[j] = gain.data[j] * xh[j] + bias.data[j];
    }
  }
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv);
  }
  return y;
}

void layernorm_backward(const LayerNormCache& cache, const Tensor& gain,
                        const Tensor& dy, Tensor* dx, Tensor* dgain,
                        Tensor* dbias) {
  int64_t b = dy.rows(), d = dy.cols();
  if (dx) *dx = Tensor({b, d});
  for (int64_t i = 0; i < b; ++i) {
    const double* dyi = dy.row_ptr(i);
    const double* xh = cache.xhat.row_ptr(i);
    double m1 = 0.0, m2 = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      double g = dyi[j] * gain.data[j];
      m1 += g;
      m2 += g * xh[j];
    }
    m1 /= static_cast<double>(d);
    m2 /= static_cast<double>(d);
    if (dx) {
      double* dxi = dx->row_ptr(i);
      double s = cache.inv_std[i];
      for (int64_t j = 0; j < d; ++j) {
        double g = dyi[j] * gain.data[j];
        dxi[j] = s * (g - m1 - xh[j] * m2);
      }
    }
    if (dgain) {
      for (int64_t j = 0; j < d; ++j) dgain->data[j] += dyi[j] * xh[j];
    }
    if (dbias) {
      for (int64_t j = 0; j < d; ++j) dbias->data[j] += dyi[j];
    }
  }
}

Tensor gelu(const Tensor& x) {
  Tensor y(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) {
    double v = x.data[i];
    double t = std::tanh(kGeluC * (v + kGeluA * v * v * v));
    y.data[i] = 0.5 * v * (1.0 + t);
  }
  return y;
}

void gelu_backward(const Tensor& x, const Tensor& dy, Tensor* dx) {
  LPB_CHECK(x.same_shape(dy));
  *dx = Tensor(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) {
    double v = x.data[i];
    double u = kGeluC * (v + kGeluA * v * v * v);
    double t = std::tanh(u);
    double du = kGeluC * (1.0 + 3.0 * kGeluA * v * v);
    double g = 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * du;
    dx->data[i] = dy.data[i] * g;
  }
}

Tensor dropout(const Tensor& x, double rate, Rng& rng, bool train,
               Tensor* mask) {
  LPB_CHECK_MSG(rate >= 0.0 && rate < 1.0, "dropout rate must be in [0,1)");
  if (!train || rate == 0.0) {
    if (mask) {
      *mask = Tensor(x.shape);
      mask->fill(1.0);
    }
    return x;
  }
  double keep_scale = 1.0 / (1.0 - rate);
  Tensor y(x.shape);
  Tensor m(x.shape);
  for (size_t i = 0; i < x.data.size(); ++i) {
    double s = rng.uniform() < rate ? 0.0 : keep_scale;
    m.data[i] = s;
    y.data[i] = x.data[i] * s;
  }
  if (mask) *mask = std::move(m);
  return y;
}

void dropout_backward(const Tensor& mask, const Tensor& dy, Tensor* dx) {
  LPB_CHECK(mask.same_shape(dy));
  *dx = Tensor(dy.shape);
  for (size_t i = 0; i < dy.data.size(); ++i) {
    dx->data[i] = dy.data[i] * mask.data[i];
  }
}

Tensor sinusoidal_encode(double h_frac, int dim) {
  return Tensor::row(
      tensor_row(sinusoidal_encode_batch({h_frac}, dim), 0));
}

Tensor sinusoidal_encode_batch(const std::vector<double>& h_fracs, int dim) {
  LPB_CHECK_MSG(dim > 0 && dim % 2 == 0, "sinusoidal dim must be even");
  int half = dim / 2;
  Tensor out({static_cast<int64_t>(h_fracs.size()), dim});
  for (size_t r = 0; r < h_fracs.size(); ++r) {
    double* o = out.row_ptr(r);
    for (int k = 0; k < half; ++k) {
      double freq = std::pow(10000.0, -2.0 * k / static_cast<double>(dim));
      double v = h_fracs[r] * freq;
      o[2 * k] = std::sin(v);
      o[2 * k + 1] = std::cos(v);
    }
  }
  return out;
}

Tensor adaln_zero_forward(const Tensor& h, const Tensor& c, const Tensor& wg,
                          const Tensor& bg, const Tensor& wb, const Tensor& bb,
                          AdalnCache* cache) {
  LPB_CHECK_MSG(c.cols() == wg.rows() && c.cols() == wb.rows() &&
                    wg.cols() == h.cols() && wb.cols() == h.cols() &&
                    h.rows() == c.rows(),
                "adaln shape mismatch");
  Tensor gamma = linear_forward(c, wg, bg);
  Tensor beta = linear_forward(c, wb, bb);
  Tensor y({h.rows(), h.cols()});
  for (size_t i = 0; i < y.data.size(); ++i) {
    y.data[i] = h.data[i] * (1.0 + gamma.data[i]) + beta.data[i];
  }
  if (cache) {
    cache->h = h;
    cache->c = c;
    cache->gamma = std::move(gamma);
  }
  return y;
}

void adaln_zero_backward(const AdalnCache& cache, const Tensor& wg,
                         const Tensor& wb, const Tensor& dy, Tensor* dh,
                         Tensor* dc, Tensor* dwg, Tensor* dbg, Tensor* dwb,
                         Tensor* dbb) {
  Tensor dgamma(dy.shape);
  for (size_t i = 0; i < dy.data.size(); ++i) {
    dgamma.data[i] = dy.data[i] * cache.h.data[i];
  }
  if (dh) {
    *dh = Tensor(dy.shape);
    for (size_t i = 0; i < dy.data.size(); ++i) {
      dh->data[i] = dy.data[i] * (1.0 + cache.gamma.data[i]);
    }
  }
  Tensor dc_g, dc_b;
  linear_backward(cache.c, wg, dgamma, dc ? &dc_g : nullptr, dwg, dbg);
  linear_backward(cache.c, wb, dy, dc ? &dc_b : nullptr, dwb, dbb);
  if (dc) {
    *dc = std::move(dc_g);
    tensor_axpy(1.0, dc_b, dc);
  }
}

}  // namespace lpb
