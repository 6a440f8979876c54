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

#include "lpb/tensor.h"

#include <algorithm>
#include <cmath>

#include "lpb/check.h"

namespace lpb {

namespace {
int64_t shape_numel(const std::vector<int64_t>& s) {
  int64_t n = 1;
  for (int64_t d : s) {
    LPB_CHECK_MSG(d > 0, "tensor dimensions must be positive");
    n *= d;
  }
  return n;
}
}  // namespace

Tensor::Tensor(std::initializer_list<int64_t> s, double fill)
    : shape(s) {
  data.assign(shape_numel(shape), fill);
}

Tensor::Tensor(std::vector<int64_t> s, double fill) : shape(std::move(s)) {
  data.assign(shape_numel(shape), fill);
}

Tensor Tensor::row(const std::vector<double>& v) {
  Tensor t({1, static_cast<int64_t>(v.size())});
  t.data = v;
  return t;
}

int64_t Tensor::numel() const {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::fill(double v) { data.assign(data.size(), v); }

void tensor_axpy(double a, const Tensor& x, Tensor* y) {
  LPB_CHECK(x.data.size() == y->data.size());
  for (size_t i = 0; i < x.data.size(); ++i) y->data[i] += a * x.data[i];
}

double tensor_sqnorm(const Tensor& x) { return sqnorm(x.ptr(), x.numel()); }

double sqdist(const double* a, const double* b, int64_t n) {
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double sqnorm(const double* a, int64_t n) {
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

Tensor concat_cols(const Tensor& a, const Tensor& b) {
  LPB_CHECK(a.rank() == 2 && b.rank() == 2 && a.rows() == b.rows());
  Tensor out({a.rows(), a.cols() + b.cols()});
  for (int64_t r = 0; r < a.rows(); ++r) {
    double* o = out.row_ptr(r);
    std::copy(a.row_ptr(r), a.row_ptr(r) + a.cols(), o);
    std::copy(b.row_ptr(r), b.row_ptr(r) + b.cols(), o + a.cols());
  }
  return out;
}

std::vector<double> tensor_row(const Tensor& t, int64_t r) {
  return std::vector<double>(t.row_ptr(r), t.row_ptr(r) + t.cols());
}

void set_tensor_row(Tensor* t, int64_t r, const double* v) {
  std::copy(v, v + t->cols(), t->row_ptr(r));
}

}  // namespace lpb
