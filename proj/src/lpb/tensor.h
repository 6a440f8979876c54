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

#ifndef LPB_TENSOR_H_
#define LPB_TENSOR_H_

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace lpb {

// Dense row-major tensor. Double precision in memory; checkpoints store f32.
struct Tensor {
  std::vector<double> data;
  std::vector<int64_t> shape;

  Tensor() = default;
  Tensor(std::initializer_list<int64_t> s, double fill = 0.0);
  explicit Tensor(std::vector<int64_t> s, double fill = 0.0);

  static Tensor zeros(std::initializer_list<int64_t> s) { return Tensor(s); }
  static Tensor row(const std::vector<double>& v);  // [1, n]

  int64_t numel() const;
  int rank() const { return static_cast<int>(shape.size()); }
  int64_t dim(int i) const { return shape[i]; }
  // 2-D accessors.
  int64_t rows() const { return shape.empty() ? 0 : shape[0]; }
  int64_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }
  double* row_ptr(int64_t r) { return data.data() + r * cols(); }
  const double* row_ptr(int64_t r) const { return data.data() + r * cols(); }
  double& at(int64_t i, int64_t j) { return data[i * cols() + j]; }
  double at(int64_t i, int64_t j) const { return data[i * cols() + j]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  bool all_finite() const;
  void fill(double v);
};

// In-place elementwise helpers shared across modules.
void tensor_axpy(double a, const Tensor& x, Tensor* y);  // y += a*x
double tensor_sqnorm(const Tensor& x);

double sqdist(const double* a, const double* b, int64_t n);
double sqnorm(const double* a, int64_t n);

// [m,na] ++ [m,nb] -> [m,na+nb]
Tensor concat_cols(const Tensor& a, const Tensor& b);
std::vector<double> tensor_row(const Tensor& t, int64_t r);
void set_tensor_row(Tensor* t, int64_t r, const double* v);

}  // namespace lpb

#endif  // LPB_TENSOR_H_
