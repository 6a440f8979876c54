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

#ifndef LPB_TESTS_TESTUTIL_H_
#define LPB_TESTS_TESTUTIL_H_

#include <cmath>
#include <functional>
#include <string>

#include "lpb/rng.h"
#include "lpb/tensor.h"

namespace lpb::test {

// Central finite differences of a scalar functional with respect to every
// entry of *x. Returns ||g_analytic - g_fd|| / max(||g_fd||, tiny). The
// independent oracle for every gradient in this codebase.
inline double fd_rel_err(const std::function<double()>& loss, Tensor* x,
                         const Tensor& analytic, double step = 1e-4) {
  Tensor fd(x->shape);
  for (size_t i = 0; i < x->data.size(); ++i) {
    double keep = x->data[i];
    x->data[i] = keep + step;
    double up = loss();
    x->data[i] = keep - step;
    double down = loss();
    x->data[i] = keep;
    fd.data[i] = (up - down) / (2.0 * step);
  }
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < fd.data.size(); ++i) {
    double d = analytic.data[i] - fd.data[i];
    num += d * d;
    den += fd.data[i] * fd.data[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

inline Tensor random_tensor(std::initializer_list<int64_t> shape, Rng& rng,
                            double scale = 1.0) {
  Tensor t(shape);
  for (double& v : t.data) v = scale * rng.gaussian();
  return t;
}

inline double dot_all(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

inline std::string temp_path(const std::string& name) {
  return std::string("lpb_test_tmp_") + name;
}

}  // namespace lpb::test

#endif  // LPB_TESTS_TESTUTIL_H_
