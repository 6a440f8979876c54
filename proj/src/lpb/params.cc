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

#include "lpb/params.h"

#include <cmath>

#include "lpb/check.h"

namespace lpb {

int ParamSet::add(const std::string& name, Tensor init) {
  LPB_CHECK_MSG(!contains(name), "duplicate parameter name: " + name);
  Param p;
  p.name = name;
  p.grad = Tensor(init.shape);
  p.value = std::move(init);
  params_.push_back(std::move(p));
  int idx = static_cast<int>(params_.size()) - 1;
  index_[name] = idx;
  return idx;
}

bool ParamSet::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

int ParamSet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  LPB_CHECK_MSG(it != index_.end(), "unknown parameter: " + name);
  return it->second;
}

void ParamSet::zero_grads() {
  for (auto& p : params_) p.grad.fill(0.0);
}

double ParamSet::grad_sqnorm() const {
  double s = 0.0;
  for (const auto& p : params_) s += tensor_sqnorm(p.grad);
  return s;
}

int64_t ParamSet::total_numel() const {
  int64_t n = 0;
  for (const auto& p : params_) n += p.value.numel();
  return n;
}

uint64_t ParamSet::value_checksum() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& p : params_) {
    h = fnv1a64(p.name.data(), p.name.size(), h);
    for (double v : p.value.data) {
      float f = static_cast<float>(v);
      h = fnv1a64(&f, sizeof(f), h);
    }
  }
  return h;
}

Tensor kaiming_init(const std::vector<int64_t>& shape, Rng& rng) {
  LPB_CHECK(!shape.empty());
  int64_t fan_in = shape[0];
  double std = std::sqrt(2.0 / static_cast<double>(fan_in));
  Tensor t(shape);
  for (double& v : t.data) v = std * rng.gaussian();
  return t;
}

Tensor small_init(const std::vector<int64_t>& shape, double sigma, Rng& rng) {
  Tensor t(shape);
  for (double& v : t.data) v = sigma * rng.gaussian();
  return t;
}

}  // namespace lpb
