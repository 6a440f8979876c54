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

#ifndef LPB_PARAMS_H_
#define LPB_PARAMS_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "lpb/rng.h"
#include "lpb/tensor.h"

namespace lpb {

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;  // same shape, accumulated
};

// Named parameters with deterministic (insertion) iteration order and
// per-entry gradient accumulators. Owned by exactly one trainer at a time.
class ParamSet {
 public:
  // Returns the index of the new entry; names must be unique.
  int add(const std::string& name, Tensor init);
  bool contains(const std::string& name) const;
  int index_of(const std::string& name) const;

  int size() const { return static_cast<int>(params_.size()); }
  Param& at(int i) { return params_[i]; }
  const Param& at(int i) const { return params_[i]; }
  Param& at(const std::string& name) { return params_[index_of(name)]; }
  const Param& at(const std::string& name) const {
    return params_[index_of(name)];
  }
  Tensor& value(int i) { return params_[i].value; }
  Tensor& grad(int i) { return params_[i].grad; }

  void zero_grads();
  double grad_sqnorm() const;
  int64_t total_numel() const;

  // FNV-1a over the f32 serialization of all values, in order. Used to
  // assert that frozen bundles are never mutated downstream.
  uint64_t value_checksum() const;

 private:
  std::vector<Param> params_;
  std::unordered_map<std::string, int> index_;
};

// Weight initializers (deterministic given the rng state).
Tensor kaiming_init(const std::vector<int64_t>& shape, Rng& rng);
Tensor small_init(const std::vector<int64_t>& shape, double sigma, Rng& rng);

}  // namespace lpb

#endif  // LPB_PARAMS_H_
