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

#ifndef LPB_RNG_H_
#define LPB_RNG_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace lpb {

// Counter-based generator (Philox 4x32-10) with named, splittable streams.
// Every component draws from its own derived stream, so adding a consumer
// never perturbs the draws seen by another.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  // Independent stream identified by name (e.g. "world_model").
  Rng stream(std::string_view name) const;
  // Independent numbered substream (e.g. one per episode).
  Rng split(uint64_t index) const;

  uint32_t next_u32();
  uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  int64_t uniform_int(int64_t n);
  // Standard normal (Box-Muller).
  double gaussian();
  void fill_gaussian(double* out, int64_t n);
  std::vector<double> gaussian_vector(int64_t n);

 private:
  Rng(std::array<uint32_t, 2> key);
  Rng derive(uint64_t salt) const;
  void refill();

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> counter_{};
  std::array<uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool has_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

// FNV-1a over a byte range; also used for artifact checksums.
uint64_t fnv1a64(const void* data, size_t n, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t splitmix64(uint64_t x);

}  // namespace lpb

#endif  // LPB_RNG_H_
