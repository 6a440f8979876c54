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

#include "lpb/rng.h"

#include <cmath>

#include "lpb/check.h"

namespace lpb {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  *hi = static_cast<uint32_t>(p >> 32);
  *lo = static_cast<uint32_t>(p);
}

std::array<uint32_t, 4> philox_block(std::array<uint32_t, 4> c,
                                     std::array<uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], &hi0, &lo0);
    mulhilo(kPhiloxM1, c[2], &hi1, &lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

}  // namespace

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(const void* data, size_t n, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

Rng::Rng(uint64_t seed) {
  uint64_t k = splitmix64(seed);
  key_ = {static_cast<uint32_t>(k), static_cast<uint32_t>(k >> 32)};
}

Rng::Rng(std::array<uint32_t, 2> key) : key_(key) {}

Rng Rng::derive(uint64_t salt) const {
  uint64_t parent = (static_cast<uint64_t>(key_[1]) << 32) | key_[0];
  uint64_t child = splitmix64(parent ^ salt);
  return Rng(std::array<uint32_t, 2>{static_cast<uint32_t>(child),
                                     static_cast<uint32_t>(child >> 32)});
}

Rng Rng::stream(std::string_view name) const {
  return derive(fnv1a64(name.data(), name.size()));
}

Rng Rng::split(uint64_t index) const {
  return derive(splitmix64(0x5bd1e995u) ^ index);
}

void Rng::refill() {
  block_ = philox_block(counter_, key_);
  // 128-bit counter increment.
  for (int i = 0; i < 4; ++i) {
    if (++counter_[i] != 0) break;
  }
  block_pos_ = 0;
}

uint32_t Rng::next_u32() {
  if (block_pos_ == 4) refill();
  return block_[block_pos_++];
}

uint64_t Rng::next_u64() {
  uint64_t lo = next_u32();
  uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int64_t Rng::uniform_int(int64_t n) {
  LPB_CHECK_MSG(n > 0, "uniform_int needs positive range");
  // Rejection-free for our ranges (n << 2^63); modulo bias negligible only
  // for tiny n, so reject the tail properly.
  uint64_t limit = UINT64_MAX - UINT64_MAX % static_cast<uint64_t>(n);
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return static_cast<int64_t>(v % static_cast<uint64_t>(n));
}

double Rng::gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // u1 in (0, 1] so the log is finite.
  double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  cached_gaussian_ = r * std::sin(theta);
  has_cached_gaussian_ = true;
  return r * std::cos(theta);
}

void Rng::fill_gaussian(double* out, int64_t n) {
  for (int64_t i = 0; i < n; ++i) out[i] = gaussian();
}

std::vector<double> Rng::gaussian_vector(int64_t n) {
  std::vector<double> v(n);
  fill_gaussian(v.data(), n);
  return v;
}

}  // namespace lpb
