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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <vector>

#include "lpb/kernels.h"
#include "lpb/rng.h"
#include "lpb/threadpool.h"

namespace lpb {
namespace {

std::vector<double> random_vec(int64_t n, Rng& rng) {
  std::vector<double> v(n);
  rng.fill_gaussian(v.data(), n);
  return v;
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1.0});
    m = std::max(m, std::abs(a[i] - b[i]) / scale);
  }
  return m;
}

TEST_CASE("simd variants match the scalar reference") {
  Rng rng(7);
  auto impls = kernels::available();
  INFO("active impl: " << kernels::active_name());
  // Includes non-multiple-of-width tails on purpose.
  for (auto [m, k, n] : std::vector<std::tuple<int, int, int>>{
           {1, 1, 1}, {3, 5, 7}, {17, 33, 9}, {64, 64, 64}, {5, 130, 31}}) {
    auto a = random_vec(int64_t{1} * m * k, rng);
    auto b_nn = random_vec(int64_t{1} * k * n, rng);
    auto b_nt = random_vec(int64_t{1} * n * k, rng);
    auto a_tn = random_vec(int64_t{1} * k * m, rng);
    std::vector<double> ref_nn(m * n), ref_nt(m * n), ref_tn(m * n);
    kernels::available()[0]->gemm_nn(a.data(), b_nn.data(), ref_nn.data(), m, k, n);
    kernels::available()[0]->gemm_nt(a.data(), b_nt.data(), ref_nt.data(), m, k, n);
    kernels::available()[0]->gemm_tn(a_tn.data(), b_nn.data(), ref_tn.data(), m, k, n);
    for (const kernels::Impl* impl : impls) {
      CAPTURE(impl->name);
      std::vector<double> out(m * n, -1.0);
      impl->gemm_nn(a.data(), b_nn.data(), out.data(), m, k, n);
      CHECK(max_rel_diff(out, ref_nn) < 1e-12);
      impl->gemm_nt(a.data(), b_nt.data(), out.data(), m, k, n);
      CHECK(max_rel_diff(out, ref_nt) < 1e-12);
      impl->gemm_tn(a_tn.data(), b_nn.data(), out.data(), m, k, n);
      CHECK(max_rel_diff(out, ref_tn) < 1e-12);
    }
  }
}

TEST_CASE("vector op variants match scalar") {
  Rng rng(11);
  for (int64_t n : {1, 5, 8, 129}) {
    auto x = random_vec(n, rng);
    auto y0 = random_vec(n, rng);
    const auto impls = kernels::available();
    const kernels::Impl* ref = impls[0];
    std::vector<double> yref = y0;
    ref->axpy(0.37, x.data(), yref.data(), n);
    double dref = ref->dot(x.data(), y0.data(), n);
    double sref = ref->sqnorm(x.data(), n);
    std::vector<double> cref(n);
    ref->col_sums(x.data(), cref.data(), 1, n);
    for (const kernels::Impl* impl : impls) {
      CAPTURE(impl->name);
      std::vector<double> y = y0;
      impl->axpy(0.37, x.data(), y.data(), n);
      CHECK(max_rel_diff(y, yref) < 1e-12);
      CHECK(impl->dot(x.data(), y0.data(), n) ==
            doctest::Approx(dref).epsilon(1e-12));
      CHECK(impl->sqnorm(x.data(), n) == doctest::Approx(sref).epsilon(1e-12));
      std::vector<double> c(n);
      impl->col_sums(x.data(), c.data(), 1, n);
      CHECK(max_rel_diff(c, cref) < 1e-12);
    }
  }
}

TEST_CASE("threaded gemm is identical to single-range gemm") {
  Rng rng(3);
  int64_t m = 257, k = 120, n = 65;  // crosses the threading threshold
  auto a = random_vec(m * k, rng);
  auto b = random_vec(k * n, rng);
  std::vector<double> threaded(m * n), direct(m * n);
  kernels::gemm_nn(a.data(), b.data(), threaded.data(), m, k, n);
  kernels::active().gemm_nn(a.data(), b.data(), direct.data(), m, k, n);
  CHECK(threaded == direct);

  auto at = random_vec(k * m, rng);
  kernels::gemm_tn(at.data(), b.data(), threaded.data(), m, k, n);
  // Reference: per-row axpy accumulation, the same order the pool uses.
  std::fill(direct.begin(), direct.end(), 0.0);
  for (int64_t p = 0; p < k; ++p) {
    for (int64_t i = 0; i < m; ++i) {
      kernels::active().axpy(at[p * m + i], b.data() + p * n,
                             direct.data() + i * n, n);
    }
  }
  CHECK(threaded == direct);
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  ThreadPool::instance().parallel_for(1000, 16, [&](int64_t b, int64_t e) {
    for (int64_t i = b; i < e; ++i) hits[i]++;
  });
  for (int h : hits) CHECK(h == 1);
}

}  // namespace
}  // namespace lpb
