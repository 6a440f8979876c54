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

#include "lpb/kernels.h"

#include <cstdlib>
#include <cstring>

#include "lpb/threadpool.h"

#if defined(__x86_64__) || defined(__i386__)
#define LPB_X86 1
#include <immintrin.h>
#else
#define LPB_X86 0
#endif

namespace lpb {
namespace kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels.
// ---------------------------------------------------------------------------
namespace scalar {

void gemm_nn(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    std::memset(ci, 0, sizeof(double) * n);
    const double* ai = a + i * k;
    for (int64_t p = 0; p < k; ++p) {
      double av = ai[p];
      const double* bp = b + p * n;
      for (int64_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void gemm_nt(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* ci = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      double s = 0.0;
      for (int64_t p = 0; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = s;
    }
  }
}

void gemm_tn(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n) {
  std::memset(c, 0, sizeof(double) * m * n);
  for (int64_t p = 0; p < k; ++p) {
    const double* ap = a + p * m;
    const double* bp = b + p * n;
    for (int64_t i = 0; i < m; ++i) {
      double av = ap[i];
      double* ci = c + i * n;
      for (int64_t j = 0; j < n; ++j) ci[j] += av * bp[j];
    }
  }
}

void add_bias_rows(double* y, const double* b, int64_t m, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    double* yi = y + i * n;
    for (int64_t j = 0; j < n; ++j) yi[j] += b[j];
  }
}

void col_sums(const double* a, double* out, int64_t m, int64_t n) {
  std::memset(out, 0, sizeof(double) * n);
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * n;
    for (int64_t j = 0; j < n; ++j) out[j] += ai[j];
  }
}

void axpy(double alpha, const double* x, double* y, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot(const double* a, const double* b, int64_t n) {
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sqnorm(const double* a, int64_t n) { return dot(a, a, n); }

void scale(double* a, double alpha, int64_t n) {
  for (int64_t i = 0; i < n; ++i) a[i] *= alpha;
}

}  // namespace scalar

#if LPB_X86

// ---------------------------------------------------------------------------
// AVX2 + FMA variants. Accumulation order matches the scalar loops along the
// reduction dimension except in gemm_nt/dot, which use 4 partial sums.
// ---------------------------------------------------------------------------
namespace avx2 {

__attribute__((target("avx2,fma"))) void gemm_nn(const double* a,
                                                 const double* b, double* c,
                                                 int64_t m, int64_t k,
                                                 int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    std::memset(ci, 0, sizeof(double) * n);
    const double* ai = a + i * k;
    for (int64_t p = 0; p < k; ++p) {
      __m256d av = _mm256_set1_pd(ai[p]);
      const double* bp = b + p * n;
      int64_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cj = _mm256_loadu_pd(ci + j);
        cj = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp + j), cj);
        _mm256_storeu_pd(ci + j, cj);
      }
      for (; j < n; ++j) ci[j] += ai[p] * bp[j];
    }
  }
}

__attribute__((target("avx2,fma"))) void gemm_nt(const double* a,
                                                 const double* b, double* c,
                                                 int64_t m, int64_t k,
                                                 int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* ci = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      __m256d acc = _mm256_setzero_pd();
      int64_t p = 0;
      for (; p + 4 <= k; p += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(ai + p), _mm256_loadu_pd(bj + p),
                              acc);
      }
      double lane[4];
      _mm256_storeu_pd(lane, acc);
      double s = lane[0] + lane[1] + lane[2] + lane[3];
      for (; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = s;
    }
  }
}

__attribute__((target("avx2,fma"))) void gemm_tn(const double* a,
                                                 const double* b, double* c,
                                                 int64_t m, int64_t k,
                                                 int64_t n) {
  std::memset(c, 0, sizeof(double) * m * n);
  for (int64_t p = 0; p < k; ++p) {
    const double* ap = a + p * m;
    const double* bp = b + p * n;
    for (int64_t i = 0; i < m; ++i) {
      __m256d av = _mm256_set1_pd(ap[i]);
      double* ci = c + i * n;
      int64_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d cj = _mm256_loadu_pd(ci + j);
        cj = _mm256_fmadd_pd(av, _mm256_loadu_pd(bp + j), cj);
        _mm256_storeu_pd(ci + j, cj);
      }
      for (; j < n; ++j) ci[j] += ap[i] * bp[j];
    }
  }
}

__attribute__((target("avx2,fma"))) void add_bias_rows(double* y,
                                                       const double* b,
                                                       int64_t m, int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    double* yi = y + i * n;
    int64_t j = 0;
    for (; j + 4 <= n; j += 4) {
      _mm256_storeu_pd(
          yi + j, _mm256_add_pd(_mm256_loadu_pd(yi + j), _mm256_loadu_pd(b + j)));
    }
    for (; j < n; ++j) yi[j] += b[j];
  }
}

__attribute__((target("avx2,fma"))) void col_sums(const double* a, double* out,
                                                  int64_t m, int64_t n) {
  std::memset(out, 0, sizeof(double) * n);
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * n;
    int64_t j = 0;
    for (; j + 4 <= n; j += 4) {
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j),
                                              _mm256_loadu_pd(ai + j)));
    }
    for (; j < n; ++j) out[j] += ai[j];
  }
}

__attribute__((target("avx2,fma"))) void axpy(double alpha, const double* x,
                                              double* y, int64_t n) {
  __m256d av = _mm256_set1_pd(alpha);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yi = _mm256_loadu_pd(y + i);
    yi = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yi);
    _mm256_storeu_pd(y + i, yi);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

__attribute__((target("avx2,fma"))) double dot(const double* a,
                                               const double* b, int64_t n) {
  __m256d acc = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double lane[4];
  _mm256_storeu_pd(lane, acc);
  double s = lane[0] + lane[1] + lane[2] + lane[3];
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2,fma"))) double sqnorm(const double* a, int64_t n) {
  return avx2::dot(a, a, n);
}

__attribute__((target("avx2,fma"))) void scale(double* a, double alpha,
                                               int64_t n) {
  __m256d av = _mm256_set1_pd(alpha);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(a + i, _mm256_mul_pd(av, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) a[i] *= alpha;
}

}  // namespace avx2

// ---------------------------------------------------------------------------
// AVX-512 variants for the gemms only; everything else reuses AVX2.
// ---------------------------------------------------------------------------
namespace avx512 {

__attribute__((target("avx512f"))) void gemm_nn(const double* a,
                                                const double* b, double* c,
                                                int64_t m, int64_t k,
                                                int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    std::memset(ci, 0, sizeof(double) * n);
    const double* ai = a + i * k;
    for (int64_t p = 0; p < k; ++p) {
      __m512d av = _mm512_set1_pd(ai[p]);
      const double* bp = b + p * n;
      int64_t j = 0;
      for (; j + 8 <= n; j += 8) {
        __m512d cj = _mm512_loadu_pd(ci + j);
        cj = _mm512_fmadd_pd(av, _mm512_loadu_pd(bp + j), cj);
        _mm512_storeu_pd(ci + j, cj);
      }
      for (; j < n; ++j) ci[j] += ai[p] * bp[j];
    }
  }
}

__attribute__((target("avx512f"))) void gemm_nt(const double* a,
                                                const double* b, double* c,
                                                int64_t m, int64_t k,
                                                int64_t n) {
  for (int64_t i = 0; i < m; ++i) {
    const double* ai = a + i * k;
    double* ci = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const double* bj = b + j * k;
      __m512d acc = _mm512_setzero_pd();
      int64_t p = 0;
      for (; p + 8 <= k; p += 8) {
        acc = _mm512_fmadd_pd(_mm512_loadu_pd(ai + p), _mm512_loadu_pd(bj + p),
                              acc);
      }
      double s = _mm512_reduce_add_pd(acc);
      for (; p < k; ++p) s += ai[p] * bj[p];
      ci[j] = s;
    }
  }
}

__attribute__((target("avx512f"))) void gemm_tn(const double* a,
                                                const double* b, double* c,
                                                int64_t m, int64_t k,
                                                int64_t n) {
  std::memset(c, 0, sizeof(double) * m * n);
  for (int64_t p = 0; p < k; ++p) {
    const double* ap = a + p * m;
    const double* bp = b + p * n;
    for (int64_t i = 0; i < m; ++i) {
      __m512d av = _mm512_set1_pd(ap[i]);
      double* ci = c + i * n;
      int64_t j = 0;
      for (; j + 8 <= n; j += 8) {
        __m512d cj = _mm512_loadu_pd(ci + j);
        cj = _mm512_fmadd_pd(av, _mm512_loadu_pd(bp + j), cj);
        _mm512_storeu_pd(ci + j, cj);
      }
      for (; j < n; ++j) ci[j] += ap[i] * bp[j];
    }
  }
}

}  // namespace avx512

#endif  // LPB_X86

namespace {

const Impl kScalarImpl = {
    "scalar",        scalar::gemm_nn, scalar::gemm_nt, scalar::gemm_tn,
    scalar::add_bias_rows, scalar::col_sums, scalar::axpy, scalar::dot,
    scalar::sqnorm,  scalar::scale,
};

#if LPB_X86
const Impl kAvx2Impl = {
    "avx2",        avx2::gemm_nn, avx2::gemm_nt, avx2::gemm_tn,
    avx2::add_bias_rows, avx2::col_sums, avx2::axpy, avx2::dot,
    avx2::sqnorm,  avx2::scale,
};

const Impl kAvx512Impl = {
    "avx512",      avx512::gemm_nn, avx512::gemm_nt, avx512::gemm_tn,
    avx2::add_bias_rows, avx2::col_sums, avx2::axpy, avx2::dot,
    avx2::sqnorm,  avx2::scale,
};
#endif

const Impl* select_impl() {
#if LPB_X86
  bool has_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  bool has_avx512 = has_avx2 && __builtin_cpu_supports("avx512f");
  if (const char* env = std::getenv("LPB_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &kScalarImpl;
    if (std::strcmp(env, "avx2") == 0 && has_avx2) return &kAvx2Impl;
    if (std::strcmp(env, "avx512") == 0 && has_avx512) return &kAvx512Impl;
  }
  if (has_avx512) return &kAvx512Impl;
  if (has_avx2) return &kAvx2Impl;
#endif
  return &kScalarImpl;
}

const Impl* g_impl = select_impl();

// Threshold below which threading a gemm is not worth the handoff.
constexpr int64_t kGemmThreadFlops = 1 << 20;

}  // namespace

const Impl& active() { return *g_impl; }
const char* active_name() { return g_impl->name; }

std::vector<const Impl*> available() {
  std::vector<const Impl*> impls = {&kScalarImpl};
#if LPB_X86
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    impls.push_back(&kAvx2Impl);
    if (__builtin_cpu_supports("avx512f")) impls.push_back(&kAvx512Impl);
  }
#endif
  return impls;
}

void gemm_nn(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n) {
  if (m > 1 && m * k * n >= kGemmThreadFlops) {
    ThreadPool::instance().parallel_for(m, 8, [=](int64_t i0, int64_t i1) {
      g_impl->gemm_nn(a + i0 * k, b, c + i0 * n, i1 - i0, k, n);
    });
  } else {
    g_impl->gemm_nn(a, b, c, m, k, n);
  }
}

void gemm_nt(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n) {
  if (m > 1 && m * k * n >= kGemmThreadFlops) {
    ThreadPool::instance().parallel_for(m, 8, [=](int64_t i0, int64_t i1) {
      g_impl->gemm_nt(a + i0 * k, b, c + i0 * n, i1 - i0, k, n);
    });
  } else {
    g_impl->gemm_nt(a, b, c, m, k, n);
  }
}

void gemm_tn(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n) {
  // Parallel split over output rows i (columns of A); every thread scans all
  // of B but owns its C rows.
  if (m > 1 && m * k * n >= kGemmThreadFlops) {
    ThreadPool::instance().parallel_for(m, 8, [=](int64_t i0, int64_t i1) {
      int64_t mm = i1 - i0;
      std::memset(c + i0 * n, 0, sizeof(double) * mm * n);
      for (int64_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (int64_t i = i0; i < i1; ++i) {
          g_impl->axpy(ap[i], bp, c + i * n, n);
        }
      }
    });
  } else {
    g_impl->gemm_tn(a, b, c, m, k, n);
  }
}

void add_bias_rows(double* y, const double* b, int64_t m, int64_t n) {
  g_impl->add_bias_rows(y, b, m, n);
}

void col_sums(const double* a, double* out, int64_t m, int64_t n) {
  g_impl->col_sums(a, out, m, n);
}

void axpy(double alpha, const double* x, double* y, int64_t n) {
  g_impl->axpy(alpha, x, y, n);
}

double dot(const double* a, const double* b, int64_t n) {
  return g_impl->dot(a, b, n);
}

double sqnorm(const double* a, int64_t n) { return g_impl->sqnorm(a, n); }

void scale(double* a, double alpha, int64_t n) { g_impl->scale(a, alpha, n); }

}  // namespace kernels
}  // namespace lpb
