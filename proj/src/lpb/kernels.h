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

#ifndef LPB_KERNELS_H_
#define LPB_KERNELS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace lpb {
namespace kernels {

// Data-parallel inner loops behind the network/planner code. Scalar
// reference implementations plus AVX2/AVX-512 variants chosen once at
// startup from CPUID (override with LPB_KERNELS=scalar|avx2|avx512).
// The variants are equivalence-tested against the scalar reference.
struct Impl {
  const char* name;
  // C[m,n] = A[m,k] * B[k,n], row-major.
  void (*gemm_nn)(const double* a, const double* b, double* c, int64_t m,
                  int64_t k, int64_t n);
  // C[m,n] = A[m,k] * B[n,k]^T.
  void (*gemm_nt)(const double* a, const double* b, double* c, int64_t m,
                  int64_t k, int64_t n);
  // C[m,n] = A[k,m]^T * B[k,n].
  void (*gemm_tn)(const double* a, const double* b, double* c, int64_t m,
                  int64_t k, int64_t n);
  // y[i,:] += b for every row.
  void (*add_bias_rows)(double* y, const double* b, int64_t m, int64_t n);
  // out[j] = sum_i a[i,j].
  void (*col_sums)(const double* a, double* out, int64_t m, int64_t n);
  // y += alpha * x.
  void (*axpy)(double alpha, const double* x, double* y, int64_t n);
  double (*dot)(const double* a, const double* b, int64_t n);
  double (*sqnorm)(const double* a, int64_t n);
  void (*scale)(double* a, double alpha, int64_t n);
};

// Active implementation (dispatched). Large gemms additionally split rows
// across the thread pool; the split never changes results because each
// output row is owned by one thread.
const Impl& active();
const char* active_name();

// All implementations supported on this machine, scalar first.
std::vector<const Impl*> available();

void gemm_nn(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n);
void gemm_nt(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n);
void gemm_tn(const double* a, const double* b, double* c, int64_t m, int64_t k,
             int64_t n);
void add_bias_rows(double* y, const double* b, int64_t m, int64_t n);
void col_sums(const double* a, double* out, int64_t m, int64_t n);
void axpy(double alpha, const double* x, double* y, int64_t n);
double dot(const double* a, const double* b, int64_t n);
double sqnorm(const double* a, int64_t n);
void scale(double* a, double alpha, int64_t n);

}  // namespace kernels
}  // namespace lpb

#endif  // LPB_KERNELS_H_
