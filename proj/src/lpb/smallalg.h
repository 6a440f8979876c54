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

#ifndef LPB_SMALLALG_H_
#define LPB_SMALLALG_H_

#include <vector>

#include "lpb/tensor.h"

namespace lpb {

// Eigenvalues (ascending) of a symmetric matrix via cyclic Jacobi.
// Optionally returns eigenvectors as columns of v.
std::vector<double> symmetric_eigenvalues(const Tensor& a, Tensor* v = nullptr);

// Singular values (descending) of an arbitrary [m,n] matrix, m >= n,
// computed from the eigenvalues of A^T A.
std::vector<double> singular_values(const Tensor& a);

// Condition number sigma_max / sigma_min; +inf when rank deficient.
double condition_number(const std::vector<double>& singular, double tol = 1e-12);

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// Returns false when the matrix is numerically singular.
bool solve_linear(Tensor a, std::vector<double> b, std::vector<double>* x);

// Sample mean and covariance (1/n normalization) of rows of z.
void mean_and_covariance(const Tensor& z, std::vector<double>* mean,
                         Tensor* cov);

// Whitens rows of z in place: subtract mean, multiply by Cov^{-1/2}.
void whiten_rows(Tensor* z);

}  // namespace lpb

#endif  // LPB_SMALLALG_H_
