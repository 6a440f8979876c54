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

#include "lpb/smallalg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpb/check.h"

namespace lpb {

std::vector<double> symmetric_eigenvalues(const Tensor& a, Tensor* v) {
  LPB_CHECK(a.rank() == 2 && a.rows() == a.cols());
  int64_t n = a.rows();
  Tensor m = a;
  if (v) {
    *v = Tensor({n, n});
    for (int64_t i = 0; i < n; ++i) v->at(i, i) = 1.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int64_t p = 0; p < n; ++p)
      for (int64_t q = p + 1; q < n; ++q) off += m.at(p, q) * m.at(p, q);
    if (off < 1e-26 * n * n) break;
    for (int64_t p = 0; p < n; ++p) {
      for (int64_t q = p + 1; q < n; ++q) {
        double apq = m.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int64_t i = 0; i < n; ++i) {
          double mip = m.at(i, p), miq = m.at(i, q);
          m.at(i, p) = c * mip - s * miq;
          m.at(i, q) = s * mip + c * miq;
        }
        for (int64_t j = 0; j < n; ++j) {
          double mpj = m.at(p, j), mqj = m.at(q, j);
          m.at(p, j) = c * mpj - s * mqj;
          m.at(q, j) = s * mpj + c * mqj;
        }
        if (v) {
          for (int64_t i = 0; i < n; ++i) {
            double vip = v->at(i, p), viq = v->at(i, q);
            v->at(i, p) = c * vip - s * viq;
            v->at(i, q) = s * vip + c * viq;
          }
        }
      }
    }
  }
  std::vector<double> evals(n);
  for (int64_t i = 0; i < n; ++i) evals[i] = m.at(i, i);
  if (v) {
    // Sort ascending, permuting eigenvector columns alongside.
    std::vector<int64_t> order(n);
    for (int64_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int64_t x, int64_t y) { return evals[x] < evals[y]; });
    std::vector<double> sorted(n);
    Tensor vs({n, n});
    for (int64_t j = 0; j < n; ++j) {
      sorted[j] = evals[order[j]];
      for (int64_t i = 0; i < n; ++i) vs.at(i, j) = v->at(i, order[j]);
    }
    *v = vs;
    return sorted;
  }
  std::sort(evals.begin(), evals.end());
  return evals;
}

std::vector<double> singular_values(const Tensor& a) {
  LPB_CHECK(a.rank() == 2);
  int64_t m = a.rows(), n = a.cols();
  LPB_CHECK_MSG(m >= n, "singular_values expects a tall matrix");
  Tensor ata({n, n});
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = i; j < n; ++j) {
      double s = 0.0;
      for (int64_t r = 0; r < m; ++r) s += a.at(r, i) * a.at(r, j);
      ata.at(i, j) = s;
      ata.at(j, i) = s;
    }
  }
  std::vector<double> evals = symmetric_eigenvalues(ata);
  std::vector<double> sv(n);
  for (int64_t i = 0; i < n; ++i) {
    sv[n - 1 - i] = std::sqrt(std::max(0.0, evals[i]));
  }
  return sv;  // descending
}

double condition_number(const std::vector<double>& singular, double tol) {
  if (singular.empty()) return std::numeric_limits<double>::infinity();
  double smax = singular.front(), smin = singular.back();
  if (smin <= tol * std::max(1.0, smax)) {
    return std::numeric_limits<double>::infinity();
  }
  return smax / smin;
}

bool solve_linear(Tensor a, std::vector<double> b, std::vector<double>* x) {
  LPB_CHECK(a.rank() == 2 && a.rows() == a.cols());
  int64_t n = a.rows();
  LPB_CHECK(static_cast<int64_t>(b.size()) == n);
  for (int64_t col = 0; col < n; ++col) {
    int64_t pivot = col;
    for (int64_t r = col + 1; r < n; ++r) {
      if (std::abs(a.at(r, col)) > std::abs(a.at(pivot, col))) pivot = r;
    }
    if (std::abs(a.at(pivot, col)) < 1e-14) return false;
    if (pivot != col) {
      for (int64_t j = 0; j < n; ++j) std::swap(a.at(pivot, j), a.at(col, j));
      std::swap(b[pivot], b[col]);
    }
    for (int64_t r = col + 1; r < n; ++r) {
      double f = a.at(r, col) / a.at(col, col);
      for (int64_t j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
      b[r] -= f * b[col];
    }
  }
  x->assign(n, 0.0);
  for (int64_t r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int64_t j = r + 1; j < n; ++j) s -= a.at(r, j) * (*x)[j];
    (*x)[r] = s / a.at(r, r);
  }
  return true;
}

void mean_and_covariance(const Tensor& z, std::vector<double>* mean,
                         Tensor* cov) {
  LPB_CHECK(z.rank() == 2);
  int64_t n = z.rows(), d = z.cols();
  LPB_CHECK_MSG(n >= 2, "covariance undefined for a batch of 1");
  mean->assign(d, 0.0);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < d; ++j) (*mean)[j] += z.at(i, j);
  }
  for (int64_t j = 0; j < d; ++j) (*mean)[j] /= static_cast<double>(n);
  *cov = Tensor({d, d});
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t a = 0; a < d; ++a) {
      double ya = z.at(i, a) - (*mean)[a];
      for (int64_t b = a; b < d; ++b) {
        cov->at(a, b) += ya * (z.at(i, b) - (*mean)[b]);
      }
    }
  }
  for (int64_t a = 0; a < d; ++a) {
    for (int64_t b = a; b < d; ++b) {
      cov->at(a, b) /= static_cast<double>(n);
      cov->at(b, a) = cov->at(a, b);
    }
  }
}

void whiten_rows(Tensor* z) {
  std::vector<double> mean;
  Tensor cov;
  mean_and_covariance(*z, &mean, &cov);
  Tensor v;
  std::vector<double> evals = symmetric_eigenvalues(cov, &v);
  int64_t d = z->cols();
  // W = V diag(1/sqrt(lambda)) V^T
  Tensor w({d, d});
  for (int64_t i = 0; i < d; ++i) {
    for (int64_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (int64_t k = 0; k < d; ++k) {
        double lam = std::max(evals[k], 1e-300);
        s += v.at(i, k) * v.at(j, k) / std::sqrt(lam);
      }
      w.at(i, j) = s;
    }
  }
  for (int64_t r = 0; r < z->rows(); ++r) {
    std::vector<double> y(d, 0.0);
    for (int64_t i = 0; i < d; ++i) {
      double c = z->at(r, i) - mean[i];
      for (int64_t j = 0; j < d; ++j) y[j] += c * w.at(i, j);
    }
    for (int64_t j = 0; j < d; ++j) z->at(r, j) = y[j];
  }
}

}  // namespace lpb
