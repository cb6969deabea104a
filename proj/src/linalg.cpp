// Copyright 2026 The pdhgnet Authors
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

#include "pdhgnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "pdhgnet/error.hpp"

namespace pdhgnet {

SparseMatrix SparseMatrix::FromCsr(Index rows, Index cols,
                                   std::vector<Index> row_offsets,
                                   std::vector<Index> col_indices,
                                   std::vector<double> values) {
  if (rows < 0 || cols < 0) ThrowUsage("negative matrix dimension");
  if (static_cast<Index>(row_offsets.size()) != rows + 1) {
    ThrowUsage("row_offsets must have rows+1 entries");
  }
  if (row_offsets.front() != 0) ThrowUsage("row_offsets[0] must be 0");
  if (col_indices.size() != values.size()) {
    ThrowUsage("col_indices and values differ in length");
  }
  if (row_offsets.back() != static_cast<Index>(values.size())) {
    ThrowUsage("row_offsets[rows] must equal nnz");
  }
  for (Index r = 0; r < rows; ++r) {
    if (row_offsets[r + 1] < row_offsets[r]) {
      ThrowUsage("row_offsets must be nondecreasing");
    }
    for (Index p = row_offsets[r]; p < row_offsets[r + 1]; ++p) {
      if (col_indices[p] < 0 || col_indices[p] >= cols) {
        ThrowUsage("column index out of range in row " + std::to_string(r));
      }
      if (p > row_offsets[r] && col_indices[p] <= col_indices[p - 1]) {
        ThrowUsage("column indices must be strictly increasing in row " +
                   std::to_string(r));
      }
      if (!std::isfinite(values[p])) {
        ThrowUsage("non-finite matrix value in row " + std::to_string(r));
      }
    }
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_ = std::move(row_offsets);
  m.col_indices_ = std::move(col_indices);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::FromTriplets(Index rows, Index cols,
                                        std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      ThrowUsage("triplet index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<Index> offsets(rows + 1, 0);
  std::vector<Index> indices;
  std::vector<double> values;
  indices.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    double sum = 0.0;
    std::size_t j = i;
    for (; j < triplets.size() && triplets[j].row == t.row &&
           triplets[j].col == t.col;
         ++j) {
      sum += triplets[j].value;
    }
    indices.push_back(t.col);
    values.push_back(sum);
    ++offsets[t.row + 1];
    i = j;
  }
  for (Index r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  return FromCsr(rows, cols, std::move(offsets), std::move(indices),
                 std::move(values));
}

SparseMatrix SparseMatrix::Identity(Index n) {
  std::vector<Index> offsets(n + 1);
  std::vector<Index> indices(n);
  for (Index i = 0; i <= n; ++i) offsets[i] = i;
  for (Index i = 0; i < n; ++i) indices[i] = i;
  return FromCsr(n, n, std::move(offsets), std::move(indices),
                 std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::Scaled(double alpha) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= alpha;
  return m;
}

SparseMatrix SparseMatrix::WithValues(std::vector<double> values) const {
  if (values.size() != values_.size()) ThrowUsage("value count mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) ThrowUsage("non-finite matrix value");
  }
  SparseMatrix m = *this;
  m.values_ = std::move(values);
  return m;
}

DenseMatrix::DenseMatrix(Index rows, Index cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {
  if (rows < 0 || cols < 0) ThrowUsage("negative matrix dimension");
}

DenseMatrix::DenseMatrix(Index rows, Index cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows < 0 || cols < 0) ThrowUsage("negative matrix dimension");
  if (static_cast<Index>(values_.size()) != rows * cols) {
    ThrowUsage("dense storage length does not match rows*cols");
  }
}

Vector DenseMatrix::Column(Index c) const {
  Vector out(rows_);
  for (Index r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void DenseMatrix::SetColumn(Index c, std::span<const double> v) {
  if (static_cast<Index>(v.size()) != rows_) ThrowUsage("column length");
  for (Index r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Vector Spmv(const SparseMatrix& a, std::span<const double> x) {
  if (static_cast<Index>(x.size()) != a.cols()) {
    ThrowUsage("spmv: vector length " + std::to_string(x.size()) +
               " does not match " + std::to_string(a.cols()) + " columns");
  }
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  Vector y(a.rows());
  for (Index r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) {
      acc += vals[p] * x[cols[p]];
    }
    y[r] = acc;
  }
  return y;
}

Vector SpmvT(const SparseMatrix& a, std::span<const double> y) {
  if (static_cast<Index>(y.size()) != a.rows()) {
    ThrowUsage("spmv_t: vector length " + std::to_string(y.size()) +
               " does not match " + std::to_string(a.rows()) + " rows");
  }
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  Vector x(a.cols(), 0.0);
  for (Index r = 0; r < a.rows(); ++r) {
    const double yr = y[r];
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) {
      x[cols[p]] += vals[p] * yr;
    }
  }
  return x;
}

DenseMatrix Spmm(const SparseMatrix& a, const DenseMatrix& x) {
  if (x.rows() != a.cols()) ThrowUsage("spmm: inner dimension mismatch");
  const Index k = x.cols();
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  DenseMatrix out(a.rows(), k);
  for (Index r = 0; r < a.rows(); ++r) {
    auto acc = out.row(r);
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) {
      const double v = vals[p];
      const auto src = x.row(cols[p]);
      for (Index j = 0; j < k; ++j) acc[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix SpmmT(const SparseMatrix& a, const DenseMatrix& y) {
  if (y.rows() != a.rows()) ThrowUsage("spmm_t: inner dimension mismatch");
  const Index k = y.cols();
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  DenseMatrix out(a.cols(), k);
  for (Index r = 0; r < a.rows(); ++r) {
    const auto src = y.row(r);
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) {
      const double v = vals[p];
      auto dst = out.row(cols[p]);
      for (Index j = 0; j < k; ++j) dst[j] += v * src[j];
    }
  }
  return out;
}

DenseMatrix MatMul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) ThrowUsage("matmul: inner dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    const auto ai = a.row(i);
    for (Index p = 0; p < a.cols(); ++p) {
      const double v = ai[p];
      if (v == 0.0) continue;
      const auto bp = b.row(p);
      for (Index j = 0; j < b.cols(); ++j) dst[j] += v * bp[j];
    }
  }
  return out;
}

DenseMatrix MatMulTransA(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) ThrowUsage("matmul_ta: row count mismatch");
  DenseMatrix out(a.cols(), b.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    const auto ar = a.row(r);
    const auto br = b.row(r);
    for (Index i = 0; i < a.cols(); ++i) {
      const double v = ar[i];
      if (v == 0.0) continue;
      auto dst = out.row(i);
      for (Index j = 0; j < b.cols(); ++j) dst[j] += v * br[j];
    }
  }
  return out;
}

DenseMatrix MatMulTransB(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) ThrowUsage("matmul_tb: column count mismatch");
  DenseMatrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    auto dst = out.row(i);
    for (Index j = 0; j < b.rows(); ++j) {
      const auto bj = b.row(j);
      double acc = 0.0;
      for (Index p = 0; p < a.cols(); ++p) acc += ai[p] * bj[p];
      dst[j] = acc;
    }
  }
  return out;
}

Vector MatVec(const DenseMatrix& a, std::span<const double> v) {
  if (static_cast<Index>(v.size()) != a.cols()) {
    ThrowUsage("matvec: length mismatch");
  }
  Vector out(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    double acc = 0.0;
    for (Index j = 0; j < a.cols(); ++j) acc += ai[j] * v[j];
    out[i] = acc;
  }
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) ThrowUsage("dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double SquaredNorm(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

double Norm2(std::span<const double> a) { return std::sqrt(SquaredNorm(a)); }

double NormInf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) ThrowUsage("distance: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

bool AllFinite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(),
                     [](double v) { return std::isfinite(v); });
}

SpectralNormEstimate EstimateSpectralNorm(const SparseMatrix& a,
                                          double rel_tol, int max_iter) {
  if (a.rows() == 0 || a.cols() == 0) ThrowUsage("spectral norm of empty matrix");
  if (!(rel_tol > 0.0)) ThrowUsage("rel_tol must be positive");
  if (max_iter < 1) ThrowUsage("max_iter must be at least 1");
  SpectralNormEstimate est;
  if (NormInf(a.values()) == 0.0) {
    est.zero_matrix = true;
    return est;
  }

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(a.cols());
  for (double& e : v) e = unif(rng);
  double nv = Norm2(v);
  for (double& e : v) e /= nv;

  // Stop on a relative change well below rel_tol: the change between sweeps
  // underestimates the remaining error when the top singular values are close.
  const double stop = 1e-2 * rel_tol;
  double sigma = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const Vector w = Spmv(a, v);
    const double next = Norm2(w);
    est.iterations = it;
    Vector z = SpmvT(a, w);
    const double nz = Norm2(z);
    if (nz == 0.0) {
      // Start vector in the null space; restart from a coordinate direction.
      std::fill(v.begin(), v.end(), 0.0);
      v[it % v.size()] = 1.0;
      continue;
    }
    const bool converged = std::abs(next - sigma) <= stop * next;
    sigma = std::max(sigma, next);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = z[i] / nz;
    if (converged) break;
  }
  est.value = sigma;
  return est;
}

}  // namespace pdhgnet
