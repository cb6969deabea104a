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

#ifndef PDHGNET_LINALG_HPP_
#define PDHGNET_LINALG_HPP_

// Sparse and dense kernels shared by the solver and the network. Vectors are
// plain std::vector<double>; read-only arguments are taken as spans.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdhgnet {

using Vector = std::vector<double>;
using Index = std::int64_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed sparse row storage with sorted, duplicate-free column indices.
class SparseMatrix {
 public:
  SparseMatrix() : row_offsets_{0} {}

  // Validates every CSR invariant; throws kUsage on violation.
  static SparseMatrix FromCsr(Index rows, Index cols,
                              std::vector<Index> row_offsets,
                              std::vector<Index> col_indices,
                              std::vector<double> values);
  // Entries with equal (row, col) are summed. Explicit zeros are kept.
  static SparseMatrix FromTriplets(Index rows, Index cols,
                                   std::vector<Triplet> triplets);
  static SparseMatrix Identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  // Same pattern, values multiplied by alpha.
  SparseMatrix Scaled(double alpha) const;
  // Same pattern, values replaced.
  SparseMatrix WithValues(std::vector<double> values) const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_;
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

// Row-major dense matrix. Columns are the channel dimension in the network.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, double fill = 0.0);
  DenseMatrix(Index rows, Index cols, std::vector<double> values);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double& operator()(Index r, Index c) { return values_[r * cols_ + c]; }
  double operator()(Index r, Index c) const { return values_[r * cols_ + c]; }
  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }
  std::span<double> row(Index r) {
    return std::span<double>(values_).subspan(r * cols_, cols_);
  }
  std::span<const double> row(Index r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

  Vector Column(Index c) const;
  void SetColumn(Index c, std::span<const double> v);

  bool operator==(const DenseMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> values_;
};

// y = A x, summed left to right over the stored entries of each row.
Vector Spmv(const SparseMatrix& a, std::span<const double> x);
// y = A^T x without forming the transpose.
Vector SpmvT(const SparseMatrix& a, std::span<const double> y);
// Column j of the result is Spmv(a, column j of x).
DenseMatrix Spmm(const SparseMatrix& a, const DenseMatrix& x);
// Column j of the result is SpmvT(a, column j of y).
DenseMatrix SpmmT(const SparseMatrix& a, const DenseMatrix& y);

// Dense products: A*B, A^T*B, A*B^T.
DenseMatrix MatMul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix MatMulTransA(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix MatMulTransB(const DenseMatrix& a, const DenseMatrix& b);
// A * v for a dense matrix and a vector of length A.cols().
Vector MatVec(const DenseMatrix& a, std::span<const double> v);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> a);
double SquaredNorm(std::span<const double> a);
double NormInf(std::span<const double> a);
// ||a - b||_2.
double Distance(std::span<const double> a, std::span<const double> b);
bool AllFinite(std::span<const double> a);

struct SpectralNormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool zero_matrix = false;
};

inline constexpr double kDefaultSpectralRelTol = 1e-4;
inline constexpr int kDefaultSpectralMaxIter = 1000;

// Power iteration on A^T A from a fixed-seed random start. The returned value
// is ||A v|| for a unit v, so it never exceeds ||A||_2.
SpectralNormEstimate EstimateSpectralNorm(
    const SparseMatrix& a, double rel_tol = kDefaultSpectralRelTol,
    int max_iter = kDefaultSpectralMaxIter);

}  // namespace pdhgnet

#endif  // PDHGNET_LINALG_HPP_
