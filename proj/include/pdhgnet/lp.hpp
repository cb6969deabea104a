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

#ifndef PDHGNET_LP_HPP_
#define PDHGNET_LP_HPP_

// Standard-form LP
//   min c^T x  s.t.  G x >= h,  l <= x <= u
// with saddle-point Lagrangian L(x, y) = c^T x - y^T G x + h^T y, y >= 0.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pdhgnet/linalg.hpp"

namespace pdhgnet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LpInstance {
  SparseMatrix g;  // m x n
  Vector c;        // n
  Vector h;        // m
  Vector l;        // n, entries may be -inf
  Vector u;        // n, entries may be +inf
  std::string name;

  Index num_vars() const { return g.cols(); }
  Index num_cons() const { return g.rows(); }

  // Throws kUsage if dimensions or bound/finiteness invariants are violated.
  void Validate() const;
};

enum class RowSense { kLe, kEq, kGe };

// An LP with mixed row senses, as read from external formats.
struct GeneralLp {
  SparseMatrix a;
  std::vector<RowSense> senses;
  Vector rhs;
  Vector c;
  Vector l;
  Vector u;
  double objective_offset = 0.0;
  std::string name;

  void Validate() const;
};

// Rewrites every row as >=: LE rows are negated, EQ rows become the pair
// (row >= rhs, -row >= -rhs) in place, GE rows are copied.
LpInstance Canonicalize(const GeneralLp& g);

double Lagrangian(const LpInstance& inst, std::span<const double> x,
                  std::span<const double> y);

// L(candidate_x, ref_y) - L(ref_x, candidate_y). The reference must be
// feasible for the simple constraints (l <= ref_x <= u, ref_y >= 0).
double PrimalDualGap(const LpInstance& inst, std::span<const double> cand_x,
                     std::span<const double> cand_y,
                     std::span<const double> ref_x,
                     std::span<const double> ref_y);

struct KktReport {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rel_gap = 0.0;
  double objective = 0.0;
  double dual_objective = 0.0;

  double MaxResidual() const;
};

KktReport KktResiduals(const LpInstance& inst, std::span<const double> x,
                       std::span<const double> y);
// Same as KktResiduals with precomputed G x and G^T y.
KktReport KktResidualsFromProducts(const LpInstance& inst,
                                   std::span<const double> x,
                                   std::span<const double> y,
                                   std::span<const double> gx,
                                   std::span<const double> gty);

// Componentwise median(l, z, u).
Vector ProjectBox(std::span<const double> z, std::span<const double> l,
                  std::span<const double> u);
Vector ProjectNonneg(std::span<const double> z);

}  // namespace pdhgnet

#endif  // PDHGNET_LP_HPP_
