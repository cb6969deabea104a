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

#include "pdhgnet/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdhgnet/error.hpp"

namespace pdhgnet {
namespace {

void ValidateBounds(std::span<const double> l, std::span<const double> u) {
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (std::isnan(l[i]) || std::isnan(u[i]) || l[i] == kInf ||
        u[i] == -kInf || l[i] > u[i]) {
      ThrowUsage("invalid bounds for variable " + std::to_string(i));
    }
  }
}

void CheckLength(std::span<const double> v, Index n, const char* what) {
  if (static_cast<Index>(v.size()) != n) {
    ThrowUsage(std::string(what) + " has length " + std::to_string(v.size()) +
               ", expected " + std::to_string(n));
  }
}

}  // namespace

void LpInstance::Validate() const {
  CheckLength(c, num_vars(), "c");
  CheckLength(l, num_vars(), "l");
  CheckLength(u, num_vars(), "u");
  CheckLength(h, num_cons(), "h");
  if (!AllFinite(c)) ThrowUsage("c must be finite");
  if (!AllFinite(h)) ThrowUsage("h must be finite");
  ValidateBounds(l, u);
}

void GeneralLp::Validate() const {
  CheckLength(c, a.cols(), "c");
  CheckLength(l, a.cols(), "l");
  CheckLength(u, a.cols(), "u");
  CheckLength(rhs, a.rows(), "rhs");
  if (static_cast<Index>(senses.size()) != a.rows()) {
    ThrowUsage("senses length does not match row count");
  }
  if (!AllFinite(c)) ThrowUsage("c must be finite");
  if (!AllFinite(rhs)) ThrowUsage("rhs must be finite");
  ValidateBounds(l, u);
}

LpInstance Canonicalize(const GeneralLp& g) {
  g.Validate();
  const auto offsets = g.a.row_offsets();
  const auto cols = g.a.col_indices();
  const auto vals = g.a.values();
  std::vector<Index> out_offsets{0};
  std::vector<Index> out_cols;
  std::vector<double> out_vals;
  Vector h;
  auto emit = [&](Index r, double sign) {
    for (Index p = offsets[r]; p < offsets[r + 1]; ++p) {
      out_cols.push_back(cols[p]);
      out_vals.push_back(sign * vals[p]);
    }
    out_offsets.push_back(static_cast<Index>(out_vals.size()));
    h.push_back(sign * g.rhs[r]);
  };
  for (Index r = 0; r < g.a.rows(); ++r) {
    switch (g.senses[r]) {
      case RowSense::kGe:
        emit(r, 1.0);
        break;
      case RowSense::kLe:
        emit(r, -1.0);
        break;
      case RowSense::kEq:
        emit(r, 1.0);
        emit(r, -1.0);
        break;
    }
  }
  LpInstance inst;
  const Index m = static_cast<Index>(h.size());
  inst.g = SparseMatrix::FromCsr(m, g.a.cols(), std::move(out_offsets),
                                 std::move(out_cols), std::move(out_vals));
  inst.h = std::move(h);
  inst.c = g.c;
  inst.l = g.l;
  inst.u = g.u;
  inst.name = g.name;
  return inst;
}

double Lagrangian(const LpInstance& inst, std::span<const double> x,
                  std::span<const double> y) {
  CheckLength(x, inst.num_vars(), "x");
  CheckLength(y, inst.num_cons(), "y");
  const Vector gx = Spmv(inst.g, x);
  return Dot(inst.c, x) - Dot(y, gx) + Dot(inst.h, y);
}

double PrimalDualGap(const LpInstance& inst, std::span<const double> cand_x,
                     std::span<const double> cand_y,
                     std::span<const double> ref_x,
                     std::span<const double> ref_y) {
  CheckLength(ref_x, inst.num_vars(), "ref_x");
  CheckLength(ref_y, inst.num_cons(), "ref_y");
  for (std::size_t i = 0; i < ref_x.size(); ++i) {
    if (!(ref_x[i] >= inst.l[i] && ref_x[i] <= inst.u[i])) {
      ThrowUsage("reference x violates bounds at " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < ref_y.size(); ++i) {
    if (!(ref_y[i] >= 0.0)) {
      ThrowUsage("reference y is negative at " + std::to_string(i));
    }
  }
  return Lagrangian(inst, cand_x, ref_y) - Lagrangian(inst, ref_x, cand_y);
}

double KktReport::MaxResidual() const {
  return std::max({primal_residual, dual_residual, rel_gap});
}

KktReport KktResidualsFromProducts(const LpInstance& inst,
                                   std::span<const double> x,
                                   std::span<const double> y,
                                   std::span<const double> gx,
                                   std::span<const double> gty) {
  const Index n = inst.num_vars();
  const Index m = inst.num_cons();
  double primal_sq = 0.0;
  for (Index i = 0; i < m; ++i) {
    const double viol = inst.h[i] - gx[i];
    if (viol > 0.0) primal_sq += viol * viol;
  }
  double dual_sq = 0.0;
  double bound_terms = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double r = inst.c[i] - gty[i];
    double kept = 0.0;
    if (r > 0.0 && std::isfinite(inst.l[i])) kept = r;
    if (r < 0.0 && std::isfinite(inst.u[i])) kept = r;
    const double lost = r - kept;
    dual_sq += lost * lost;
    if (kept > 0.0) bound_terms += inst.l[i] * kept;
    if (kept < 0.0) bound_terms += inst.u[i] * kept;
  }
  KktReport rep;
  rep.objective = Dot(inst.c, x);
  rep.dual_objective = Dot(inst.h, y) + bound_terms;
  rep.primal_residual = std::sqrt(primal_sq) / (1.0 + Norm2(inst.h));
  rep.dual_residual = std::sqrt(dual_sq) / (1.0 + Norm2(inst.c));
  rep.rel_gap = std::abs(rep.objective - rep.dual_objective) /
                (1.0 + std::abs(rep.objective) + std::abs(rep.dual_objective));
  return rep;
}

KktReport KktResiduals(const LpInstance& inst, std::span<const double> x,
                       std::span<const double> y) {
  CheckLength(x, inst.num_vars(), "x");
  CheckLength(y, inst.num_cons(), "y");
  const Vector gx = Spmv(inst.g, x);
  const Vector gty = SpmvT(inst.g, y);
  return KktResidualsFromProducts(inst, x, y, gx, gty);
}

Vector ProjectBox(std::span<const double> z, std::span<const double> l,
                  std::span<const double> u) {
  if (z.size() != l.size() || z.size() != u.size()) {
    ThrowUsage("project_box: length mismatch");
  }
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::min(std::max(z[i], l[i]), u[i]);
  }
  return out;
}

Vector ProjectNonneg(std::span<const double> z) {
  Vector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::max(z[i], 0.0);
  return out;
}

}  // namespace pdhgnet
