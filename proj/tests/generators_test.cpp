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

#include "pdhgnet/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "pdhgnet/error.hpp"
#include "test_util.hpp"

namespace pdhgnet {
namespace {

TEST(PageRankTest, SizesFollowNonzeroFormula) {
  const LpInstance a = GenPageRank({1000, 3, 0.85, 7});
  EXPECT_EQ(a.num_vars(), 1000);
  EXPECT_EQ(a.num_cons(), 1001);
  EXPECT_EQ(a.g.nnz(), 7982);
  const LpInstance b = GenPageRank({10000, 3, 0.85, 7});
  EXPECT_EQ(b.num_vars(), 10000);
  EXPECT_EQ(b.num_cons(), 10001);
  EXPECT_EQ(b.g.nnz(), 79982);
  for (Index n : {4, 6, 10, 57, 300}) {
    const LpInstance c = GenPageRank({n, 3, 0.85, static_cast<std::uint64_t>(n)});
    EXPECT_EQ(c.g.nnz(), 8 * n - 18) << "n = " << n;
  }
}

TEST(PageRankTest, FormulationShape) {
  const Index n = 200;
  const double lambda = 0.85;
  const LpInstance inst = GenPageRank({n, 3, lambda, 1});
  EXPECT_EQ(inst.c, Vector(n, 1.0));
  Vector h(n + 1, 0.0);
  h[n] = 1.0;
  EXPECT_EQ(inst.h, h);
  EXPECT_EQ(inst.l, Vector(n, 0.0));
  for (double u : inst.u) EXPECT_EQ(u, kInf);

  // Column sums of S and vertex degrees from the off-diagonal entries.
  Vector col_sum(n, 0.0);
  std::vector<int> degree(n, 0), diag(n, 0);
  for (Index r = 0; r < n; ++r) {
    for (Index k = inst.g.row_offsets()[r]; k < inst.g.row_offsets()[r + 1]; ++k) {
      const Index c = inst.g.col_indices()[k];
      const double v = inst.g.values()[k];
      if (c == r) {
        EXPECT_EQ(v, 1.0);
        ++diag[c];
      } else {
        col_sum[c] += -v / lambda;
        ++degree[c];
      }
    }
  }
  for (Index j = 0; j < n; ++j) {
    EXPECT_EQ(diag[j], 1);
    EXPECT_NEAR(col_sum[j], 1.0, 1e-12);
    EXPECT_GE(degree[j], 3);
  }
  // Mass row is all ones.
  const Index last = inst.g.row_offsets()[n];
  EXPECT_EQ(inst.g.row_offsets()[n + 1] - last, n);
  for (Index k = last; k < inst.g.nnz(); ++k) EXPECT_EQ(inst.g.values()[k], 1.0);
}

TEST(PageRankTest, PowerIterationVectorAttainsObjectiveOne) {
  const Index n = 500;
  const double lambda = 0.85;
  const LpInstance inst = GenPageRank({n, 3, lambda, 3});
  // S v recovered from G: (I - lambda S) v = v - G_top v.
  Vector x(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 300; ++it) {
    const Vector gx = Spmv(inst.g, x);
    Vector next(n);
    for (Index i = 0; i < n; ++i) next[i] = (x[i] - gx[i]) + (1.0 - lambda) / n;
    x = next;
  }
  const Vector gx = Spmv(inst.g, x);
  for (Index i = 0; i <= n; ++i) EXPECT_GE(gx[i], inst.h[i] - 1e-12);
  EXPECT_NEAR(Dot(inst.c, x), 1.0, 1e-12);
  const KktReport k = KktResiduals(inst, x, Vector(n + 1, 0.0));
  EXPECT_LE(k.primal_residual, 1e-12);
}

TEST(PageRankTest, DeterministicAndValidated) {
  EXPECT_EQ(GenPageRank({300, 3, 0.85, 5}).g, GenPageRank({300, 3, 0.85, 5}).g);
  EXPECT_NE(GenPageRank({300, 3, 0.85, 5}).g, GenPageRank({300, 3, 0.85, 6}).g);
  EXPECT_THROW(GenPageRank({3, 3, 0.85, 0}), Error);
  EXPECT_THROW(GenPageRank({100, 0, 0.85, 0}), Error);
  EXPECT_THROW(GenPageRank({100, 3, 1.0, 0}), Error);
}

TEST(PerturbTest, ZeroAmplitudeCopiesBase) {
  PerturbSpec spec;
  spec.base = GenPageRank({100, 3, 0.85, 1});
  spec.count = 3;
  spec.amplitude = 0.0;
  for (const LpInstance& inst : GenPerturbedFamily(spec)) {
    EXPECT_EQ(inst.g, spec.base.g);
    EXPECT_EQ(inst.c, spec.base.c);
    EXPECT_EQ(inst.h, spec.base.h);
  }
}

TEST(PerturbTest, CountPatternAndTargets) {
  PerturbSpec spec;
  spec.base = GenPageRank({100, 3, 0.85, 1});
  spec.count = 5;
  spec.amplitude = 0.05;
  spec.targets = kPerturbC;
  spec.seed = 9;
  const auto family = GenPerturbedFamily(spec);
  ASSERT_EQ(family.size(), 5u);
  for (std::size_t i = 0; i < family.size(); ++i) {
    EXPECT_EQ(family[i].g, spec.base.g);
    EXPECT_EQ(family[i].h, spec.base.h);
    for (std::size_t j = 0; j < family[i].c.size(); ++j) {
      EXPECT_LE(std::abs(family[i].c[j] / spec.base.c[j] - 1.0), 0.05 + 1e-15);
    }
    for (std::size_t k = 0; k < i; ++k) EXPECT_NE(family[i].c, family[k].c);
  }
  EXPECT_EQ(GenPerturbedFamily(spec)[3].c, family[3].c);
  spec.amplitude = -1.0;
  EXPECT_THROW(GenPerturbedFamily(spec), Error);
}

TEST(RandomSolvableTest, PlantedPointIsKkt) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SolvableInstance s = GenRandomSolvable(12 + seed % 20, 8 + seed % 15, 0.3, seed);
    const KktReport k = KktResiduals(s.instance, s.x_star, s.y_star);
    EXPECT_LE(k.primal_residual, 1e-12);
    EXPECT_LE(k.dual_residual, 1e-12);
    EXPECT_LE(k.rel_gap, 1e-12);
    for (std::size_t i = 0; i < s.x_star.size(); ++i) {
      EXPECT_LT(s.instance.l[i], s.x_star[i]);
      EXPECT_LT(s.x_star[i], s.instance.u[i]);
    }
    for (double y : s.y_star) EXPECT_GE(y, 0.0);
    // Zero duality gap: the reduced cost vanishes, so c^T x* = h^T y*.
    EXPECT_NEAR(Dot(s.instance.c, s.x_star), Dot(s.instance.h, s.y_star),
                1e-12 * (1.0 + std::abs(Dot(s.instance.h, s.y_star))));
  }
}

TEST(RandomSolvableTest, DeterministicAndValidated) {
  const SolvableInstance a = GenRandomSolvable(10, 7, 0.4, 3);
  const SolvableInstance b = GenRandomSolvable(10, 7, 0.4, 3);
  EXPECT_EQ(a.instance.g, b.instance.g);
  EXPECT_EQ(a.x_star, b.x_star);
  EXPECT_THROW(GenRandomSolvable(0, 3, 0.5, 0), Error);
  EXPECT_THROW(GenRandomSolvable(3, 3, 0.0, 0), Error);
  EXPECT_THROW(GenRandomSolvable(3, 3, 1.5, 0), Error);
}

}  // namespace
}  // namespace pdhgnet
