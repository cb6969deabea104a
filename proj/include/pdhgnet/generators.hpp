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

#ifndef PDHGNET_GENERATORS_HPP_
#define PDHGNET_GENERATORS_HPP_

#include <cstdint>
#include <vector>

#include "pdhgnet/lp.hpp"

namespace pdhgnet {

struct PageRankSpec {
  Index nodes = 1000;
  Index attach = 3;
  double damping = 0.85;
  std::uint64_t seed = 0;
};

// Preferential-attachment graph on `nodes` vertices seeded with `attach`
// isolated vertices, each later vertex linking to `attach` distinct earlier
// ones with degree-proportional probability. With S the column-stochastic
// arc matrix,
//   G = [I - damping * S; 1^T],  h = [0; 1],  l = 0,  u = +inf,  c = 1,
// so the LP has n variables, n + 1 rows and 8n - 18 nonzeros for attach = 3,
// and optimal value exactly 1.
LpInstance GenPageRank(const PageRankSpec& spec);

enum PerturbTarget : unsigned { kPerturbH = 1u, kPerturbC = 2u };

struct PerturbSpec {
  LpInstance base;
  int count = 1;
  double amplitude = 0.0;
  unsigned targets = kPerturbH | kPerturbC;
  std::uint64_t seed = 0;
};

// Each instance scales the selected entries of h and/or c by (1 + xi),
// xi ~ U[-amplitude, amplitude], drawn from a generator seeded by
// (seed, instance index).
std::vector<LpInstance> GenPerturbedFamily(const PerturbSpec& spec);

struct SolvableInstance {
  LpInstance instance;
  Vector x_star;
  Vector y_star;
};

// Random LP with a planted KKT point: x* strictly inside finite bounds,
// complementary slack s, h = G x* - s and c = G^T y*.
SolvableInstance GenRandomSolvable(Index n, Index m, double density,
                                   std::uint64_t seed);

}  // namespace pdhgnet

#endif  // PDHGNET_GENERATORS_HPP_
