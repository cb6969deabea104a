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

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "pdhgnet/error.hpp"

namespace pdhgnet {
namespace {

std::mt19937_64 SeededRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

struct Edge {
  Index a;
  Index b;
};

std::vector<Edge> PreferentialAttachment(Index nodes, Index attach,
                                         std::mt19937_64& rng) {
  std::vector<Edge> edges;
  edges.reserve(attach * (nodes - attach));
  std::vector<Index> targets(attach);
  for (Index i = 0; i < attach; ++i) targets[i] = i;
  // Each endpoint occurrence; sampling uniformly from it is
  // degree-proportional.
  std::vector<Index> repeated;
  repeated.reserve(2 * attach * nodes);
  for (Index source = attach; source < nodes; ++source) {
    for (Index t : targets) edges.push_back({source, t});
    repeated.insert(repeated.end(), targets.begin(), targets.end());
    repeated.insert(repeated.end(), attach, source);
    std::set<Index> chosen;
    while (static_cast<Index>(chosen.size()) < attach) {
      std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
      chosen.insert(repeated[pick(rng)]);
    }
    targets.assign(chosen.begin(), chosen.end());
  }
  return edges;
}

}  // namespace

LpInstance GenPageRank(const PageRankSpec& spec) {
  if (spec.attach < 1) ThrowUsage("attach must be >= 1");
  if (spec.nodes <= 3 || spec.nodes <= spec.attach) {
    ThrowUsage("pagerank needs more than max(3, attach) nodes, got " +
               std::to_string(spec.nodes));
  }
  if (!(spec.damping > 0.0 && spec.damping < 1.0)) {
    ThrowUsage("damping must lie in (0, 1)");
  }
  const Index n = spec.nodes;
  // Seed vertices start with degree 1; redraw until every vertex has degree
  // >= attach. Small graphs cannot always reach that and keep the last draw.
  const bool enforce_degree = n >= 2 * spec.attach;
  std::vector<Edge> edges;
  std::vector<Index> degree;
  for (std::uint64_t attempt = 0; attempt < 256; ++attempt) {
    std::mt19937_64 rng = SeededRng(spec.seed, attempt);
    edges = PreferentialAttachment(n, spec.attach, rng);
    degree.assign(n, 0);
    for (const Edge& e : edges) {
      ++degree[e.a];
      ++degree[e.b];
    }
    if (!enforce_degree ||
        *std::min_element(degree.begin(), degree.end()) >= spec.attach) {
      break;
    }
  }

  std::vector<Triplet> trip;
  trip.reserve(2 * n + 2 * edges.size());
  for (Index i = 0; i < n; ++i) trip.push_back({i, i, 1.0});
  for (const Edge& e : edges) {
    // Column j of S holds 1/deg(j) on the neighbours of j.
    trip.push_back({e.b, e.a, -spec.damping / degree[e.a]});
    trip.push_back({e.a, e.b, -spec.damping / degree[e.b]});
  }
  for (Index j = 0; j < n; ++j) trip.push_back({n, j, 1.0});

  LpInstance inst;
  inst.g = SparseMatrix::FromTriplets(n + 1, n, std::move(trip));
  inst.h.assign(n + 1, 0.0);
  inst.h[n] = 1.0;
  inst.c.assign(n, 1.0);
  inst.l.assign(n, 0.0);
  inst.u.assign(n, kInf);
  inst.name = "pagerank_n" + std::to_string(n) + "_s" + std::to_string(spec.seed);
  return inst;
}

std::vector<LpInstance> GenPerturbedFamily(const PerturbSpec& spec) {
  if (!(spec.amplitude >= 0.0)) ThrowUsage("amplitude must be >= 0");
  if (spec.count < 0) ThrowUsage("count must be >= 0");
  spec.base.Validate();
  std::vector<LpInstance> out;
  out.reserve(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    std::mt19937_64 rng = SeededRng(spec.seed, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> noise(-spec.amplitude,
                                                 spec.amplitude);
    LpInstance inst = spec.base;
    if (spec.targets & kPerturbH) {
      for (double& v : inst.h) v *= 1.0 + noise(rng);
    }
    if (spec.targets & kPerturbC) {
      for (double& v : inst.c) v *= 1.0 + noise(rng);
    }
    inst.name = spec.base.name + "_p" + std::to_string(i);
    out.push_back(std::move(inst));
  }
  return out;
}

SolvableInstance GenRandomSolvable(Index n, Index m, double density,
                                   std::uint64_t seed) {
  if (n < 1 || m < 1) ThrowUsage("n and m must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) ThrowUsage("density must lie in (0, 1]");
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    std::mt19937_64 rng = SeededRng(seed, attempt);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    auto entry = [&] {
      const double mag = uniform(0.2, 1.0);
      return unit(rng) < 0.5 ? -mag : mag;
    };

    std::vector<Triplet> trip;
    std::vector<bool> col_used(n, false);
    for (Index i = 0; i < m; ++i) {
      bool row_used = false;
      for (Index j = 0; j < n; ++j) {
        if (unit(rng) < density) {
          trip.push_back({i, j, entry()});
          row_used = true;
          col_used[j] = true;
        }
      }
      if (!row_used) {
        std::uniform_int_distribution<Index> pick(0, n - 1);
        const Index j = pick(rng);
        trip.push_back({i, j, entry()});
        col_used[j] = true;
      }
    }
    for (Index j = 0; j < n; ++j) {
      if (!col_used[j]) {
        std::uniform_int_distribution<Index> pick(0, m - 1);
        trip.push_back({pick(rng), j, entry()});
      }
    }

    SolvableInstance out;
    LpInstance& inst = out.instance;
    inst.g = SparseMatrix::FromTriplets(m, n, std::move(trip));
    inst.l.resize(n);
    inst.u.resize(n);
    out.x_star.resize(n);
    for (Index j = 0; j < n; ++j) {
      inst.l[j] = -uniform(0.5, 3.0);
      inst.u[j] = uniform(0.5, 3.0);
      out.x_star[j] = inst.l[j] + (inst.u[j] - inst.l[j]) * uniform(0.2, 0.8);
    }
    out.y_star.assign(m, 0.0);
    Vector slack(m, 0.0);
    bool any_active = false;
    for (Index i = 0; i < m; ++i) {
      if (unit(rng) < 0.5) {
        out.y_star[i] = uniform(0.5, 2.0);
        any_active = true;
      } else {
        slack[i] = uniform(0.1, 1.0);
      }
    }
    if (!any_active) continue;
    const Vector gx = Spmv(inst.g, out.x_star);
    inst.h.resize(m);
    for (Index i = 0; i < m; ++i) inst.h[i] = gx[i] - slack[i];
    inst.c = SpmvT(inst.g, out.y_star);
    if (NormInf(inst.c) < 1e-3) continue;
    inst.name = "solvable_n" + std::to_string(n) + "_m" + std::to_string(m) +
                "_s" + std::to_string(seed);
    return out;
  }
  ThrowUsage("could not sample a nondegenerate solvable instance");
}

}  // namespace pdhgnet
