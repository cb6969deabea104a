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

#include "pdhgnet/net.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pdhgnet/error.hpp"
#include "pdhgnet/generators.hpp"
#include "pdhgnet/pipeline.hpp"
#include "pdhgnet/solver.hpp"
#include "test_util.hpp"

namespace pdhgnet {
namespace {

double Loss(const NetParams& p, const LpInstance& inst, const Vector& xs, const Vector& ys) {
  const ForwardResult fr = Forward(p, inst, BuildInputs(inst, p.bound_cap));
  return InstanceLoss(fr.x, fr.y, xs, ys);
}

TEST(BuildInputsTest, CapsInfiniteBounds) {
  LpInstance inst;
  inst.g = SparseMatrix::FromTriplets(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  inst.c = {1.0, 2.0};
  inst.h = {3.0};
  inst.l = {0.0, -kInf};
  inst.u = {1.0, kInf};
  const NetInputs in = BuildInputs(inst, 1e8);
  ASSERT_EQ(in.x0.rows(), 2);
  ASSERT_EQ(in.x0.cols(), 4);
  ASSERT_EQ(in.y0.rows(), 1);
  ASSERT_EQ(in.y0.cols(), 2);
  EXPECT_EQ(in.x0.Column(0), (Vector{0.0, 0.0}));
  EXPECT_EQ(in.x0.Column(1), (Vector{0.0, -1e8}));
  EXPECT_EQ(in.x0.Column(2), (Vector{1.0, 1e8}));
  EXPECT_EQ(in.x0.Column(3), inst.c);
  EXPECT_EQ(in.y0.Column(0), (Vector{0.0}));
  EXPECT_EQ(in.y0.Column(1), inst.h);
}

TEST(ForwardTest, ZeroNetworkGivesZeroOutput) {
  const SolvableInstance s = GenRandomSolvable(7, 5, 0.5, 1);
  const NetParams p = InitTrainable({6, 6}, 0.1, 0.1, 3).ZerosLike();
  const ForwardResult fr = Forward(p, s.instance, BuildInputs(s.instance, p.bound_cap));
  EXPECT_EQ(fr.x, Vector(7, 0.0));
  EXPECT_EQ(fr.y, Vector(5, 0.0));
}

TEST(ForwardTest, RejectsEmptyAndMismatchedNetworks) {
  const SolvableInstance s = GenRandomSolvable(7, 5, 0.5, 1);
  NetParams empty;
  EXPECT_THROW(Forward(empty, s.instance, BuildInputs(s.instance, 1e8)), Error);
  NetParams p = InitTrainable({6, 6}, 0.1, 0.1, 3);
  p.readout_x.pop_back();
  EXPECT_THROW(p.Validate(), Error);
  NetInputs bad = BuildInputs(s.instance, 1e8);
  bad.x0 = DenseMatrix(7, 3);
  EXPECT_THROW(Forward(InitTrainable({6}, 0.1, 0.1, 3), s.instance, bad), Error);
}

TEST(ForwardTest, NonFiniteActivationsRaiseNumericalError) {
  const SolvableInstance s = GenRandomSolvable(7, 5, 0.5, 2);
  NetParams p = InitTrainable({6, 6}, 0.1, 0.1, 3);
  p.primal[0].tau = 1e308;
  p.dual[0].sigma = 1e308;
  try {
    Forward(p, s.instance, BuildInputs(s.instance, 1e8));
    FAIL() << "expected a numerical error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumerical);
  }
}

TEST(InstanceLossTest, Examples) {
  const Vector x{1, 2}, y{3};
  EXPECT_EQ(InstanceLoss(x, y, x, y), 0.0);
  EXPECT_EQ(InstanceLoss(Vector{2, 2}, y, x, y), 1.0);
  EXPECT_EQ(InstanceLoss(x, y, Vector{0, 0}, Vector{0}),
            InstanceLoss(y, x, Vector{0}, Vector{0, 0}));
}

TEST(ProjectPredictionTest, ClampsToBoxAndOrthant) {
  LpInstance inst = testing::OneDimLp();
  Vector x{5.0}, y{-2.0};
  ProjectPrediction(inst, x, y);
  EXPECT_EQ(x, (Vector{2.0}));
  EXPECT_EQ(y, (Vector{0.0}));
}

TEST(ThetaPdhgTest, RejectsNarrowWidths) {
  try {
    ConstructThetaPdhg({10, 9, 10}, 0.1, 0.1);
    FAIL() << "expected unsupported width";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedWidth);
  }
  EXPECT_NO_THROW(ConstructThetaPdhg({10, 10}, 0.1, 0.1));
}

// Layer j holds [(xbar^{j-1})+, (xbar^{j-1})-, (xt^{j-1} - l)+, (xt^{j-1} - u)+,
// l+, l-, u+, u-, s_c c+, tau c-, 0...] with xt^k = x^k - tau (c - G^T y^k),
// and [(ybar^{j-1})+, (ybar^{j-1})-, y^j, sigma h+, s_h h-, 0...], where
// s = max(1, K * step).
TEST(ThetaPdhgTest, HiddenChannelLayout) {
  const SolvableInstance s = GenRandomSolvable(9, 7, 0.4, 4);
  const LpInstance& inst = s.instance;
  const auto n = static_cast<std::size_t>(inst.num_vars());
  const double step = 0.9 / EstimateSpectralNorm(inst.g).value;
  const AlignedNet net = ConstructThetaPdhg({12, 12}, step, step);
  const ForwardResult fr =
      Forward(net.params, inst, BuildInputs(inst, net.params.bound_cap), true);
  const std::size_t m = 7;
  const double scale = std::max(1.0, 2 * step);
  std::vector<Vector> xs{Vector(n, 0.0)}, ys{Vector(m, 0.0)}, xa{Vector(n, 0.0)},
      ya{Vector(m, 0.0)};
  SolverConfig cfg;
  cfg.tau = cfg.sigma = step;
  cfg.tol = 0.0;
  cfg.max_iter = 2;
  cfg.restart = NoRestart{};
  cfg.observer = [&](const IterateView& v) {
    xs.emplace_back(v.x.begin(), v.x.end());
    ys.emplace_back(v.y.begin(), v.y.end());
    xa.emplace_back(v.x_avg.begin(), v.x_avg.end());
    ya.emplace_back(v.y_avg.begin(), v.y_avg.end());
  };
  PdhgSolve(inst, cfg);
  auto pos = [](double v) { return std::max(v, 0.0); };
  for (std::size_t layer = 1; layer <= 2; ++layer) {
    const DenseMatrix& xl = fr.trace->x[layer];
    ASSERT_EQ(xl.cols(), 12);
    const Vector gty = SpmvT(inst.g, ys[layer - 1]);
    for (std::size_t i = 0; i < n; ++i) {
      const double xbar = xa[layer - 1][i];
      const double xt = xs[layer - 1][i] - step * (inst.c[i] - gty[i]);
      const double l = inst.l[i], u = inst.u[i], c = inst.c[i];
      const double expect[12] = {pos(xbar), pos(-xbar), pos(xt - l), pos(xt - u),
                                 pos(l),    pos(-l),    pos(u),      pos(-u),
                                 scale * pos(c), step * pos(-c), 0.0, 0.0};
      for (Index j = 0; j < 12; ++j) {
        EXPECT_NEAR(xl(static_cast<Index>(i), j), expect[j], 1e-12)
            << "layer " << layer << " row " << i << " channel " << j;
      }
    }
    const DenseMatrix& yl = fr.trace->y[layer];
    for (std::size_t i = 0; i < m; ++i) {
      const double ybar = ya[layer - 1][i], h = inst.h[i];
      const double expect[6] = {pos(ybar),    pos(-ybar),      ys[layer][i],
                                step * pos(h), scale * pos(-h), 0.0};
      for (Index j = 0; j < 6; ++j) {
        EXPECT_NEAR(yl(static_cast<Index>(i), j), expect[j], 1e-12)
            << "layer " << layer << " dual row " << i << " channel " << j;
      }
    }
  }
}

TEST(ThetaPdhgTest, AlignsWithSolverOnRandomInstances) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Index> size(5, 30);
  std::vector<LpInstance> instances;
  double norm = 0.0;
  for (int t = 0; t < 50; ++t) {
    instances.push_back(GenRandomSolvable(size(rng), size(rng), 0.4, rng()).instance);
    norm = std::max(norm, EstimateSpectralNorm(instances.back().g).value);
  }
  const double step = 0.9 / norm;
  // One parameter set for every instance: the construction is data independent.
  const AlignedNet net = ConstructThetaPdhg({10, 10, 10, 10}, step, step);
  for (const LpInstance& inst : instances) {
    const AlignmentReport rep = CheckAlignment(net, inst, step, step);
    EXPECT_LE(rep.output_deviation, 1e-9);
    EXPECT_LE(rep.MaxDeviation(), 1e-8);
  }
}

// Rounding errors in the carried data channels must not grow with depth.
TEST(ThetaPdhgTest, DeepNetworksStayAligned) {
  const SolvableInstance s = GenRandomSolvable(5, 4, 0.4, 10001);
  const double step = 0.9 / EstimateSpectralNorm(s.instance.g).value;
  const AlignedNet net = ConstructThetaPdhg(std::vector<Index>(400, 20), step, step);
  EXPECT_LE(CheckAlignment(net, s.instance, step, step).MaxDeviation(), 1e-9);
}

TEST(BackwardTest, FiniteDifferenceAgreement) {
  const SolvableInstance s = GenRandomSolvable(5, 6, 0.6, 21);
  const LpInstance& inst = s.instance;
  const StepSizes st = DefaultStepSizes(inst);
  const NetParams p = InitTrainable({10, 10}, st.tau, st.sigma, 5);
  const ForwardResult fr = Forward(p, inst, BuildInputs(inst, p.bound_cap), true);
  const Vector grad = Backward(p, inst, *fr.trace, s.x_star, s.y_star).Flatten();
  const Vector flat = p.Flatten();
  ASSERT_EQ(grad.size(), flat.size());

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, flat.size() - 1);
  const double h = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t i = pick(rng);
    NetParams q = p;
    Vector f = flat;
    f[i] = flat[i] + h;
    q.Assign(f);
    const double up = Loss(q, inst, s.x_star, s.y_star);
    f[i] = flat[i] - h;
    q.Assign(f);
    const double down = Loss(q, inst, s.x_star, s.y_star);
    const double fd = (up - down) / (2.0 * h);
    const double rel = std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
    worst = std::max(worst, rel);
    EXPECT_LE(rel, 1e-5) << "coordinate " << i << " fd " << fd << " analytic " << grad[i];
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(BackwardTest, ZeroGradientAtExactLabel) {
  const SolvableInstance s = GenRandomSolvable(6, 5, 0.6, 2);
  const NetParams p = InitTrainable({8, 8}, 0.2, 0.2, 1);
  const ForwardResult fr = Forward(p, s.instance, BuildInputs(s.instance, p.bound_cap), true);
  const Vector g = Backward(p, s.instance, *fr.trace, fr.x, fr.y).Flatten();
  for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(BackwardTest, DeadUnitGetsNoGradient) {
  SolvableInstance s = GenRandomSolvable(6, 5, 0.6, 2);
  for (double& c : s.instance.c) c = std::abs(c) + 0.5;
  NetParams p = InitTrainable({8, 8}, 0.2, 0.2, 1);
  const Index dead = 3;
  for (Index r = 0; r < 4; ++r) p.primal[0].u_x(r, dead) = r == 3 ? -5.0 : 0.0;
  for (Index r = 0; r < 2; ++r) p.primal[0].u_y(r, dead) = 0.0;
  const ForwardResult fr = Forward(p, s.instance, BuildInputs(s.instance, p.bound_cap), true);
  for (Index i = 0; i < s.instance.num_vars(); ++i) {
    ASSERT_LT(fr.trace->pre_x[0](i, dead), 0.0);
  }
  const NetParams g = Backward(p, s.instance, *fr.trace, s.x_star, s.y_star);
  for (Index r = 0; r < 4; ++r) EXPECT_EQ(g.primal[0].u_x(r, dead), 0.0);
  for (Index r = 0; r < 2; ++r) EXPECT_EQ(g.primal[0].u_y(r, dead), 0.0);
}

TEST(NetParamsTest, FlattenAssignRoundTrip) {
  const NetParams p = InitTrainable({4, 7, 3}, 0.3, 0.4, 8);
  EXPECT_EQ(p.Flatten().size(), p.NumParameters());
  NetParams q = p.ZerosLike();
  q.Assign(p.Flatten());
  EXPECT_EQ(p, q);
  EXPECT_THROW(q.Assign(Vector(3, 0.0)), Error);
}

TEST(NetParamsTest, InitIsSeeded) {
  EXPECT_EQ(InitTrainable({5, 5}, 0.1, 0.1, 4), InitTrainable({5, 5}, 0.1, 0.1, 4));
  EXPECT_NE(InitTrainable({5, 5}, 0.1, 0.1, 4), InitTrainable({5, 5}, 0.1, 0.1, 5));
}

}  // namespace
}  // namespace pdhgnet
