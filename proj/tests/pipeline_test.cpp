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

#include "pdhgnet/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "pdhgnet/error.hpp"
#include "pdhgnet/generators.hpp"
#include "test_util.hpp"

namespace pdhgnet {
namespace {

SolverConfig Cfg(double tol = 1e-6) {
  SolverConfig cfg;
  cfg.tol = tol;
  cfg.max_iter = 200000;
  return cfg;
}

TEST(ImprovementRatioTest, SignConvention) {
  EXPECT_EQ(ImprovementRatio(10.0, 10.0), 0.0);
  EXPECT_EQ(ImprovementRatio(10.0, 5.0), 0.5);
  EXPECT_EQ(ImprovementRatio(10.0, 15.0), -0.5);
  EXPECT_THROW(ImprovementRatio(0.0, 1.0), Error);
  EXPECT_THROW(ImprovementRatio(-1.0, 1.0), Error);
}

TEST(TwoStageTest, ZeroNetworkMatchesColdStart) {
  const SolvableInstance s = GenRandomSolvable(20, 15, 0.3, 4);
  const NetParams zero = InitTrainable({8, 8}, 0.1, 0.1, 1).ZerosLike();
  const TwoStageResult r = TwoStageSolve(s.instance, zero, Cfg(), true);
  ASSERT_TRUE(r.cold_result.has_value());
  EXPECT_EQ(r.warm_result.iterations, r.cold_result->iterations);
  EXPECT_EQ(r.warm_result.x, r.cold_result->x);
  EXPECT_EQ(r.warm_result.y, r.cold_result->y);
  ASSERT_TRUE(r.improvement_iters.has_value());
  EXPECT_EQ(*r.improvement_iters, 0.0);
}

TEST(TwoStageTest, NoImprovementFieldsWithoutColdRun) {
  const SolvableInstance s = GenRandomSolvable(10, 8, 0.3, 4);
  const NetParams zero = InitTrainable({8}, 0.1, 0.1, 1).ZerosLike();
  const TwoStageResult r = TwoStageSolve(s.instance, zero, Cfg(), false);
  EXPECT_FALSE(r.cold_result.has_value());
  EXPECT_FALSE(r.improvement_iters.has_value());
  EXPECT_FALSE(r.improvement_time.has_value());
}

TEST(TwoStageTest, ExactConstructionEqualsStartingFromErgodicAverage) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SolvableInstance s = GenRandomSolvable(15, 12, 0.4, seed);
    const StepSizes st = DefaultStepSizes(s.instance);
    const NetParams theta = ConstructThetaPdhg({10, 10, 10, 10}, st.tau, st.sigma).params;
    SolverConfig four = Cfg();
    four.tau = st.tau;
    four.sigma = st.sigma;
    four.tol = 0.0;
    four.max_iter = 4;
    four.restart = NoRestart{};
    const SolverResult avg = PdhgSolve(s.instance, four);
    const TwoStageResult r = TwoStageSolve(s.instance, theta, Cfg(), false);
    for (std::size_t i = 0; i < avg.x_avg.size(); ++i) {
      EXPECT_NEAR(r.x_hat[i], avg.x_avg[i], 1e-12);
    }
    for (std::size_t i = 0; i < avg.y_avg.size(); ++i) {
      EXPECT_NEAR(r.y_hat[i], avg.y_avg[i], 1e-12);
    }
    const SolverResult direct = PdhgSolve(s.instance, Cfg(), WarmStart{avg.x_avg, avg.y_avg});
    EXPECT_EQ(r.warm_result.iterations, direct.iterations);
    EXPECT_EQ(r.warm_result.restarts, direct.restarts);
    EXPECT_LE(Distance(r.warm_result.x, direct.x), 1e-6);
  }
}

TEST(TwoStageTest, WarmStartIsFeasible) {
  const SolvableInstance s = GenRandomSolvable(10, 8, 0.4, 2);
  NetParams p = InitTrainable({6, 6}, 0.3, 0.3, 9);
  for (double& r : p.readout_x) r *= 50.0;
  for (double& r : p.readout_y) r = -std::abs(r) * 50.0;
  const TwoStageResult r = TwoStageSolve(s.instance, p, Cfg(), false);
  for (std::size_t i = 0; i < r.x_hat.size(); ++i) {
    EXPECT_GE(r.x_hat[i], s.instance.l[i]);
    EXPECT_LE(r.x_hat[i], s.instance.u[i]);
  }
  for (double y : r.y_hat) EXPECT_GE(y, 0.0);
}

TEST(TwoStageTest, LabelWarmStartNeverSlowerOnPageRank) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const LpInstance inst = GenPageRank({1000, 3, 0.85, seed});
    const SolverResult label = PdhgSolve(inst, Cfg(1e-8));
    ASSERT_EQ(label.status, SolveStatus::kOptimal);
    const SolverResult cold = PdhgSolve(inst, Cfg());
    const SolverResult warm = PdhgSolve(inst, Cfg(), WarmStart{label.x, label.y});
    EXPECT_LE(warm.iterations, cold.iterations);
  }
}

TEST(ExtrapolationTest, RowsSortedAndEndpointsConsistent) {
  const SolvableInstance s = GenRandomSolvable(20, 15, 0.3, 6);
  const NetParams p = InitTrainable({8, 8}, 0.2, 0.2, 2);
  const TwoStageResult two = TwoStageSolve(s.instance, p, Cfg(), false);
  const auto rows = ExtrapolationStudy(s.instance, s.x_star, s.y_star, two.x_hat, two.y_hat,
                                       {1.0, 0.0, 0.5, 2.0}, Cfg());
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].alpha, rows[i].alpha);
  EXPECT_EQ(rows[0].alpha, 0.0);
  EXPECT_EQ(rows[0].start_distance, 0.0);
  EXPECT_EQ(rows[2].alpha, 1.0);
  EXPECT_EQ(rows[2].iterations, two.warm_result.iterations);
  EXPECT_EQ(rows[2].restarts, two.warm_result.restarts);
  EXPECT_THROW(ExtrapolationStudy(s.instance, s.x_star, s.y_star, two.x_hat, two.y_hat,
                                  {-0.5}, Cfg()),
               Error);
  EXPECT_THROW(ExtrapolationStudy(s.instance, s.x_star, s.y_star, Vector(3, 0.0), two.y_hat,
                                  {0.5}, Cfg()),
               Error);
}

TEST(SpearmanTest, AgreesWithReferenceValues) {
  EXPECT_DOUBLE_EQ(SpearmanCorrelation(Vector{1, 2, 3}, Vector{10, 20, 30}), 1.0);
  EXPECT_DOUBLE_EQ(SpearmanCorrelation(Vector{1, 2, 3}, Vector{3, 2, 1}), -1.0);
  // Reference values from an independent statistics package.
  EXPECT_NEAR(SpearmanCorrelation(Vector{1, 2, 2, 3}, Vector{1, 2, 3, 4}),
              0.9486832980505139, 1e-12);
  EXPECT_NEAR(SpearmanCorrelation(Vector{0, 0.25, 0.5, 0.75, 1, 1.5, 2},
                                  Vector{0, 30, 25, 80, 120, 110, 200}),
              0.9285714285714288, 1e-12);
  EXPECT_EQ(SpearmanCorrelation(Vector{1, 2, 3}, Vector{5, 5, 5}), 0.0);
}

TEST(TimingReportTest, AggregatesBySizeAndFlagsZeroSolveTime) {
  const TimingReport one = BuildTimingReport({{100, 0.1, 0.0}});
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_TRUE(one.rows[0].infinite_ratio);
  const TimingReport rep =
      BuildTimingReport({{1000, 0.2, 1.0}, {100, 0.1, 0.2}, {1000, 0.4, 1.0}});
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].n, 100);
  EXPECT_NEAR(rep.rows[0].mean_ratio, 0.5, 1e-15);
  EXPECT_NEAR(rep.rows[1].mean_ratio, 0.3, 1e-15);
  EXPECT_EQ(rep.rows[1].count, 2);
  EXPECT_TRUE(rep.ratio_decreasing);
  EXPECT_THROW(BuildTimingReport({}), Error);
}

TEST(AlignmentTest, SingleInstanceReport) {
  const SolvableInstance s = GenRandomSolvable(12, 9, 0.4, 8);
  const StepSizes st = DefaultStepSizes(s.instance);
  const AlignedNet net = ConstructThetaPdhg({10, 11, 12}, st.tau, st.sigma);
  const AlignmentReport rep = CheckAlignment(net, s.instance, st.tau, st.sigma);
  EXPECT_EQ(rep.primal.size(), 4u);
  EXPECT_LE(rep.MaxDeviation(), 1e-9);
}

}  // namespace
}  // namespace pdhgnet
