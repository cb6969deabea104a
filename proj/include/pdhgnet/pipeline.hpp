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

#ifndef PDHGNET_PIPELINE_HPP_
#define PDHGNET_PIPELINE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "pdhgnet/lp.hpp"
#include "pdhgnet/net.hpp"
#include "pdhgnet/solver.hpp"

namespace pdhgnet {

struct TwoStageResult {
  Vector x_hat;  // projected prediction handed to the solver
  Vector y_hat;
  SolverResult warm_result;
  std::optional<SolverResult> cold_result;
  double inference_seconds = 0.0;
  std::optional<double> improvement_time;
  std::optional<double> improvement_iters;
};

// Network inference, projection onto l <= x <= u and y >= 0, then a solve
// warm-started from the projected prediction.
TwoStageResult TwoStageSolve(const LpInstance& inst, const NetParams& params,
                             const SolverConfig& cfg, bool compare_cold);

// (baseline - ours) / baseline. Throws kUsage if baseline <= 0.
double ImprovementRatio(double baseline, double ours);

struct ExtrapolationRow {
  double alpha = 0.0;
  double start_distance = 0.0;
  int iterations = 0;
  int restarts = 0;
  double solve_seconds = 0.0;
  SolveStatus status = SolveStatus::kIterLimit;
};

// For each alpha, warm-solves from proj(z* + alpha (z0 - z*)). Rows are
// returned sorted by alpha.
std::vector<ExtrapolationRow> ExtrapolationStudy(
    const LpInstance& inst, std::span<const double> x_star,
    std::span<const double> y_star, std::span<const double> x0,
    std::span<const double> y0, std::vector<double> alphas,
    const SolverConfig& cfg);

// Spearman rank correlation with average ranks for ties. Returns 0 when
// either sequence is constant.
double SpearmanCorrelation(std::span<const double> a, std::span<const double> b);

struct TimingSample {
  Index n = 0;
  double inference_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct TimingRow {
  Index n = 0;
  int count = 0;
  double mean_inference_seconds = 0.0;
  double mean_solve_seconds = 0.0;
  double mean_ratio = 0.0;  // mean of inference / solve over finite samples
  bool infinite_ratio = false;  // some sample had solve time 0
};

struct TimingReport {
  std::vector<TimingRow> rows;  // ascending n
  bool ratio_decreasing = false;
};

TimingReport BuildTimingReport(const std::vector<TimingSample>& samples);

// Layer-by-layer comparison of an aligned network against PDHG (no restarts,
// constant steps) on one instance. Entry k of each vector is the max-abs
// difference at layer k = 0..K between the channels recovered through the
// P^k matrices and the solver's iterate k.
struct AlignmentReport {
  double output_deviation = 0.0;  // readout vs (xbar^K, ybar^K)
  std::vector<double> primal_avg;
  std::vector<double> primal;
  std::vector<double> dual_avg;
  std::vector<double> dual;

  double MaxDeviation() const;
};

AlignmentReport CheckAlignment(const AlignedNet& net, const LpInstance& inst,
                               double tau, double sigma);

}  // namespace pdhgnet

#endif  // PDHGNET_PIPELINE_HPP_
