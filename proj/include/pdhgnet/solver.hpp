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

#ifndef PDHGNET_SOLVER_HPP_
#define PDHGNET_SOLVER_HPP_

// Primal-dual hybrid gradient for the standard-form LP:
//   x+ = Proj_[l,u](x - tau (c - G^T y))
//   y+ = Proj_{y>=0}(y + sigma (h - 2 G x+ + G x))
// with ergodic averaging, optional restarts to the average, and warm starts.

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pdhgnet/linalg.hpp"
#include "pdhgnet/lp.hpp"

namespace pdhgnet {

struct NoRestart {};
struct AdaptiveRestart {
  double beta = 0.5;
  int check_period = 40;
};
struct FixedRestart {
  int period = 100;
};
using RestartPolicy = std::variant<NoRestart, AdaptiveRestart, FixedRestart>;

struct StepSizes {
  double tau = 1.0;
  double sigma = 1.0;
  double norm_estimate = 0.0;
  bool zero_matrix = false;
};

// tau = sigma = 0.9 / ||G||_2 estimate.
StepSizes DefaultStepSizes(const LpInstance& inst);

// Everything an observer may read after iteration k (k >= 1). Averages are
// over the iterates produced since the last restart.
struct IterateView {
  int iteration;
  std::span<const double> x;
  std::span<const double> y;
  std::span<const double> x_avg;
  std::span<const double> y_avg;
};

struct SolverConfig {
  double tau = 0.0;  // <= 0 selects DefaultStepSizes
  double sigma = 0.0;
  double tol = 1e-6;
  int max_iter = 100000;
  RestartPolicy restart = AdaptiveRestart{};
  bool record_history = false;
  // Called after every iteration when set. Makes the solve slower.
  std::function<void(const IterateView&)> observer;
};

struct WarmStart {
  Vector x0;
  Vector y0;
};

enum class SolveStatus { kOptimal, kIterLimit, kNumericalFailure };

const char* SolveStatusName(SolveStatus s);

struct HistoryRecord {
  int iteration = 0;
  KktReport current;
  KktReport average;
};

struct SolverResult {
  Vector x;
  Vector y;
  Vector x_avg;
  Vector y_avg;
  int iterations = 0;
  int restarts = 0;
  SolveStatus status = SolveStatus::kIterLimit;
  KktReport final_kkt;
  std::vector<HistoryRecord> history;
  double solve_seconds = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
};

SolverResult PdhgSolve(const LpInstance& inst, const SolverConfig& cfg,
                       const std::optional<WarmStart>& warm = std::nullopt);

// (1/2k) (||x-x0||^2/tau + ||y-y0||^2/sigma - (y-y0)^T G (x-x0)).
double ErgodicGapBound(std::span<const double> x, std::span<const double> y,
                       std::span<const double> x0, std::span<const double> y0,
                       const LpInstance& inst, double tau, double sigma, int k);

enum class RestartAction { kContinue, kRestart };

struct RestartState {
  int iterations_since_restart = 0;
  double average_max_residual = 0.0;
  double last_restart_max_residual = 0.0;
};

// Pure restart rule. Adaptive: on multiples of check_period, restart when the
// average's max KKT residual is at most beta times the value recorded at the
// previous restart. Fixed: every period iterations.
RestartAction RestartDecision(const RestartPolicy& policy,
                              const RestartState& state);

}  // namespace pdhgnet

#endif  // PDHGNET_SOLVER_HPP_
