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

#include "pdhgnet/solver.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "pdhgnet/error.hpp"

namespace pdhgnet {

const char* SolveStatusName(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kIterLimit:
      return "IterLimit";
    case SolveStatus::kNumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

StepSizes DefaultStepSizes(const LpInstance& inst) {
  StepSizes s;
  if (inst.g.rows() == 0 || inst.g.cols() == 0) {
    s.zero_matrix = true;
    return s;
  }
  const SpectralNormEstimate est = EstimateSpectralNorm(inst.g);
  s.norm_estimate = est.value;
  if (est.zero_matrix) {
    s.zero_matrix = true;
    return s;
  }
  s.tau = 0.9 / est.value;
  s.sigma = 0.9 / est.value;
  return s;
}

RestartAction RestartDecision(const RestartPolicy& policy,
                              const RestartState& state) {
  if (state.iterations_since_restart < 1) return RestartAction::kContinue;
  if (const auto* a = std::get_if<AdaptiveRestart>(&policy)) {
    if (state.iterations_since_restart % a->check_period != 0) {
      return RestartAction::kContinue;
    }
    return state.average_max_residual <=
                   a->beta * state.last_restart_max_residual
               ? RestartAction::kRestart
               : RestartAction::kContinue;
  }
  if (const auto* f = std::get_if<FixedRestart>(&policy)) {
    return state.iterations_since_restart % f->period == 0
               ? RestartAction::kRestart
               : RestartAction::kContinue;
  }
  return RestartAction::kContinue;
}

namespace {

void ValidateConfig(const SolverConfig& cfg) {
  if (!(cfg.tol >= 0.0)) ThrowUsage("tol must be nonnegative");
  if (cfg.max_iter < 0) ThrowUsage("max_iter must be nonnegative");
  if (const auto* a = std::get_if<AdaptiveRestart>(&cfg.restart)) {
    if (!(a->beta > 0.0 && a->beta < 1.0)) {
      ThrowUsage("adaptive restart beta must lie in (0, 1)");
    }
    if (a->check_period < 1) ThrowUsage("restart check period must be >= 1");
  }
  if (const auto* f = std::get_if<FixedRestart>(&cfg.restart)) {
    if (f->period < 1) ThrowUsage("fixed restart period must be >= 1");
  }
}

void Scale(std::span<const double> src, double alpha, Vector& dst) {
  dst.resize(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * alpha;
}

void AddTo(Vector& acc, std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}

}  // namespace

SolverResult PdhgSolve(const LpInstance& inst, const SolverConfig& cfg,
                       const std::optional<WarmStart>& warm) {
  inst.Validate();
  ValidateConfig(cfg);
  const auto start_time = std::chrono::steady_clock::now();
  const Index n = inst.num_vars();
  const Index m = inst.num_cons();

  double tau = cfg.tau;
  double sigma = cfg.sigma;
  if (!(tau > 0.0) || !(sigma > 0.0)) {
    const StepSizes s = DefaultStepSizes(inst);
    tau = s.tau;
    sigma = s.sigma;
  }

  Vector x(n, 0.0);
  Vector y(m, 0.0);
  if (warm) {
    if (static_cast<Index>(warm->x0.size()) != n ||
        static_cast<Index>(warm->y0.size()) != m) {
      ThrowUsage("warm start dimensions (" + std::to_string(warm->x0.size()) +
                 ", " + std::to_string(warm->y0.size()) +
                 ") do not match instance (" + std::to_string(n) + ", " +
                 std::to_string(m) + ")");
    }
    if (!AllFinite(warm->x0) || !AllFinite(warm->y0)) {
      ThrowUsage("warm start contains non-finite entries");
    }
    x = ProjectBox(warm->x0, inst.l, inst.u);
    y = ProjectNonneg(warm->y0);
  } else {
    x = ProjectBox(x, inst.l, inst.u);
  }

  Vector gx = Spmv(inst.g, x);
  Vector gty = SpmvT(inst.g, y);

  SolverResult res;
  res.tau = tau;
  res.sigma = sigma;

  Vector sum_x(n, 0.0), sum_y(m, 0.0), sum_gx(m, 0.0), sum_gty(n, 0.0);
  int count = 0;
  Vector x_avg, y_avg, gx_avg, gty_avg;
  auto compute_average = [&] {
    const double inv = 1.0 / count;
    Scale(sum_x, inv, x_avg);
    Scale(sum_y, inv, y_avg);
    Scale(sum_gx, inv, gx_avg);
    Scale(sum_gty, inv, gty_avg);
  };

  KktReport kkt = KktResidualsFromProducts(inst, x, y, gx, gty);
  double last_restart_residual = kkt.MaxResidual();
  int since_restart = 0;

  auto finish = [&](SolveStatus status) {
    res.status = status;
    res.final_kkt = kkt;
    if (count > 0) {
      compute_average();
      res.x_avg = x_avg;
      res.y_avg = y_avg;
    } else {
      res.x_avg = x;
      res.y_avg = y;
    }
    res.x = std::move(x);
    res.y = std::move(y);
    res.solve_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start_time)
                            .count();
  };

  if (kkt.MaxResidual() <= cfg.tol) {
    finish(SolveStatus::kOptimal);
    return res;
  }

  Vector x_next(n), y_next(m);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    for (Index i = 0; i < n; ++i) {
      const double z = x[i] - tau * (inst.c[i] - gty[i]);
      x_next[i] = std::min(std::max(z, inst.l[i]), inst.u[i]);
    }
    Vector gx_next = Spmv(inst.g, x_next);
    for (Index i = 0; i < m; ++i) {
      const double z = y[i] + sigma * (inst.h[i] - 2.0 * gx_next[i] + gx[i]);
      y_next[i] = std::max(z, 0.0);
    }
    Vector gty_next = SpmvT(inst.g, y_next);
    x.swap(x_next);
    y.swap(y_next);
    gx = std::move(gx_next);
    gty = std::move(gty_next);
    res.iterations = it;
    ++since_restart;

    ++count;
    AddTo(sum_x, x);
    AddTo(sum_y, y);
    AddTo(sum_gx, gx);
    AddTo(sum_gty, gty);

    kkt = KktResidualsFromProducts(inst, x, y, gx, gty);
    const bool finite = std::isfinite(kkt.primal_residual) &&
                        std::isfinite(kkt.dual_residual) &&
                        std::isfinite(kkt.rel_gap);
    if (!finite) {
      finish(SolveStatus::kNumericalFailure);
      return res;
    }

    if (cfg.observer || cfg.record_history) {
      compute_average();
      if (cfg.observer) {
        cfg.observer(IterateView{it, x, y, x_avg, y_avg});
      }
      if (cfg.record_history) {
        res.history.push_back(
            {it, kkt,
             KktResidualsFromProducts(inst, x_avg, y_avg, gx_avg, gty_avg)});
      }
    }

    if (kkt.MaxResidual() <= cfg.tol) {
      finish(SolveStatus::kOptimal);
      return res;
    }

    if (std::holds_alternative<NoRestart>(cfg.restart)) continue;
    RestartState state;
    state.iterations_since_restart = since_restart;
    state.last_restart_max_residual = last_restart_residual;
    const bool adaptive_check =
        std::holds_alternative<AdaptiveRestart>(cfg.restart) &&
        since_restart % std::get<AdaptiveRestart>(cfg.restart).check_period ==
            0;
    KktReport avg_kkt;
    if (adaptive_check) {
      compute_average();
      avg_kkt = KktResidualsFromProducts(inst, x_avg, y_avg, gx_avg, gty_avg);
      state.average_max_residual = avg_kkt.MaxResidual();
    }
    if (RestartDecision(cfg.restart, state) == RestartAction::kRestart) {
      if (!adaptive_check) {
        compute_average();
        avg_kkt = KktResidualsFromProducts(inst, x_avg, y_avg, gx_avg, gty_avg);
      }
      x = x_avg;
      y = y_avg;
      gx = gx_avg;
      gty = gty_avg;
      kkt = avg_kkt;
      last_restart_residual = avg_kkt.MaxResidual();
      std::fill(sum_x.begin(), sum_x.end(), 0.0);
      std::fill(sum_y.begin(), sum_y.end(), 0.0);
      std::fill(sum_gx.begin(), sum_gx.end(), 0.0);
      std::fill(sum_gty.begin(), sum_gty.end(), 0.0);
      count = 0;
      since_restart = 0;
      ++res.restarts;
      if (kkt.MaxResidual() <= cfg.tol) {
        finish(SolveStatus::kOptimal);
        return res;
      }
    }
  }
  finish(SolveStatus::kIterLimit);
  return res;
}

double ErgodicGapBound(std::span<const double> x, std::span<const double> y,
                       std::span<const double> x0, std::span<const double> y0,
                       const LpInstance& inst, double tau, double sigma,
                       int k) {
  if (k < 1) ThrowUsage("ergodic bound needs k >= 1");
  if (!(tau > 0.0) || !(sigma > 0.0)) ThrowUsage("step sizes must be positive");
  Vector dx(x.size()), dy(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] - x0[i];
  for (std::size_t i = 0; i < y.size(); ++i) dy[i] = y[i] - y0[i];
  const double cross = Dot(dy, Spmv(inst.g, dx));
  return (SquaredNorm(dx) / tau + SquaredNorm(dy) / sigma - cross) /
         (2.0 * k);
}

}  // namespace pdhgnet
