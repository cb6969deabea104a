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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "pdhgnet/error.hpp"

namespace pdhgnet {

TwoStageResult TwoStageSolve(const LpInstance& inst, const NetParams& params,
                             const SolverConfig& cfg, bool compare_cold) {
  TwoStageResult out;
  const auto t0 = std::chrono::steady_clock::now();
  ForwardResult fr;
  try {
    fr = Forward(params, inst, BuildInputs(inst, params.bound_cap));
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("inference stage: ") + e.what());
  }
  ProjectPrediction(inst, fr.x, fr.y);
  out.inference_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.x_hat = fr.x;
  out.y_hat = fr.y;
  try {
    out.warm_result = PdhgSolve(inst, cfg, WarmStart{fr.x, fr.y});
    if (compare_cold) out.cold_result = PdhgSolve(inst, cfg);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("solve stage: ") + e.what());
  }
  if (out.cold_result) {
    const SolverResult& cold = *out.cold_result;
    if (cold.iterations > 0) {
      out.improvement_iters = ImprovementRatio(cold.iterations,
                                               out.warm_result.iterations);
    }
    if (cold.solve_seconds > 0.0) {
      out.improvement_time = ImprovementRatio(
          cold.solve_seconds,
          out.warm_result.solve_seconds + out.inference_seconds);
    }
  }
  return out;
}

double ImprovementRatio(double baseline, double ours) {
  if (!(baseline > 0.0)) ThrowUsage("improvement ratio needs a positive baseline");
  return (baseline - ours) / baseline;
}

std::vector<ExtrapolationRow> ExtrapolationStudy(
    const LpInstance& inst, std::span<const double> x_star,
    std::span<const double> y_star, std::span<const double> x0,
    std::span<const double> y0, std::vector<double> alphas,
    const SolverConfig& cfg) {
  const auto n = static_cast<std::size_t>(inst.num_vars());
  const auto m = static_cast<std::size_t>(inst.num_cons());
  if (x_star.size() != n || x0.size() != n || y_star.size() != m ||
      y0.size() != m) {
    ThrowUsage("extrapolation: label and prediction dimensions differ");
  }
  std::sort(alphas.begin(), alphas.end());
  std::vector<ExtrapolationRow> rows;
  for (double a : alphas) {
    if (!(a >= 0.0)) ThrowUsage("extrapolation: alpha must be >= 0");
    Vector x(n), y(m);
    for (std::size_t i = 0; i < n; ++i) x[i] = x_star[i] + a * (x0[i] - x_star[i]);
    for (std::size_t i = 0; i < m; ++i) y[i] = y_star[i] + a * (y0[i] - y_star[i]);
    x = ProjectBox(x, inst.l, inst.u);
    y = ProjectNonneg(y);
    ExtrapolationRow row;
    row.alpha = a;
    const double dx = Distance(x, x_star);
    const double dy = Distance(y, y_star);
    row.start_distance = std::sqrt(dx * dx + dy * dy);
    const SolverResult r = PdhgSolve(inst, cfg, WarmStart{std::move(x), std::move(y)});
    row.iterations = r.iterations;
    row.restarts = r.restarts;
    row.solve_seconds = r.solve_seconds;
    row.status = r.status;
    rows.push_back(row);
  }
  return rows;
}

namespace {

Vector Ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  Vector ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double SpearmanCorrelation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) ThrowUsage("spearman: length mismatch");
  if (a.size() < 2) return 0.0;
  const Vector ra = Ranks(a);
  const Vector rb = Ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

TimingReport BuildTimingReport(const std::vector<TimingSample>& samples) {
  if (samples.empty()) ThrowUsage("timing report needs at least one result");
  std::map<Index, std::vector<const TimingSample*>> by_n;
  for (const TimingSample& s : samples) by_n[s.n].push_back(&s);
  TimingReport rep;
  for (const auto& [n, group] : by_n) {
    TimingRow row;
    row.n = n;
    row.count = static_cast<int>(group.size());
    int finite = 0;
    for (const TimingSample* s : group) {
      row.mean_inference_seconds += s->inference_seconds;
      row.mean_solve_seconds += s->solve_seconds;
      if (s->solve_seconds > 0.0) {
        row.mean_ratio += s->inference_seconds / s->solve_seconds;
        ++finite;
      } else {
        row.infinite_ratio = true;
      }
    }
    row.mean_inference_seconds /= row.count;
    row.mean_solve_seconds /= row.count;
    row.mean_ratio = finite > 0 ? row.mean_ratio / finite
                                : std::numeric_limits<double>::infinity();
    rep.rows.push_back(row);
  }
  rep.ratio_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (!(rep.rows[i].mean_ratio < rep.rows[i - 1].mean_ratio)) {
      rep.ratio_decreasing = false;
    }
  }
  return rep;
}

double AlignmentReport::MaxDeviation() const {
  double d = output_deviation;
  for (const auto* v : {&primal_avg, &primal, &dual_avg, &dual}) {
    for (double e : *v) d = std::max(d, e);
  }
  return d;
}

namespace {

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

AlignmentReport CheckAlignment(const AlignedNet& net, const LpInstance& inst,
                               double tau, double sigma) {
  const NetParams& p = net.params;
  const int depth = p.depth();
  const auto n = static_cast<std::size_t>(inst.num_vars());
  const auto m = static_cast<std::size_t>(inst.num_cons());

  // Solver iterates 0..K; the average at k = 0 is the start point.
  std::vector<Vector> xs{Vector(n, 0.0)}, ys{Vector(m, 0.0)};
  std::vector<Vector> xa{Vector(n, 0.0)}, ya{Vector(m, 0.0)};
  SolverConfig cfg;
  cfg.tau = tau;
  cfg.sigma = sigma;
  cfg.tol = 0.0;
  cfg.max_iter = depth;
  cfg.restart = NoRestart{};
  cfg.observer = [&](const IterateView& v) {
    xs.emplace_back(v.x.begin(), v.x.end());
    ys.emplace_back(v.y.begin(), v.y.end());
    xa.emplace_back(v.x_avg.begin(), v.x_avg.end());
    ya.emplace_back(v.y_avg.begin(), v.y_avg.end());
  };
  PdhgSolve(inst, cfg);
  if (static_cast<int>(xs.size()) != depth + 1) {
    throw Error(ErrorKind::kNumerical, "alignment: solver stopped before " +
                                           std::to_string(depth) + " iterations");
  }

  const ForwardResult fr =
      Forward(p, inst, BuildInputs(inst, p.bound_cap), /*keep_trace=*/true);
  AlignmentReport rep;
  rep.output_deviation = std::max(MaxAbsDiff(fr.x, xa[static_cast<std::size_t>(depth)]),
                                  MaxAbsDiff(fr.y, ya[static_cast<std::size_t>(depth)]));
  for (int k = 0; k <= depth; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const DenseMatrix& px = net.primal_recovery[ks];
    const DenseMatrix& py = net.dual_recovery[ks];
    const DenseMatrix rx = MatMul(fr.trace->x[ks], px);
    const DenseMatrix ry = MatMul(fr.trace->y[ks], py);
    rep.primal_avg.push_back(MaxAbsDiff(rx.Column(0), xa[ks]));
    rep.primal.push_back(MaxAbsDiff(rx.Column(1), xs[ks]));
    rep.dual_avg.push_back(MaxAbsDiff(ry.Column(0), ya[ks]));
    rep.dual.push_back(MaxAbsDiff(ry.Column(1), ys[ks]));
  }
  return rep;
}

}  // namespace pdhgnet
