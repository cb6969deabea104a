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

#include "pdhgnet/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "pdhgnet/error.hpp"
#include "pdhgnet/parallel.hpp"

namespace pdhgnet {

LabelingReport GenerateLabels(const std::vector<LpInstance>& instances,
                              const SolverConfig& cfg, int threads) {
  if (!(cfg.tol > 0.0)) ThrowUsage("label tolerance must be > 0");
  std::vector<SolverResult> results(instances.size());
  ParallelFor(
      instances.size(),
      [&](std::size_t i) { results[i] = PdhgSolve(instances[i], cfg); },
      threads);
  LabelingReport rep;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (results[i].status != SolveStatus::kOptimal) {
      rep.excluded.push_back(instances[i].name);
      continue;
    }
    rep.labeled.push_back({instances[i], std::move(results[i].x),
                           std::move(results[i].y), cfg.tol});
  }
  if (rep.labeled.empty()) {
    throw Error(ErrorKind::kEmptyDataset,
                "no instance converged to the label tolerance");
  }
  return rep;
}

std::pair<std::vector<LabeledInstance>, std::vector<LabeledInstance>> Split(
    const std::vector<LabeledInstance>& dataset, double ratio,
    std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (n < 2) ThrowUsage("split needs at least 2 instances");
  if (!(ratio > 0.0 && ratio < 1.0)) ThrowUsage("split ratio must lie in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_train =
      static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  std::pair<std::vector<LabeledInstance>, std::vector<LabeledInstance>> out;
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? out.first : out.second).push_back(dataset[order[i]]);
  }
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) ThrowUsage("learning rate must be > 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) ThrowUsage("beta1 must lie in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) ThrowUsage("beta2 must lie in [0, 1)");
  if (!(adam_eps > 0.0)) ThrowUsage("adam eps must be > 0");
  if (epochs < 0) ThrowUsage("epochs must be >= 0");
  if (batch_size < 1) ThrowUsage("batch size must be >= 1");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    ThrowUsage("split ratio must lie in (0, 1)");
  }
}

AdamState AdamState::ForParams(Vector params) {
  AdamState s;
  s.first_moment.assign(params.size(), 0.0);
  s.second_moment.assign(params.size(), 0.0);
  s.params = std::move(params);
  return s;
}

AdamState AdamUpdate(const AdamState& state, std::span<const double> grads,
                     const TrainConfig& cfg) {
  if (grads.size() != state.params.size()) {
    ThrowUsage("adam: gradient length does not match parameters");
  }
  AdamState next = state;
  next.step = state.step + 1;
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(next.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(next.step));
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double g = grads[i];
    next.first_moment[i] = b1 * state.first_moment[i] + (1.0 - b1) * g;
    next.second_moment[i] = b2 * state.second_moment[i] + (1.0 - b2) * g * g;
    const double m_hat = next.first_moment[i] / c1;
    const double v_hat = next.second_moment[i] / c2;
    next.params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
  }
  return next;
}

namespace {

double LossWeight(const LabeledInstance& li, bool normalize_by_dim) {
  if (!normalize_by_dim) return 1.0;
  return 1.0 / static_cast<double>(li.instance.num_vars() +
                                   li.instance.num_cons());
}

}  // namespace

double DatasetLoss(const NetParams& params,
                   const std::vector<LabeledInstance>& data,
                   bool normalize_by_dim, int threads) {
  if (data.empty()) return 0.0;
  std::vector<double> losses(data.size());
  ParallelFor(
      data.size(),
      [&](std::size_t i) {
        const LabeledInstance& li = data[i];
        const ForwardResult fr =
            Forward(params, li.instance, BuildInputs(li.instance, params.bound_cap));
        losses[i] = LossWeight(li, normalize_by_dim) *
                    InstanceLoss(fr.x, fr.y, li.x_star, li.y_star);
      },
      threads);
  double sum = 0.0;
  for (double v : losses) sum += v;
  return sum / static_cast<double>(data.size());
}

NetParams BatchGradient(const NetParams& params,
                        const std::vector<const LabeledInstance*>& batch,
                        bool normalize_by_dim, int threads, double* loss_out) {
  std::vector<Vector> grads(batch.size());
  std::vector<double> losses(batch.size());
  ParallelFor(
      batch.size(),
      [&](std::size_t i) {
        const LabeledInstance& li = *batch[i];
        const ForwardResult fr = Forward(
            params, li.instance, BuildInputs(li.instance, params.bound_cap), true);
        const double w = LossWeight(li, normalize_by_dim);
        losses[i] = w * InstanceLoss(fr.x, fr.y, li.x_star, li.y_star);
        grads[i] = Backward(params, li.instance, *fr.trace, li.x_star, li.y_star)
                       .Flatten();
        for (double& g : grads[i]) g *= w;
      },
      threads);
  const double inv = 1.0 / static_cast<double>(batch.size());
  Vector sum(params.NumParameters(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += grads[i][j];
    loss += losses[i];
  }
  for (double& g : sum) g *= inv;
  if (loss_out) *loss_out = loss * inv;
  NetParams out = params;
  out.Assign(sum);
  return out;
}

TrainResult Train(const std::vector<LabeledInstance>& train,
                  const std::vector<LabeledInstance>& validation,
                  const NetParams& init, const TrainConfig& cfg) {
  cfg.Validate();
  init.Validate();
  if (train.empty()) ThrowUsage("training split is empty");

  TrainResult result;
  result.params = init;
  NetParams current = init;
  AdamState adam = AdamState::ForParams(init.Flatten());
  double best = kInf;

  auto record = [&](int epoch) {
    const double tl = DatasetLoss(current, train, cfg.normalize_by_dim, cfg.threads);
    const double vl = validation.empty()
                          ? tl
                          : DatasetLoss(current, validation,
                                        cfg.normalize_by_dim, cfg.threads);
    if (!std::isfinite(tl) || !std::isfinite(vl)) {
      throw Error(ErrorKind::kDivergence,
                  "loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.history.train_loss.push_back(tl);
    result.history.validation_loss.push_back(vl);
    result.history.validation_distance.push_back(
        validation.empty() ? 0.0
                           : EvaluateDistance(current, validation, cfg.threads)
                                 .mean_total);
    if (vl < best) {
      best = vl;
      result.history.best_epoch = epoch;
      result.params = current;
    }
  };

  record(0);
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<const LabeledInstance*> batch;
      for (std::size_t i = start; i < stop; ++i) batch.push_back(&train[order[i]]);
      double batch_loss = 0.0;
      const NetParams grad = BatchGradient(current, batch, cfg.normalize_by_dim,
                                           cfg.threads, &batch_loss);
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorKind::kDivergence,
                    "batch loss became non-finite in epoch " +
                        std::to_string(epoch));
      }
      adam = AdamUpdate(adam, grad.Flatten(), cfg);
      current.Assign(adam.params);
    }
    record(epoch);
  }
  return result;
}

DistanceReport EvaluateDistance(const NetParams& params,
                                const std::vector<LabeledInstance>& dataset,
                                int threads) {
  DistanceReport rep;
  const std::size_t n = dataset.size();
  rep.primal.resize(n);
  rep.dual.resize(n);
  rep.total.resize(n);
  ParallelFor(
      n,
      [&](std::size_t i) {
        const LabeledInstance& li = dataset[i];
        const ForwardResult fr =
            Forward(params, li.instance, BuildInputs(li.instance, params.bound_cap));
        rep.primal[i] = Distance(fr.x, li.x_star);
        rep.dual[i] = Distance(fr.y, li.y_star);
        rep.total[i] = std::sqrt(InstanceLoss(fr.x, fr.y, li.x_star, li.y_star));
      },
      threads);
  if (n > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      rep.mean_primal += rep.primal[i];
      rep.mean_dual += rep.dual[i];
      rep.mean_total += rep.total[i];
    }
    rep.mean_primal /= static_cast<double>(n);
    rep.mean_dual /= static_cast<double>(n);
    rep.mean_total /= static_cast<double>(n);
  }
  return rep;
}

}  // namespace pdhgnet
