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

#ifndef PDHGNET_TRAINER_HPP_
#define PDHGNET_TRAINER_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pdhgnet/lp.hpp"
#include "pdhgnet/net.hpp"
#include "pdhgnet/solver.hpp"

namespace pdhgnet {

struct LabeledInstance {
  LpInstance instance;
  Vector x_star;
  Vector y_star;
  double label_tol = 0.0;
};

struct LabelingReport {
  std::vector<LabeledInstance> labeled;
  std::vector<std::string> excluded;  // names of instances that did not converge
};

// Solves every instance with cfg (cfg.tol must be > 0) and keeps the
// converged ones. Throws kEmptyDataset when none converge.
LabelingReport GenerateLabels(const std::vector<LpInstance>& instances,
                              const SolverConfig& cfg, int threads = 0);

// Seeded shuffle, then the first ceil(ratio * N) go to training (at most
// N - 1, so validation is never empty).
std::pair<std::vector<LabeledInstance>, std::vector<LabeledInstance>> Split(
    const std::vector<LabeledInstance>& dataset, double ratio,
    std::uint64_t seed);

struct TrainConfig {
  double learning_rate = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int epochs = 200;
  int batch_size = 8;
  double split_ratio = 0.9;
  std::uint64_t seed = 0;
  // Divide each instance loss by n + m.
  bool normalize_by_dim = false;
  int threads = 0;

  void Validate() const;
};

struct AdamState {
  Vector params;
  Vector first_moment;
  Vector second_moment;
  long step = 0;

  static AdamState ForParams(Vector params);
};

AdamState AdamUpdate(const AdamState& state, std::span<const double> grads,
                     const TrainConfig& cfg);

struct TrainHistory {
  std::vector<double> train_loss;       // index 0 is the initial network
  std::vector<double> validation_loss;
  std::vector<double> validation_distance;
  int best_epoch = 0;
};

struct TrainResult {
  NetParams params;  // parameters of best_epoch
  TrainHistory history;
};

// Mean InstanceLoss (with cfg.normalize_by_dim) over a dataset.
double DatasetLoss(const NetParams& params,
                   const std::vector<LabeledInstance>& data,
                   bool normalize_by_dim = false, int threads = 0);

// Batch gradient of the mean loss, summed in dataset order.
NetParams BatchGradient(const NetParams& params,
                        const std::vector<const LabeledInstance*>& batch,
                        bool normalize_by_dim, int threads, double* loss_out);

// Mini-batch Adam from `init`; returns the parameters with the lowest
// validation loss among epochs 0..cfg.epochs.
TrainResult Train(const std::vector<LabeledInstance>& train,
                  const std::vector<LabeledInstance>& validation,
                  const NetParams& init, const TrainConfig& cfg);

struct DistanceReport {
  std::vector<double> primal;  // ||x - x*|| per instance
  std::vector<double> dual;    // ||y - y*||
  std::vector<double> total;   // sqrt(loss)
  double mean_primal = 0.0;
  double mean_dual = 0.0;
  double mean_total = 0.0;
};

// Distances of the raw network outputs from the labels.
DistanceReport EvaluateDistance(const NetParams& params,
                                const std::vector<LabeledInstance>& dataset,
                                int threads = 0);

}  // namespace pdhgnet

#endif  // PDHGNET_TRAINER_HPP_
