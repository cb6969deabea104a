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

#ifndef PDHGNET_NET_HPP_
#define PDHGNET_NET_HPP_

// Unrolled PDHG network. For k = 0..K-1,
//   X^{k+1} = ReLU(X^k U_x - tau_k (c 1^T - G^T Y^k U_y))
//   Y^{k+1} = ReLU(Y^k V_y + sigma_k (h 1^T - 2 G X^{k+1} W_x + G X^k V_x))
// starting from X^0 = [x0, l, u, c] and Y^0 = [y0, h], followed by linear
// readouts x = X^K r_x and y = Y^K r_y.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pdhgnet/linalg.hpp"
#include "pdhgnet/lp.hpp"

namespace pdhgnet {

inline constexpr Index kPrimalInputWidth = 4;
inline constexpr Index kDualInputWidth = 2;
inline constexpr Index kMinAlignedWidth = 10;
inline constexpr double kDefaultBoundCap = 1e8;
// Cap used for trainable networks, where huge feature values stall Adam.
inline constexpr double kTrainableBoundCap = 10.0;

struct PrimalBlockParams {
  double tau = 0.0;
  DenseMatrix u_x;  // in_x x d
  DenseMatrix u_y;  // in_y x d

  bool operator==(const PrimalBlockParams&) const = default;
};

struct DualBlockParams {
  double sigma = 0.0;
  DenseMatrix v_y;  // in_y x d
  DenseMatrix v_x;  // in_x x d
  DenseMatrix w_x;  // d x d

  bool operator==(const DualBlockParams&) const = default;
};

struct NetParams {
  // Hidden widths d_1..d_K. Inputs have kPrimalInputWidth / kDualInputWidth
  // channels.
  std::vector<Index> widths;
  std::vector<PrimalBlockParams> primal;
  std::vector<DualBlockParams> dual;
  Vector readout_x;  // d_K
  Vector readout_y;  // d_K
  // Cap applied to infinite bounds when building input features.
  double bound_cap = kDefaultBoundCap;

  int depth() const { return static_cast<int>(widths.size()); }
  Index primal_in(int k) const { return k == 0 ? kPrimalInputWidth : widths[k - 1]; }
  Index dual_in(int k) const { return k == 0 ? kDualInputWidth : widths[k - 1]; }

  // Throws kIntegrity when the shape chain is inconsistent or any entry is
  // non-finite.
  void Validate() const;

  std::size_t NumParameters() const;
  // Order per layer: tau, U_x, U_y, sigma, V_y, V_x, W_x; then r_x, r_y.
  Vector Flatten() const;
  void Assign(std::span<const double> flat);

  // Same shapes, every entry zero.
  NetParams ZerosLike() const;

  bool operator==(const NetParams&) const = default;
};

struct NetInputs {
  DenseMatrix x0;  // n x 4
  DenseMatrix y0;  // m x 2
};

// X^0 = [0, max(l, -cap), min(u, cap), c], Y^0 = [0, h].
NetInputs BuildInputs(const LpInstance& inst, double bound_cap);

struct ForwardTrace {
  std::vector<DenseMatrix> x;    // X^0..X^K
  std::vector<DenseMatrix> y;    // Y^0..Y^K
  std::vector<DenseMatrix> pre_x;  // A^k, pre-activation of X^{k+1}
  std::vector<DenseMatrix> pre_y;  // B^k, pre-activation of Y^{k+1}
  // G^T Y^k U_y and h 1^T + G(-2 X^{k+1} W_x + X^k V_x), kept for the
  // step-size gradients.
  std::vector<DenseMatrix> primal_coupling;
  std::vector<DenseMatrix> dual_coupling;
};

struct ForwardResult {
  Vector x;  // raw readout, not projected
  Vector y;
  std::optional<ForwardTrace> trace;
};

ForwardResult Forward(const NetParams& params, const LpInstance& inst,
                      const NetInputs& inputs, bool keep_trace = false);

// Box projection for x and clamping at zero for y, applied before the
// prediction is used as a warm start.
void ProjectPrediction(const LpInstance& inst, Vector& x, Vector& y);

// ||x - x*||^2 + ||y - y*||^2.
double InstanceLoss(std::span<const double> x, std::span<const double> y,
                    std::span<const double> label_x,
                    std::span<const double> label_y);

// Reverse-mode gradient of InstanceLoss through the trace. The result has
// the same shapes as params (widths and bound_cap are copied, not
// differentiated).
NetParams Backward(const NetParams& params, const LpInstance& inst,
                   const ForwardTrace& trace, std::span<const double> label_x,
                   std::span<const double> label_y);

// Parameters under which the network reproduces PDHG with constant steps,
// together with the data-independent recovery matrices: X^k P_x^k has columns
// [xbar^k, x^k, l, u, c] and Y^k P_y^k has columns [ybar^k, y^k, h].
struct AlignedNet {
  NetParams params;
  std::vector<DenseMatrix> primal_recovery;  // P_x^k, d_k x 5, k = 0..K
  std::vector<DenseMatrix> dual_recovery;    // P_y^k, d_k x 3, k = 0..K
};

// Throws kUnsupportedWidth if any width is below kMinAlignedWidth.
AlignedNet ConstructThetaPdhg(const std::vector<Index>& widths, double tau,
                              double sigma);

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights from a seeded generator.
NetParams InitTrainable(const std::vector<Index>& widths, double tau,
                        double sigma, std::uint64_t seed,
                        double bound_cap = kDefaultBoundCap);

}  // namespace pdhgnet

#endif  // PDHGNET_NET_HPP_
