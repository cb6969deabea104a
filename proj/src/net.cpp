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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pdhgnet/error.hpp"

namespace pdhgnet {
namespace {

void CheckShape(const DenseMatrix& m, Index rows, Index cols,
                const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorKind::kIntegrity,
                what + " has shape " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!AllFinite(m.data())) {
    throw Error(ErrorKind::kIntegrity, what + " has non-finite entries");
  }
}

void AppendMatrix(const DenseMatrix& m, Vector& out) {
  out.insert(out.end(), m.data().begin(), m.data().end());
}

void ReadMatrix(std::span<const double> flat, std::size_t& pos,
                DenseMatrix& m) {
  auto dst = m.data();
  std::copy(flat.begin() + pos, flat.begin() + pos + dst.size(), dst.begin());
  pos += dst.size();
}

void AddInPlace(DenseMatrix& acc, const DenseMatrix& v) {
  auto a = acc.data();
  const auto b = v.data();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

DenseMatrix Relu(const DenseMatrix& pre) {
  DenseMatrix out = pre;
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return out;
}

// dPre = dPost where the unit was active; the subgradient at 0 is 0.
DenseMatrix ReluBackward(const DenseMatrix& pre, const DenseMatrix& d_post) {
  DenseMatrix out = d_post;
  auto o = out.data();
  const auto p = pre.data();
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (!(p[i] > 0.0)) o[i] = 0.0;
  }
  return out;
}

double SumProduct(const DenseMatrix& a, const DenseMatrix& b) {
  return Dot(a.data(), b.data());
}

void CheckFinite(const DenseMatrix& m, int layer, const char* what) {
  if (!AllFinite(m.data())) {
    throw Error(ErrorKind::kNumerical, std::string("non-finite ") + what +
                                           " at layer " +
                                           std::to_string(layer + 1));
  }
}

}  // namespace

void NetParams::Validate() const {
  const int k_layers = depth();
  if (k_layers < 1) throw Error(ErrorKind::kIntegrity, "network depth must be >= 1");
  if (static_cast<int>(primal.size()) != k_layers ||
      static_cast<int>(dual.size()) != k_layers) {
    throw Error(ErrorKind::kIntegrity, "block count does not match depth");
  }
  for (int k = 0; k < k_layers; ++k) {
    const Index d = widths[k];
    if (d < 1) throw Error(ErrorKind::kIntegrity, "widths must be >= 1");
    const std::string tag = " of layer " + std::to_string(k);
    if (!std::isfinite(primal[k].tau) || !std::isfinite(dual[k].sigma)) {
      throw Error(ErrorKind::kIntegrity, "non-finite step size" + tag);
    }
    CheckShape(primal[k].u_x, primal_in(k), d, "U_x" + tag);
    CheckShape(primal[k].u_y, dual_in(k), d, "U_y" + tag);
    CheckShape(dual[k].v_y, dual_in(k), d, "V_y" + tag);
    CheckShape(dual[k].v_x, primal_in(k), d, "V_x" + tag);
    CheckShape(dual[k].w_x, d, d, "W_x" + tag);
  }
  if (static_cast<Index>(readout_x.size()) != widths.back() ||
      static_cast<Index>(readout_y.size()) != widths.back()) {
    throw Error(ErrorKind::kIntegrity, "readout length does not match d_K");
  }
  if (!AllFinite(readout_x) || !AllFinite(readout_y)) {
    throw Error(ErrorKind::kIntegrity, "non-finite readout");
  }
  if (!(bound_cap > 0.0)) {
    throw Error(ErrorKind::kIntegrity, "bound cap must be positive");
  }
}

std::size_t NetParams::NumParameters() const {
  std::size_t total = readout_x.size() + readout_y.size();
  for (int k = 0; k < depth(); ++k) {
    total += 2 + primal[k].u_x.data().size() + primal[k].u_y.data().size() +
             dual[k].v_y.data().size() + dual[k].v_x.data().size() +
             dual[k].w_x.data().size();
  }
  return total;
}

Vector NetParams::Flatten() const {
  Vector out;
  out.reserve(NumParameters());
  for (int k = 0; k < depth(); ++k) {
    out.push_back(primal[k].tau);
    AppendMatrix(primal[k].u_x, out);
    AppendMatrix(primal[k].u_y, out);
    out.push_back(dual[k].sigma);
    AppendMatrix(dual[k].v_y, out);
    AppendMatrix(dual[k].v_x, out);
    AppendMatrix(dual[k].w_x, out);
  }
  out.insert(out.end(), readout_x.begin(), readout_x.end());
  out.insert(out.end(), readout_y.begin(), readout_y.end());
  return out;
}

void NetParams::Assign(std::span<const double> flat) {
  if (flat.size() != NumParameters()) {
    ThrowUsage("parameter vector length " + std::to_string(flat.size()) +
               " does not match " + std::to_string(NumParameters()));
  }
  std::size_t pos = 0;
  for (int k = 0; k < depth(); ++k) {
    primal[k].tau = flat[pos++];
    ReadMatrix(flat, pos, primal[k].u_x);
    ReadMatrix(flat, pos, primal[k].u_y);
    dual[k].sigma = flat[pos++];
    ReadMatrix(flat, pos, dual[k].v_y);
    ReadMatrix(flat, pos, dual[k].v_x);
    ReadMatrix(flat, pos, dual[k].w_x);
  }
  std::copy(flat.begin() + pos, flat.begin() + pos + readout_x.size(),
            readout_x.begin());
  pos += readout_x.size();
  std::copy(flat.begin() + pos, flat.begin() + pos + readout_y.size(),
            readout_y.begin());
}

NetParams NetParams::ZerosLike() const {
  NetParams z = *this;
  z.Assign(Vector(NumParameters(), 0.0));
  return z;
}

NetInputs BuildInputs(const LpInstance& inst, double bound_cap) {
  if (!(bound_cap > 0.0)) ThrowUsage("bound_cap must be positive");
  const Index n = inst.num_vars();
  const Index m = inst.num_cons();
  NetInputs in{DenseMatrix(n, kPrimalInputWidth),
               DenseMatrix(m, kDualInputWidth)};
  for (Index i = 0; i < n; ++i) {
    in.x0(i, 1) = std::max(inst.l[i], -bound_cap);
    in.x0(i, 2) = std::min(inst.u[i], bound_cap);
    in.x0(i, 3) = inst.c[i];
  }
  for (Index i = 0; i < m; ++i) in.y0(i, 1) = inst.h[i];
  return in;
}

ForwardResult Forward(const NetParams& params, const LpInstance& inst,
                      const NetInputs& inputs, bool keep_trace) {
  if (params.depth() < 1) ThrowUsage("network depth must be >= 1");
  params.Validate();
  const Index n = inst.num_vars();
  const Index m = inst.num_cons();
  if (inputs.x0.rows() != n || inputs.x0.cols() != kPrimalInputWidth ||
      inputs.y0.rows() != m || inputs.y0.cols() != kDualInputWidth) {
    ThrowUsage("network inputs do not match the instance shape");
  }

  ForwardTrace trace;
  DenseMatrix x = inputs.x0;
  DenseMatrix y = inputs.y0;
  if (keep_trace) {
    trace.x.push_back(x);
    trace.y.push_back(y);
  }
  for (int k = 0; k < params.depth(); ++k) {
    const PrimalBlockParams& pb = params.primal[k];
    const DualBlockParams& db = params.dual[k];
    const Index d = params.widths[k];

    DenseMatrix coupling_x = SpmmT(inst.g, MatMul(y, pb.u_y));
    DenseMatrix pre_x = MatMul(x, pb.u_x);
    for (Index i = 0; i < n; ++i) {
      auto row = pre_x.row(i);
      const auto cr = coupling_x.row(i);
      for (Index j = 0; j < d; ++j) {
        row[j] -= pb.tau * (inst.c[i] - cr[j]);
      }
    }
    CheckFinite(pre_x, k, "primal pre-activation");
    DenseMatrix x_next = Relu(pre_x);

    DenseMatrix mix = MatMul(x_next, db.w_x);
    const DenseMatrix back = MatMul(x, db.v_x);
    {
      auto md = mix.data();
      const auto bd = back.data();
      for (std::size_t i = 0; i < md.size(); ++i) md[i] = -2.0 * md[i] + bd[i];
    }
    DenseMatrix coupling_y = Spmm(inst.g, mix);
    for (Index i = 0; i < m; ++i) {
      for (double& v : coupling_y.row(i)) v += inst.h[i];
    }
    DenseMatrix pre_y = MatMul(y, db.v_y);
    {
      auto pd = pre_y.data();
      const auto cd = coupling_y.data();
      for (std::size_t i = 0; i < pd.size(); ++i) pd[i] += db.sigma * cd[i];
    }
    CheckFinite(pre_y, k, "dual pre-activation");
    DenseMatrix y_next = Relu(pre_y);

    if (keep_trace) {
      trace.pre_x.push_back(std::move(pre_x));
      trace.pre_y.push_back(std::move(pre_y));
      trace.primal_coupling.push_back(std::move(coupling_x));
      trace.dual_coupling.push_back(std::move(coupling_y));
      trace.x.push_back(x_next);
      trace.y.push_back(y_next);
    }
    x = std::move(x_next);
    y = std::move(y_next);
  }

  ForwardResult out;
  out.x = MatVec(x, params.readout_x);
  out.y = MatVec(y, params.readout_y);
  if (!AllFinite(out.x) || !AllFinite(out.y)) {
    throw Error(ErrorKind::kNumerical, "non-finite network output");
  }
  if (keep_trace) out.trace = std::move(trace);
  return out;
}

void ProjectPrediction(const LpInstance& inst, Vector& x, Vector& y) {
  x = ProjectBox(x, inst.l, inst.u);
  y = ProjectNonneg(y);
}

double InstanceLoss(std::span<const double> x, std::span<const double> y,
                    std::span<const double> label_x,
                    std::span<const double> label_y) {
  if (x.size() != label_x.size() || y.size() != label_y.size()) {
    ThrowUsage("loss: output and label dimensions differ");
  }
  const double dx = Distance(x, label_x);
  const double dy = Distance(y, label_y);
  return dx * dx + dy * dy;
}

NetParams Backward(const NetParams& params, const LpInstance& inst,
                   const ForwardTrace& trace, std::span<const double> label_x,
                   std::span<const double> label_y) {
  const int k_layers = params.depth();
  if (static_cast<int>(trace.x.size()) != k_layers + 1 ||
      static_cast<int>(trace.pre_x.size()) != k_layers) {
    ThrowUsage("backward needs a trace recorded by forward on these params");
  }
  const Index n = inst.num_vars();
  const Index m = inst.num_cons();
  if (static_cast<Index>(label_x.size()) != n ||
      static_cast<Index>(label_y.size()) != m) {
    ThrowUsage("label dimensions do not match the instance");
  }

  NetParams grad = params.ZerosLike();
  const DenseMatrix& x_last = trace.x.back();
  const DenseMatrix& y_last = trace.y.back();
  const Vector out_x = MatVec(x_last, params.readout_x);
  const Vector out_y = MatVec(y_last, params.readout_y);
  Vector d_out_x(n), d_out_y(m);
  for (Index i = 0; i < n; ++i) d_out_x[i] = 2.0 * (out_x[i] - label_x[i]);
  for (Index i = 0; i < m; ++i) d_out_y[i] = 2.0 * (out_y[i] - label_y[i]);

  const Index d_last = params.widths.back();
  std::vector<DenseMatrix> dx(k_layers + 1), dy(k_layers + 1);
  for (int k = 0; k <= k_layers; ++k) {
    dx[k] = DenseMatrix(n, k == 0 ? kPrimalInputWidth : params.widths[k - 1]);
    dy[k] = DenseMatrix(m, k == 0 ? kDualInputWidth : params.widths[k - 1]);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d_last; ++j) {
      grad.readout_x[j] += x_last(i, j) * d_out_x[i];
      dx[k_layers](i, j) = d_out_x[i] * params.readout_x[j];
    }
  }
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d_last; ++j) {
      grad.readout_y[j] += y_last(i, j) * d_out_y[i];
      dy[k_layers](i, j) = d_out_y[i] * params.readout_y[j];
    }
  }

  for (int k = k_layers - 1; k >= 0; --k) {
    const PrimalBlockParams& pb = params.primal[k];
    const DualBlockParams& db = params.dual[k];
    DualBlockParams& gd = grad.dual[k];
    PrimalBlockParams& gp = grad.primal[k];
    const DenseMatrix& x_in = trace.x[k];
    const DenseMatrix& y_in = trace.y[k];
    const DenseMatrix& x_out = trace.x[k + 1];

    // Dual block.
    const DenseMatrix d_pre_y = ReluBackward(trace.pre_y[k], dy[k + 1]);
    gd.sigma = SumProduct(d_pre_y, trace.dual_coupling[k]);
    gd.v_y = MatMulTransA(y_in, d_pre_y);
    AddInPlace(dy[k], MatMulTransB(d_pre_y, db.v_y));
    DenseMatrix d_coupling = d_pre_y;
    for (double& v : d_coupling.data()) v *= db.sigma;
    const DenseMatrix d_mix = SpmmT(inst.g, d_coupling);
    gd.v_x = MatMulTransA(x_in, d_mix);
    AddInPlace(dx[k], MatMulTransB(d_mix, db.v_x));
    DenseMatrix d_t1 = d_mix;
    for (double& v : d_t1.data()) v *= -2.0;
    gd.w_x = MatMulTransA(x_out, d_t1);
    AddInPlace(dx[k + 1], MatMulTransB(d_t1, db.w_x));

    // Primal block; dx[k + 1] is complete here.
    const DenseMatrix d_pre_x = ReluBackward(trace.pre_x[k], dx[k + 1]);
    double d_tau = 0.0;
    {
      const Index d = params.widths[k];
      for (Index i = 0; i < n; ++i) {
        const auto gr = d_pre_x.row(i);
        const auto cr = trace.primal_coupling[k].row(i);
        for (Index j = 0; j < d; ++j) d_tau += gr[j] * (cr[j] - inst.c[i]);
      }
    }
    gp.tau = d_tau;
    gp.u_x = MatMulTransA(x_in, d_pre_x);
    AddInPlace(dx[k], MatMulTransB(d_pre_x, pb.u_x));
    DenseMatrix d_coupling_x = d_pre_x;
    for (double& v : d_coupling_x.data()) v *= pb.tau;
    const DenseMatrix d_q = Spmm(inst.g, d_coupling_x);
    gp.u_y = MatMulTransA(y_in, d_q);
    AddInPlace(dy[k], MatMulTransB(d_q, pb.u_y));
  }
  return grad;
}

AlignedNet ConstructThetaPdhg(const std::vector<Index>& widths, double tau,
                              double sigma) {
  if (widths.empty()) ThrowUsage("network depth must be >= 1");
  for (Index d : widths) {
    if (d < kMinAlignedWidth) {
      throw Error(ErrorKind::kUnsupportedWidth,
                  "exact PDHG alignment needs every width >= " +
                      std::to_string(kMinAlignedWidth) + ", got " +
                      std::to_string(d));
    }
  }
  if (!(tau > 0.0) || !(sigma > 0.0)) ThrowUsage("step sizes must be positive");
  const int k_layers = static_cast<int>(widths.size());

  // The broadcast -tau c and +sigma h terms give tau c- and sigma h+ exactly.
  // The opposite signs are rebuilt from the previous layer, which scales any
  // rounding error by 1 + tau / c_scale (resp. 1 + sigma / h_scale) per layer;
  // scales proportional to the depth keep the total growth below e.
  const double c_scale = std::max(1.0, k_layers * tau);
  const double h_scale = std::max(1.0, k_layers * sigma);

  AlignedNet net;
  // Layer 0: inputs [x0, l, u, c] and [y0, h]; xbar^0 is taken as x0, its
  // coefficient in the first average update is zero.
  DenseMatrix px0(kPrimalInputWidth, 5);
  px0(0, 0) = 1.0;
  px0(0, 1) = 1.0;
  px0(1, 2) = 1.0;
  px0(2, 3) = 1.0;
  px0(3, 4) = 1.0;
  DenseMatrix py0(kDualInputWidth, 3);
  py0(0, 0) = 1.0;
  py0(0, 1) = 1.0;
  py0(1, 2) = 1.0;
  net.primal_recovery.push_back(std::move(px0));
  net.dual_recovery.push_back(std::move(py0));

  // Recovery after layer j >= 1, from the post-ReLU channels
  //   primal [xbar+, xbar-, (xt-l)+, (xt-u)+, l+, l-, u+, u-,
  //           c_scale c+, tau c-, 0...]
  //   dual   [ybar+, ybar-, y, sigma h+, h_scale h-, 0...]
  for (int j = 1; j <= k_layers; ++j) {
    const Index d = widths[j - 1];
    const double keep = static_cast<double>(j - 1) / j;
    const double add = 1.0 / j;
    DenseMatrix px(d, 5);
    px(0, 0) = keep;
    px(1, 0) = -keep;
    px(2, 0) = add;
    px(2, 1) = 1.0;
    px(3, 0) = -add;
    px(3, 1) = -1.0;
    px(4, 0) = add;
    px(4, 1) = 1.0;
    px(4, 2) = 1.0;
    px(5, 0) = -add;
    px(5, 1) = -1.0;
    px(5, 2) = -1.0;
    px(6, 3) = 1.0;
    px(7, 3) = -1.0;
    px(8, 4) = 1.0 / c_scale;
    px(9, 4) = -1.0 / tau;
    DenseMatrix py(d, 3);
    py(0, 0) = keep;
    py(1, 0) = -keep;
    py(2, 0) = add;
    py(2, 1) = 1.0;
    py(3, 2) = 1.0 / sigma;
    py(4, 2) = -1.0 / h_scale;
    net.primal_recovery.push_back(std::move(px));
    net.dual_recovery.push_back(std::move(py));
  }

  NetParams& p = net.params;
  p.widths = widths;
  p.bound_cap = kDefaultBoundCap;
  for (int k = 0; k < k_layers; ++k) {
    const Index d = widths[k];
    // Logical primal channels [xbar, x, l, u, c] -> pre-activation columns
    //   [xbar + tau c, -xbar + tau c, x - l, x - u, l + tau c, -l + tau c,
    //    u + tau c, -u + tau c, (tau + c_scale) c, 0, tau c, ...].
    DenseMatrix ux_hat(5, d);
    ux_hat(0, 0) = 1.0;
    ux_hat(0, 1) = -1.0;
    ux_hat(1, 2) = 1.0;
    ux_hat(1, 3) = 1.0;
    ux_hat(2, 2) = -1.0;
    ux_hat(2, 4) = 1.0;
    ux_hat(2, 5) = -1.0;
    ux_hat(3, 3) = -1.0;
    ux_hat(3, 6) = 1.0;
    ux_hat(3, 7) = -1.0;
    for (Index j = 0; j < d; ++j) ux_hat(4, j) = tau;
    ux_hat(4, 2) = 0.0;
    ux_hat(4, 3) = 0.0;
    ux_hat(4, 8) = tau + c_scale;
    ux_hat(4, 9) = 0.0;
    // Logical dual channels [ybar, y, h] -> y in columns 2 and 3.
    DenseMatrix uy_hat(3, d);
    uy_hat(1, 2) = 1.0;
    uy_hat(1, 3) = 1.0;
    // [ybar - sigma h, -ybar - sigma h, y, 0, -(sigma + h_scale) h,
    //  -sigma h, ...].
    DenseMatrix vy_hat(3, d);
    vy_hat(0, 0) = 1.0;
    vy_hat(0, 1) = -1.0;
    vy_hat(1, 2) = 1.0;
    for (Index j = 0; j < d; ++j) vy_hat(2, j) = -sigma;
    vy_hat(2, 2) = 0.0;
    vy_hat(2, 3) = 0.0;
    vy_hat(2, 4) = -(sigma + h_scale);
    // x^{k+1} and x^k into column 2.
    DenseMatrix select_x(5, d);
    select_x(1, 2) = 1.0;

    PrimalBlockParams pb;
    pb.tau = tau;
    pb.u_x = MatMul(net.primal_recovery[k], ux_hat);
    pb.u_y = MatMul(net.dual_recovery[k], uy_hat);
    DualBlockParams db;
    db.sigma = sigma;
    db.v_y = MatMul(net.dual_recovery[k], vy_hat);
    db.v_x = MatMul(net.primal_recovery[k], select_x);
    db.w_x = MatMul(net.primal_recovery[k + 1], select_x);
    p.primal.push_back(std::move(pb));
    p.dual.push_back(std::move(db));
  }
  p.readout_x = net.primal_recovery.back().Column(0);
  p.readout_y = net.dual_recovery.back().Column(0);
  return net;
}

NetParams InitTrainable(const std::vector<Index>& widths, double tau,
                        double sigma, std::uint64_t seed, double bound_cap) {
  if (widths.empty()) ThrowUsage("network depth must be >= 1");
  for (Index d : widths) {
    if (d < 1) ThrowUsage("widths must be >= 1");
  }
  std::mt19937_64 rng(seed);
  auto fill = [&rng](Index rows, Index cols) {
    DenseMatrix m(rows, cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    std::uniform_real_distribution<double> unif(-scale, scale);
    for (double& v : m.data()) v = unif(rng);
    return m;
  };
  NetParams p;
  p.widths = widths;
  p.bound_cap = bound_cap;
  for (int k = 0; k < static_cast<int>(widths.size()); ++k) {
    const Index d = widths[k];
    PrimalBlockParams pb;
    pb.tau = tau;
    pb.u_x = fill(p.primal_in(k), d);
    pb.u_y = fill(p.dual_in(k), d);
    DualBlockParams db;
    db.sigma = sigma;
    db.v_y = fill(p.dual_in(k), d);
    db.v_x = fill(p.primal_in(k), d);
    db.w_x = fill(d, d);
    p.primal.push_back(std::move(pb));
    p.dual.push_back(std::move(db));
  }
  const DenseMatrix rx = fill(widths.back(), 1);
  const DenseMatrix ry = fill(widths.back(), 1);
  p.readout_x = rx.Column(0);
  p.readout_y = ry.Column(0);
  return p;
}

}  // namespace pdhgnet
