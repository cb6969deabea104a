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

#include "pdhgnet/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdhgnet/error.hpp"
#include "pdhgnet/generators.hpp"
#include "pdhgnet/lp.hpp"
#include "pdhgnet/net.hpp"
#include "pdhgnet/parallel.hpp"
#include "pdhgnet/persist.hpp"
#include "pdhgnet/pipeline.hpp"
#include "pdhgnet/solver.hpp"
#include "pdhgnet/trainer.hpp"

namespace pdhgnet {
namespace {

namespace fs = std::filesystem;

constexpr const char* kInstanceExt = ".inst";

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string Fixed(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kUnsupportedWidth:
    case ErrorKind::kEmptyDataset:
      return kExitUsage;
    case ErrorKind::kNumerical:
    case ErrorKind::kDivergence:
      return kExitNumerical;
    case ErrorKind::kIo:
    case ErrorKind::kParse:
    case ErrorKind::kUnsupportedVersion:
    case ErrorKind::kUnsupportedFeature:
    case ErrorKind::kIntegrity:
      return kExitIo;
  }
  return kExitNumerical;
}

int ExitCodeFor(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return kExitOk;
    case SolveStatus::kIterLimit: return kExitIterLimit;
    case SolveStatus::kNumericalFailure: return kExitNumerical;
  }
  return kExitNumerical;
}

// Solver flags shared by solve, warmstart and bench.
struct SolverFlags {
  double tol = 1e-6;
  int max_iter = 100000;
  std::string restart = "adaptive";
  double beta = 0.5;
  int check_period = 40;
  int period = 100;
  double tau = 0.0;
  double sigma = 0.0;

  void Register(CLI::App* app) {
    app->add_option("--tol", tol, "relative KKT tolerance")->capture_default_str();
    app->add_option("--max-iter", max_iter, "iteration limit")->capture_default_str();
    app->add_option("--restart", restart, "restart policy")
        ->check(CLI::IsMember({"adaptive", "none", "fixed"}))
        ->capture_default_str();
    app->add_option("--beta", beta, "adaptive restart factor")->capture_default_str();
    app->add_option("--check-period", check_period, "adaptive check period")
        ->capture_default_str();
    app->add_option("--period", period, "fixed restart period")->capture_default_str();
    app->add_option("--tau", tau, "primal step (<= 0: default)");
    app->add_option("--sigma", sigma, "dual step (<= 0: default)");
  }

  SolverConfig Build() const {
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.tau = tau;
    cfg.sigma = sigma;
    if (restart == "none") {
      cfg.restart = NoRestart{};
    } else if (restart == "fixed") {
      cfg.restart = FixedRestart{period};
    } else {
      cfg.restart = AdaptiveRestart{beta, check_period};
    }
    return cfg;
  }
};

std::vector<std::string> ListInstances(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) ThrowUsage("not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (e.is_regular_file() && e.path().extension() == kInstanceExt) {
      paths.push_back(e.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) ThrowUsage("no " + std::string(kInstanceExt) + " files in " + dir);
  return paths;
}

void PrintSize(std::ostream& out, const LpInstance& inst) {
  out << inst.num_vars() << " vars, " << inst.num_cons() << " cons, "
      << inst.g.nnz() << " nnz\n";
}

std::string OutputPath(const std::string& out, int count, const std::string& name) {
  if (count == 1 && fs::path(out).extension() == kInstanceExt) return out;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory " + out);
  return (fs::path(out) / (name + kInstanceExt)).string();
}

// ---- gen ------------------------------------------------------------------

struct GenFlags {
  std::string out;
  std::uint64_t seed = 0;
  int count = 1;
  Index nodes = 1000;
  Index attach = 3;
  double damping = 0.85;
  std::string base;
  double amp = 0.05;
  std::string targets = "h,c";
  Index n = 20;
  Index m = 15;
  double density = 0.3;
};

int GenPagerankCmd(const GenFlags& f, std::ostream& out) {
  if (f.count < 1) ThrowUsage("--count must be >= 1");
  for (int i = 0; i < f.count; ++i) {
    PageRankSpec spec{f.nodes, f.attach, f.damping, f.seed + static_cast<std::uint64_t>(i)};
    const LpInstance inst = GenPageRank(spec);
    PrintSize(out, inst);
    if (!f.out.empty()) {
      const std::string path = OutputPath(f.out, f.count, inst.name);
      WriteInstance(path, inst);
      out << "wrote " << path << "\n";
    }
  }
  return kExitOk;
}

int GenPerturbCmd(const GenFlags& f, std::ostream& out) {
  if (f.base.empty()) ThrowUsage("--base is required");
  if (f.out.empty()) ThrowUsage("--out is required");
  PerturbSpec spec;
  spec.base = ReadInstance(f.base).instance;
  spec.count = f.count;
  spec.amplitude = f.amp;
  spec.seed = f.seed;
  spec.targets = 0;
  std::stringstream ss(f.targets);
  std::string t;
  while (std::getline(ss, t, ',')) {
    if (t == "h") {
      spec.targets |= kPerturbH;
    } else if (t == "c") {
      spec.targets |= kPerturbC;
    } else {
      ThrowUsage("--targets accepts h and c");
    }
  }
  if (spec.targets == 0) ThrowUsage("--targets must name h and/or c");
  const auto family = GenPerturbedFamily(spec);
  for (const LpInstance& inst : family) {
    const std::string path = OutputPath(f.out, spec.count, inst.name);
    WriteInstance(path, inst);
  }
  out << family.size() << " instances, ";
  PrintSize(out, spec.base);
  out << "wrote " << f.out << "\n";
  return kExitOk;
}

int GenSolvableCmd(const GenFlags& f, std::ostream& out) {
  if (f.count < 1) ThrowUsage("--count must be >= 1");
  for (int i = 0; i < f.count; ++i) {
    const SolvableInstance s =
        GenRandomSolvable(f.n, f.m, f.density, f.seed + static_cast<std::uint64_t>(i));
    PrintSize(out, s.instance);
    const KktReport k = KktResiduals(s.instance, s.x_star, s.y_star);
    out << "objective " << Sci(k.objective) << "\n";
    if (!f.out.empty()) {
      const std::string path = OutputPath(f.out, f.count, s.instance.name);
      WriteInstance(path, s.instance,
                    InstanceLabel{s.x_star, s.y_star, std::max(k.MaxResidual(), 1e-12)});
      out << "wrote " << path << "\n";
    }
  }
  return kExitOk;
}

// ---- solve ----------------------------------------------------------------

struct SolveFlags {
  std::string instance;
  std::string warm_from;
  std::string report;
  std::string out;
  SolverFlags solver;
};

void PrintKkt(std::ostream& out, const KktReport& k) {
  out << "primal_residual " << Sci(k.primal_residual) << "\n";
  out << "dual_residual " << Sci(k.dual_residual) << "\n";
  out << "rel_gap " << Sci(k.rel_gap) << "\n";
  out << "objective " << Sci(k.objective) << "\n";
}

int SolveCmd(const SolveFlags& f, std::ostream& out) {
  const InstanceFile file = ReadInstance(f.instance);
  const LpInstance& inst = file.instance;
  std::optional<WarmStart> warm;
  std::string mode = "cold";
  if (f.warm_from == "label") {
    if (!file.label) ThrowUsage("--warm-from label: instance has no label");
    warm = WarmStart{file.label->x, file.label->y};
    mode = "warm-label";
  } else if (!f.warm_from.empty()) {
    const SolutionFile sol = ReadSolution(f.warm_from);
    warm = WarmStart{sol.x, sol.y};
    mode = "warm-file";
  }
  const SolverResult r = PdhgSolve(inst, f.solver.Build(), warm);
  out << "status " << SolveStatusName(r.status) << "\n";
  out << "iterations " << r.iterations << "\n";
  out << "restarts " << r.restarts << "\n";
  PrintKkt(out, r.final_kkt);
  out << "seconds " << Fixed(r.solve_seconds, 6) << "\n";
  if (!f.out.empty()) {
    WriteSolution(f.out, {r.x, r.y, SolveStatusName(r.status), r.iterations});
  }
  if (!f.report.empty()) {
    AppendReport({{inst.name, inst.num_vars(), inst.num_cons(), mode, r.iterations,
                   r.restarts, r.solve_seconds, std::nullopt, std::nullopt}},
                 f.report);
  }
  return ExitCodeFor(r.status);
}

// ---- train ----------------------------------------------------------------

struct TrainFlags {
  std::string data;
  int layers = 4;
  std::vector<Index> widths{16};
  double lr = 1e-4;
  int epochs = 200;
  int batch = 8;
  double split = 0.9;
  std::uint64_t seed = 0;
  std::string out = "weights.txt";
  std::string history;
  double label_tol = 1e-8;
  int label_max_iter = 200000;
  double bound_cap = kTrainableBoundCap;
  bool normalize = false;
};

std::vector<Index> ResolveWidths(int layers, const std::vector<Index>& widths) {
  if (layers < 1) ThrowUsage("--layers must be >= 1");
  if (widths.size() == 1) return std::vector<Index>(static_cast<std::size_t>(layers), widths[0]);
  if (static_cast<int>(widths.size()) != layers) {
    ThrowUsage("--widths needs one value or one per layer");
  }
  return widths;
}

std::string ConfigString(const TrainFlags& f, const std::vector<Index>& widths) {
  std::ostringstream ss;
  ss << "layers=" << f.layers << ";widths=";
  for (Index w : widths) ss << w << ",";
  ss << ";lr=" << f.lr << ";epochs=" << f.epochs << ";batch=" << f.batch
     << ";split=" << f.split << ";seed=" << f.seed << ";cap=" << f.bound_cap
     << ";normalize=" << f.normalize << ";label_tol=" << f.label_tol;
  return ss.str();
}

// Loads every instance in `dir`; labels missing from the files are computed
// with the solver at `label_tol`.
std::vector<LabeledInstance> LoadDataset(const std::string& dir, double label_tol,
                                         int label_max_iter, std::ostream& out) {
  std::vector<LabeledInstance> data;
  std::vector<LpInstance> unlabeled;
  for (const std::string& path : ListInstances(dir)) {
    InstanceFile f = ReadInstance(path);
    if (f.label) {
      data.push_back({std::move(f.instance), std::move(f.label->x),
                      std::move(f.label->y), f.label->tol});
    } else {
      unlabeled.push_back(std::move(f.instance));
    }
  }
  if (!unlabeled.empty()) {
    SolverConfig cfg;
    cfg.tol = label_tol;
    cfg.max_iter = label_max_iter;
    const LabelingReport rep = GenerateLabels(unlabeled, cfg, ThreadCap());
    for (const std::string& name : rep.excluded) {
      out << "excluded " << name << " (no convergence at tol " << Sci(label_tol) << ")\n";
    }
    for (const LabeledInstance& li : rep.labeled) data.push_back(li);
  }
  return data;
}

int TrainCmd(const TrainFlags& f, std::ostream& out) {
  const std::vector<Index> widths = ResolveWidths(f.layers, f.widths);
  TrainConfig cfg;
  cfg.learning_rate = f.lr;
  cfg.epochs = f.epochs;
  cfg.batch_size = f.batch;
  cfg.split_ratio = f.split;
  cfg.seed = f.seed;
  cfg.normalize_by_dim = f.normalize;
  cfg.threads = ThreadCap();
  cfg.Validate();
  if (!(f.bound_cap > 0.0)) ThrowUsage("--bound-cap must be > 0");

  const auto data = LoadDataset(f.data, f.label_tol, f.label_max_iter, out);
  auto [train, val] = Split(data, cfg.split_ratio, cfg.seed);
  out << "dataset " << data.size() << " train " << train.size() << " validation "
      << val.size() << "\n";
  const StepSizes steps = DefaultStepSizes(train.front().instance);
  const NetParams init =
      InitTrainable(widths, steps.tau, steps.sigma, cfg.seed, f.bound_cap);
  const TrainResult res = Train(train, val, init, cfg);

  const std::string history = f.history.empty() ? f.out + ".history" : f.history;
  std::ofstream log(history);
  if (!log) throw Error(ErrorKind::kIo, "cannot open for writing: " + history);
  const TrainHistory& h = res.history;
  for (std::size_t e = 0; e < h.train_loss.size(); ++e) {
    log << "epoch " << e << " train_loss " << Sci(h.train_loss[e]) << " val_loss "
        << Sci(h.validation_loss[e]) << " val_distance "
        << Sci(h.validation_distance[e]) << "\n";
  }
  log << "best_epoch " << h.best_epoch << "\n";
  log.flush();
  if (!log) throw Error(ErrorKind::kIo, "write failed: " + history);

  WeightMetadata meta{cfg.seed, Digest(ConfigString(f, widths))};
  WriteWeights(f.out, res.params, meta);
  out << "initial_val_loss " << Sci(h.validation_loss.front()) << "\n";
  out << "best_epoch " << h.best_epoch << "\n";
  out << "best_val_loss " << Sci(h.validation_loss[static_cast<std::size_t>(h.best_epoch)])
      << "\n";
  out << "checkpoint " << f.out << " digest " << ParamsDigest(res.params) << "\n";
  return kExitOk;
}

// ---- predict / warmstart --------------------------------------------------

struct PredictFlags {
  std::string instance;
  std::string weights;
  std::string out;
};

int PredictCmd(const PredictFlags& f, std::ostream& out) {
  const InstanceFile file = ReadInstance(f.instance);
  const NetParams params = ReadWeights(f.weights).params;
  const auto t0 = std::chrono::steady_clock::now();
  ForwardResult fr = Forward(params, file.instance, BuildInputs(file.instance, params.bound_cap));
  ProjectPrediction(file.instance, fr.x, fr.y);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << "inference_seconds " << Fixed(secs, 6) << "\n";
  const KktReport k = KktResiduals(file.instance, fr.x, fr.y);
  PrintKkt(out, k);
  if (file.label) {
    out << "distance " << Sci(std::sqrt(InstanceLoss(fr.x, fr.y, file.label->x,
                                                    file.label->y)))
        << "\n";
  }
  if (!f.out.empty()) WriteSolution(f.out, {fr.x, fr.y, "prediction", 0});
  return kExitOk;
}

struct WarmstartFlags {
  std::string instance;
  std::string weights;
  std::string report;
  bool cold = false;
  SolverFlags solver;
};

std::vector<RunRecord> Records(const LpInstance& inst, const TwoStageResult& r) {
  std::vector<RunRecord> recs;
  recs.push_back({inst.name, inst.num_vars(), inst.num_cons(), "warm",
                  r.warm_result.iterations, r.warm_result.restarts,
                  r.warm_result.solve_seconds + r.inference_seconds, r.improvement_iters,
                  r.improvement_time});
  if (r.cold_result) {
    recs.push_back({inst.name, inst.num_vars(), inst.num_cons(), "cold",
                    r.cold_result->iterations, r.cold_result->restarts,
                    r.cold_result->solve_seconds, std::nullopt, std::nullopt});
  }
  return recs;
}

int WarmstartCmd(const WarmstartFlags& f, std::ostream& out) {
  const InstanceFile file = ReadInstance(f.instance);
  const NetParams params = ReadWeights(f.weights).params;
  const TwoStageResult r = TwoStageSolve(file.instance, params, f.solver.Build(), f.cold);
  out << "inference_seconds " << Fixed(r.inference_seconds, 6) << "\n";
  out << "warm_status " << SolveStatusName(r.warm_result.status) << "\n";
  out << "warm_iterations " << r.warm_result.iterations << "\n";
  out << "warm_restarts " << r.warm_result.restarts << "\n";
  if (r.cold_result) {
    out << "cold_status " << SolveStatusName(r.cold_result->status) << "\n";
    out << "cold_iterations " << r.cold_result->iterations << "\n";
    out << "cold_restarts " << r.cold_result->restarts << "\n";
    if (r.improvement_iters) out << "improv_iters " << Fixed(*r.improvement_iters) << "\n";
    if (r.improvement_time) out << "improv_time " << Fixed(*r.improvement_time) << "\n";
  }
  if (!f.report.empty()) AppendReport(Records(file.instance, r), f.report);
  return ExitCodeFor(r.warm_result.status);
}

// ---- bench ----------------------------------------------------------------

struct BenchFlags {
  std::string data;
  std::string weights;
  std::string report;
  bool cold = false;
  std::vector<double> alphas;
  double label_tol = 0.0;  // > 0: label unlabeled instances by a cold solve
  SolverFlags solver;
};

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

int BenchCmd(const BenchFlags& f, std::ostream& out) {
  const NetParams params = ReadWeights(f.weights).params;
  const SolverConfig cfg = f.solver.Build();
  std::vector<InstanceFile> files;
  for (const std::string& p : ListInstances(f.data)) files.push_back(ReadInstance(p));
  if (!f.alphas.empty()) {
    SolverConfig label_cfg = cfg;
    label_cfg.tol = f.label_tol;
    ParallelFor(
        files.size(),
        [&](std::size_t i) {
          InstanceFile& file = files[i];
          if (file.label || !(f.label_tol > 0.0)) return;
          const SolverResult r = PdhgSolve(file.instance, label_cfg);
          if (r.status == SolveStatus::kOptimal) file.label = InstanceLabel{r.x, r.y, f.label_tol};
        },
        ThreadCap());
    for (const InstanceFile& file : files) {
      if (!file.label) {
        ThrowUsage("--alphas needs labeled instances (or --label-tol); " +
                   file.instance.name + " has none");
      }
    }
  }
  std::vector<TwoStageResult> results(files.size());
  ParallelFor(
      files.size(),
      [&](std::size_t i) { results[i] = TwoStageSolve(files[i].instance, params, cfg, f.cold); },
      ThreadCap());

  std::vector<RunRecord> records;
  std::vector<double> improv_iters, improv_time, warm_restarts, cold_restarts;
  std::vector<TimingSample> timing;
  int worst = kExitOk;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const LpInstance& inst = files[i].instance;
    const TwoStageResult& r = results[i];
    out << inst.name << " warm " << r.warm_result.iterations << " iters "
        << r.warm_result.restarts << " restarts";
    if (r.cold_result) {
      out << " cold " << r.cold_result->iterations << " iters "
          << r.cold_result->restarts << " restarts";
      cold_restarts.push_back(r.cold_result->restarts);
    }
    if (r.improvement_iters) {
      out << " improv_iters " << Fixed(*r.improvement_iters);
      improv_iters.push_back(*r.improvement_iters);
    }
    if (r.improvement_time) improv_time.push_back(*r.improvement_time);
    out << "\n";
    warm_restarts.push_back(r.warm_result.restarts);
    timing.push_back({inst.num_vars(), r.inference_seconds, r.warm_result.solve_seconds});
    for (RunRecord& rec : Records(inst, r)) records.push_back(std::move(rec));
    worst = std::max(worst, ExitCodeFor(r.warm_result.status));
  }
  out << "instances " << files.size() << "\n";
  out << "mean_warm_restarts " << Fixed(Mean(warm_restarts), 2) << "\n";
  if (f.cold) {
    out << "mean_cold_restarts " << Fixed(Mean(cold_restarts), 2) << "\n";
    out << "mean_improv_iters " << Fixed(Mean(improv_iters)) << "\n";
    out << "median_improv_iters " << Fixed(Median(improv_iters)) << "\n";
    out << "mean_improv_time " << Fixed(Mean(improv_time)) << "\n";
    out << "median_improv_time " << Fixed(Median(improv_time)) << "\n";
  }
  for (const TimingRow& row : BuildTimingReport(timing).rows) {
    out << "timing n " << row.n << " inference " << Sci(row.mean_inference_seconds)
        << " solve " << Sci(row.mean_solve_seconds) << " ratio "
        << (row.infinite_ratio ? std::string("inf") : Sci(row.mean_ratio)) << "\n";
  }

  if (!f.alphas.empty()) {
    out << "extrapolation instance alpha start_distance iterations restarts\n";
    for (std::size_t i = 0; i < files.size(); ++i) {
      const InstanceFile& file = files[i];
      const auto rows = ExtrapolationStudy(file.instance, file.label->x, file.label->y,
                                           results[i].x_hat, results[i].y_hat, f.alphas,
                                           cfg);
      std::vector<double> a, it;
      for (const ExtrapolationRow& row : rows) {
        out << "extrapolation " << file.instance.name << " " << row.alpha << " "
            << Sci(row.start_distance) << " " << row.iterations << " " << row.restarts
            << "\n";
        a.push_back(row.alpha);
        it.push_back(row.iterations);
      }
      out << "spearman " << file.instance.name << " " << Fixed(SpearmanCorrelation(a, it))
          << "\n";
    }
  }
  if (!f.report.empty()) WriteReport(records, f.report);
  return worst;
}

// ---- align-check ----------------------------------------------------------

struct AlignFlags {
  int layers = 4;
  Index width = 10;
  Index n = 0;
  Index m = 0;
  int trials = 50;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

int AlignCheckCmd(const AlignFlags& f, std::ostream& out) {
  if (f.layers < 1) ThrowUsage("--layers must be >= 1");
  if (f.trials < 1) ThrowUsage("--trials must be >= 1");
  if (f.width < kMinAlignedWidth) {
    ThrowUsage("--width " + std::to_string(f.width) +
               ": the exact PDHG construction needs every width >= " +
               std::to_string(kMinAlignedWidth));
  }
  if (f.n < 0 || f.m < 0) ThrowUsage("--n and --m must be >= 0");
  std::mt19937_64 rng(f.seed);
  std::uniform_int_distribution<Index> size(5, 30);
  std::vector<LpInstance> instances;
  double norm = 0.0;
  for (int t = 0; t < f.trials; ++t) {
    const Index n = f.n > 0 ? f.n : size(rng);
    const Index m = f.m > 0 ? f.m : size(rng);
    instances.push_back(GenRandomSolvable(n, m, 0.4, rng()).instance);
    norm = std::max(norm, EstimateSpectralNorm(instances.back().g).value);
  }
  // One parameter set serves every trial, so the steps use the largest norm.
  const double step = norm > 0.0 ? 0.9 / norm : 1.0;
  const AlignedNet net =
      ConstructThetaPdhg(std::vector<Index>(static_cast<std::size_t>(f.layers), f.width),
                         step, step);
  const std::size_t depth = static_cast<std::size_t>(f.layers);
  std::vector<double> pa(depth + 1, 0.0), px(depth + 1, 0.0), da(depth + 1, 0.0),
      dy(depth + 1, 0.0);
  double output = 0.0, worst = 0.0;
  for (const LpInstance& inst : instances) {
    const AlignmentReport rep = CheckAlignment(net, inst, step, step);
    output = std::max(output, rep.output_deviation);
    worst = std::max(worst, rep.MaxDeviation());
    for (std::size_t k = 0; k <= depth; ++k) {
      pa[k] = std::max(pa[k], rep.primal_avg[k]);
      px[k] = std::max(px[k], rep.primal[k]);
      da[k] = std::max(da[k], rep.dual_avg[k]);
      dy[k] = std::max(dy[k], rep.dual[k]);
    }
  }
  out << "trials " << f.trials << " layers " << f.layers << " width " << f.width
      << " tau " << Sci(step) << " sigma " << Sci(step) << "\n";
  for (std::size_t k = 0; k <= depth; ++k) {
    out << "layer " << k << " xbar " << Sci(pa[k]) << " x " << Sci(px[k]) << " ybar "
        << Sci(da[k]) << " y " << Sci(dy[k]) << "\n";
  }
  out << "output deviation " << Sci(output) << "\n";
  out << "max deviation " << Sci(worst) << "\n";
  const bool ok = worst <= f.tol;
  out << (ok ? "PASS" : "FAIL") << " tol " << Sci(f.tol) << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PDHG solver and unrolled network toolkit", "pdhgnet"};
  app.require_subcommand(1, 1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate instance files");
  gen_cmd->require_subcommand(1, 1);
  auto* gen_pr = gen_cmd->add_subcommand("pagerank", "PageRank LP");
  gen_pr->add_option("--nodes", gen.nodes, "graph nodes")->capture_default_str();
  gen_pr->add_option("--attach", gen.attach, "edges per new node")->capture_default_str();
  gen_pr->add_option("--damping", gen.damping, "damping factor")->capture_default_str();
  auto* gen_pt = gen_cmd->add_subcommand("perturb", "perturbed family of a base instance");
  gen_pt->add_option("--base", gen.base, "base instance file")->required();
  gen_pt->add_option("--amp", gen.amp, "relative amplitude")->capture_default_str();
  gen_pt->add_option("--targets", gen.targets, "perturbed vectors (h,c)")
      ->capture_default_str();
  auto* gen_sv = gen_cmd->add_subcommand("solvable", "random LP with a planted optimum");
  gen_sv->add_option("--n", gen.n, "variables")->capture_default_str();
  gen_sv->add_option("--m", gen.m, "constraints")->capture_default_str();
  gen_sv->add_option("--density", gen.density, "nonzero density")->capture_default_str();
  for (auto* c : {gen_pr, gen_pt, gen_sv}) {
    c->add_option("--seed", gen.seed, "seed")->capture_default_str();
    c->add_option("--count", gen.count, "number of instances")->capture_default_str();
    c->add_option("--out", gen.out, "output file (.inst) or directory");
  }

  SolveFlags solve;
  auto* solve_cmd = app.add_subcommand("solve", "run PDHG on an instance");
  solve_cmd->add_option("--instance", solve.instance, "instance file")->required();
  solve_cmd->add_option("--warm-from", solve.warm_from, "'label' or a solution file");
  solve_cmd->add_option("--report", solve.report, "CSV report to append to");
  solve_cmd->add_option("--out", solve.out, "solution file");
  solve.solver.Register(solve_cmd);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "train an unrolled network");
  train_cmd->add_option("--data", train.data, "directory of instance files")->required();
  train_cmd->add_option("--layers", train.layers, "layers")->capture_default_str();
  train_cmd->add_option("--widths", train.widths, "hidden widths")->delimiter(',');
  train_cmd->add_option("--lr", train.lr, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs, "epochs")->capture_default_str();
  train_cmd->add_option("--batch", train.batch, "batch size")->capture_default_str();
  train_cmd->add_option("--split", train.split, "training fraction")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "seed")->capture_default_str();
  train_cmd->add_option("--out", train.out, "weight file")->capture_default_str();
  train_cmd->add_option("--history", train.history, "history log (default <out>.history)");
  train_cmd->add_option("--label-tol", train.label_tol, "tolerance for missing labels")
      ->capture_default_str();
  train_cmd->add_option("--label-max-iter", train.label_max_iter, "labeling iteration limit")
      ->capture_default_str();
  train_cmd->add_option("--bound-cap", train.bound_cap, "cap on infinite bound features")
      ->capture_default_str();
  train_cmd->add_flag("--normalize", train.normalize, "divide losses by n + m");

  PredictFlags predict;
  auto* predict_cmd = app.add_subcommand("predict", "network prediction for an instance");
  predict_cmd->add_option("--instance", predict.instance, "instance file")->required();
  predict_cmd->add_option("--weights", predict.weights, "weight file")->required();
  predict_cmd->add_option("--out", predict.out, "solution file");

  WarmstartFlags warm;
  auto* warm_cmd = app.add_subcommand("warmstart", "prediction followed by a warm solve");
  warm_cmd->add_option("--instance", warm.instance, "instance file")->required();
  warm_cmd->add_option("--weights", warm.weights, "weight file")->required();
  warm_cmd->add_option("--report", warm.report, "CSV report to append to");
  warm_cmd->add_flag("--cold", warm.cold, "also solve from zero");
  warm.solver.Register(warm_cmd);

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "two-stage benchmark over a directory");
  bench_cmd->add_option("--data", bench.data, "directory of instance files")->required();
  bench_cmd->add_option("--weights", bench.weights, "weight file")->required();
  bench_cmd->add_option("--report", bench.report, "CSV report");
  bench_cmd->add_flag("--cold", bench.cold, "compare with cold starts");
  bench_cmd->add_option("--alphas", bench.alphas, "extrapolation grid")->delimiter(',');
  bench_cmd->add_option("--label-tol", bench.label_tol,
                        "label unlabeled instances by a cold solve at this tolerance");
  bench.solver.Register(bench_cmd);

  AlignFlags align;
  auto* align_cmd = app.add_subcommand("align-check", "verify the exact PDHG construction");
  align_cmd->add_option("--layers", align.layers, "layers")->capture_default_str();
  align_cmd->add_option("--width", align.width, "hidden width")->capture_default_str();
  align_cmd->add_option("--n", align.n, "variables (0: random 5..30)");
  align_cmd->add_option("--m", align.m, "constraints (0: random 5..30)");
  align_cmd->add_option("--trials", align.trials, "random instances")->capture_default_str();
  align_cmd->add_option("--tol", align.tol, "max-abs tolerance")->capture_default_str();
  align_cmd->add_option("--seed", align.seed, "seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_pr) return GenPagerankCmd(gen, out);
    if (*gen_pt) return GenPerturbCmd(gen, out);
    if (*gen_sv) return GenSolvableCmd(gen, out);
    if (*solve_cmd) return SolveCmd(solve, out);
    if (*train_cmd) return TrainCmd(train, out);
    if (*predict_cmd) return PredictCmd(predict, out);
    if (*warm_cmd) return WarmstartCmd(warm, out);
    if (*bench_cmd) return BenchCmd(bench, out);
    if (*align_cmd) return AlignCheckCmd(align, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace pdhgnet
