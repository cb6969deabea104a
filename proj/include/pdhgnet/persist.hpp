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

#ifndef PDHGNET_PERSIST_HPP_
#define PDHGNET_PERSIST_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdhgnet/lp.hpp"
#include "pdhgnet/net.hpp"
#include "pdhgnet/solver.hpp"

namespace pdhgnet {

// Instance files are line-oriented text:
//
//   PDHGLP 1
//   name <token>
//   dims <n> <m> <nnz>
//   c / h / l / u          one section each: "<tag> <count>" then values
//   row_offsets / cols / values
//   label <tol>            optional, followed by x and y sections
//   end
//
// Numbers use %.17g, infinities are written as "inf" and "-inf".
struct InstanceLabel {
  Vector x;
  Vector y;
  double tol = 0.0;
};

struct InstanceFile {
  LpInstance instance;
  std::optional<InstanceLabel> label;
};

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kWeightFormatVersion = 1;
inline constexpr int kSolutionFormatVersion = 1;

void WriteInstance(const std::string& path, const LpInstance& inst,
                   const std::optional<InstanceLabel>& label = std::nullopt);
InstanceFile ReadInstance(const std::string& path);

struct WeightMetadata {
  std::uint64_t seed = 0;
  std::string config_digest;  // empty when unknown
};

struct WeightFile {
  NetParams params;
  WeightMetadata meta;
};

void WriteWeights(const std::string& path, const NetParams& params,
                  const WeightMetadata& meta = {});
// Shape problems raise kIntegrity; syntax problems raise kParse.
WeightFile ReadWeights(const std::string& path);

// Hex FNV-1a digest, used for checkpoint fingerprints.
std::string Digest(const std::string& text);
std::string ParamsDigest(const NetParams& params);

struct SolutionFile {
  Vector x;
  Vector y;
  std::string status;
  int iterations = 0;
};

void WriteSolution(const std::string& path, const SolutionFile& sol);
SolutionFile ReadSolution(const std::string& path);

struct RunRecord {
  std::string instance;
  Index n = 0;
  Index m = 0;
  std::string mode;  // cold, warm, ...
  int iterations = 0;
  int restarts = 0;
  double seconds = 0.0;
  std::optional<double> improv_iters;
  std::optional<double> improv_time;
};

// Header: instance,n,m,mode,iterations,restarts,seconds,improv_iters,improv_time
inline constexpr const char* kReportHeader =
    "instance,n,m,mode,iterations,restarts,seconds,improv_iters,improv_time";

void WriteReport(const std::vector<RunRecord>& records, const std::string& path);
// Appends rows, writing the header first when the file is new or empty.
void AppendReport(const std::vector<RunRecord>& records, const std::string& path);

}  // namespace pdhgnet

#endif  // PDHGNET_PERSIST_HPP_
