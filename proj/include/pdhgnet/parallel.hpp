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

#ifndef PDHGNET_PARALLEL_HPP_
#define PDHGNET_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace pdhgnet {

// Thread cap from PDHG_THREADS, else the hardware concurrency (at least 1).
int ThreadCap();

// Runs fn(i) for i in [0, count) on up to `threads` workers (<= 0 selects
// ThreadCap()). Callers write results into per-index slots, so reductions
// over them stay in a fixed order. The first exception is rethrown.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& fn,
                 int threads = 0);

}  // namespace pdhgnet

#endif  // PDHGNET_PARALLEL_HPP_
