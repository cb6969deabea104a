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

#ifndef PDHGNET_CLI_HPP_
#define PDHGNET_CLI_HPP_

#include <iosfwd>

namespace pdhgnet {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIterLimit = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitIo = 5;

// Entry point of the pdhgnet tool; argv[0] is the program name.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdhgnet

#endif  // PDHGNET_CLI_HPP_
