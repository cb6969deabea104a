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

#ifndef PDHGNET_ERROR_HPP_
#define PDHGNET_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdhgnet {

enum class ErrorKind {
  kUsage,
  kNumerical,
  kParse,
  kUnsupportedVersion,
  kUnsupportedFeature,
  kUnsupportedWidth,
  kIntegrity,
  kIo,
  kEmptyDataset,
  kDivergence,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this type. The kind selects the
// CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void ThrowUsage(const std::string& message);

}  // namespace pdhgnet

#endif  // PDHGNET_ERROR_HPP_
