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

#include "pdhgnet/error.hpp"

namespace pdhgnet {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return "usage error";
    case ErrorKind::kNumerical:
      return "numerical failure";
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kUnsupportedVersion:
      return "unsupported version";
    case ErrorKind::kUnsupportedFeature:
      return "unsupported feature";
    case ErrorKind::kUnsupportedWidth:
      return "unsupported width";
    case ErrorKind::kIntegrity:
      return "integrity error";
    case ErrorKind::kIo:
      return "I/O error";
    case ErrorKind::kEmptyDataset:
      return "empty dataset";
    case ErrorKind::kDivergence:
      return "divergence";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind) {}

void ThrowUsage(const std::string& message) {
  throw Error(ErrorKind::kUsage, message);
}

}  // namespace pdhgnet
