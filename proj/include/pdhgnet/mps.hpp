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

#ifndef PDHGNET_MPS_HPP_
#define PDHGNET_MPS_HPP_

#include <string>

#include "pdhgnet/lp.hpp"

namespace pdhgnet {

// Reads the continuous subset of MPS: NAME, ROWS, COLUMNS, RHS, RANGES,
// BOUNDS and ENDATA. Fields are whitespace separated, so fixed-form files
// parse as long as names contain no spaces. The first N row is the objective
// and later N rows are dropped. Ranged rows become a >= row followed by a
// <= row. Columns without bounds get [0, +inf).
//
// Integer markers, integer bound types and any other section raise
// kUnsupportedFeature; malformed lines raise kParse.
GeneralLp ReadMpsSubset(const std::string& path);

GeneralLp ParseMpsSubset(const std::string& text, const std::string& source = "<mps>");

}  // namespace pdhgnet

#endif  // PDHGNET_MPS_HPP_
