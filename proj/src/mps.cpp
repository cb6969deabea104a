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

#include "pdhgnet/mps.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "pdhgnet/error.hpp"

namespace pdhgnet {
namespace {

enum class Section { kNone, kName, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };

struct RowInfo {
  char type;  // 'N', 'L', 'G', 'E'
  Index index;  // position among constraint rows, -1 for objective/free
};

class MpsParser {
 public:
  explicit MpsParser(std::string source) : source_(std::move(source)) {}

  GeneralLp Parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '*') continue;
      std::vector<std::string> toks = Split(line);
      if (toks.empty()) continue;
      const bool header = !std::isspace(static_cast<unsigned char>(line[0]));
      if (header) {
        StartSection(toks);
        if (section_ == Section::kEnd) break;
        continue;
      }
      switch (section_) {
        case Section::kRows: RowsLine(toks); break;
        case Section::kColumns: ColumnsLine(toks); break;
        case Section::kRhs: RhsLine(toks); break;
        case Section::kRanges: RangesLine(toks); break;
        case Section::kBounds: BoundsLine(toks); break;
        default: Fail("data line outside a section");
      }
    }
    if (section_ != Section::kEnd) Fail("missing ENDATA");
    return Build();
  }

 private:
  static std::vector<std::string> Split(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorKind::kParse, source_ + ":" + std::to_string(line_no_) +
                                       ": " + section_name_ + ": " + what);
  }

  [[noreturn]] void Unsupported(const std::string& what) const {
    throw Error(ErrorKind::kUnsupportedFeature,
                source_ + ":" + std::to_string(line_no_) + ": " + section_name_ +
                    ": " + what);
  }

  double Number(const std::string& s) const {
    const char* b = s.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e == b || *e != '\0' || std::isnan(v)) Fail("invalid number '" + s + "'");
    return v;
  }

  void StartSection(const std::vector<std::string>& toks) {
    const std::string& s = toks[0];
    section_name_ = s;
    if (s == "NAME") {
      section_ = Section::kName;
      if (toks.size() > 1) name_ = toks[1];
    } else if (s == "ROWS") {
      section_ = Section::kRows;
    } else if (s == "COLUMNS") {
      section_ = Section::kColumns;
    } else if (s == "RHS") {
      section_ = Section::kRhs;
    } else if (s == "RANGES") {
      section_ = Section::kRanges;
    } else if (s == "BOUNDS") {
      section_ = Section::kBounds;
    } else if (s == "ENDATA") {
      section_ = Section::kEnd;
    } else {
      Unsupported("section " + s + " is not supported");
    }
  }

  const RowInfo& Row(const std::string& name) const {
    auto it = rows_.find(name);
    if (it == rows_.end()) Fail("unknown row '" + name + "'");
    return it->second;
  }

  Index Column(const std::string& name) const {
    auto it = cols_.find(name);
    if (it == cols_.end()) Fail("unknown column '" + name + "'");
    return it->second;
  }

  void RowsLine(const std::vector<std::string>& toks) {
    if (toks.size() != 2) Fail("expected '<type> <row>'");
    const std::string& t = toks[0];
    if (t.size() != 1 || std::string("NLGE").find(t[0]) == std::string::npos) {
      Fail("invalid row type '" + t + "'");
    }
    if (rows_.count(toks[1])) Fail("duplicate row '" + toks[1] + "'");
    RowInfo info{t[0], -1};
    if (t[0] == 'N') {
      if (objective_.empty()) objective_ = toks[1];
    } else {
      info.index = static_cast<Index>(row_types_.size());
      row_types_.push_back(t[0]);
    }
    rows_.emplace(toks[1], info);
  }

  void ColumnsLine(const std::vector<std::string>& toks) {
    if (toks.size() >= 2 && toks[1] == "'MARKER'") {
      if (toks.size() >= 3 && toks[2] == "'INTORG'") {
        Unsupported("integer marker (continuous columns only)");
      }
      if (toks.size() >= 3 && toks[2] == "'INTEND'") {
        Unsupported("integer marker (continuous columns only)");
      }
      Fail("unknown marker");
    }
    if (toks.size() != 3 && toks.size() != 5) {
      Fail("expected '<col> <row> <value> [<row> <value>]'");
    }
    const std::string& col = toks[0];
    auto it = cols_.find(col);
    Index j;
    if (it == cols_.end()) {
      j = static_cast<Index>(col_names_.size());
      cols_.emplace(col, j);
      col_names_.push_back(col);
      cost_.push_back(0.0);
    } else {
      j = it->second;
      if (j != static_cast<Index>(col_names_.size()) - 1) {
        Fail("column '" + col + "' is not contiguous");
      }
    }
    for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
      const RowInfo& r = Row(toks[k]);
      const double v = Number(toks[k + 1]);
      if (r.type == 'N') {
        if (toks[k] == objective_) cost_[static_cast<std::size_t>(j)] += v;
      } else {
        entries_.push_back({r.index, j, v});
      }
    }
  }

  // RHS and RANGES lines: optional set name followed by (row, value) pairs.
  template <typename Fn>
  void PairsLine(const std::vector<std::string>& toks, Fn fn) {
    std::size_t first;
    if (toks.size() == 2 || toks.size() == 4) {
      first = 0;
    } else if (toks.size() == 3 || toks.size() == 5) {
      first = 1;
    } else {
      Fail("expected '[set] <row> <value> [<row> <value>]'");
    }
    for (std::size_t k = first; k + 1 < toks.size(); k += 2) {
      fn(toks[k], Number(toks[k + 1]));
    }
  }

  void RhsLine(const std::vector<std::string>& toks) {
    PairsLine(toks, [&](const std::string& row, double v) {
      const RowInfo& r = Row(row);
      if (r.type == 'N') {
        if (row == objective_) offset_ = -v;
      } else {
        rhs_[r.index] = v;
      }
    });
  }

  void RangesLine(const std::vector<std::string>& toks) {
    PairsLine(toks, [&](const std::string& row, double v) {
      const RowInfo& r = Row(row);
      if (r.type == 'N') Fail("range on objective row '" + row + "'");
      ranges_[r.index] = v;
    });
  }

  void BoundsLine(const std::vector<std::string>& toks) {
    const std::string& type = toks[0];
    const bool valued = type == "UP" || type == "LO" || type == "FX";
    const bool unvalued = type == "FR" || type == "MI" || type == "PL";
    if (type == "BV" || type == "LI" || type == "UI" || type == "SC") {
      Unsupported("bound type " + type + " (continuous columns only)");
    }
    if (!valued && !unvalued) Fail("invalid bound type '" + type + "'");
    const std::size_t want = valued ? 3 : 2;
    std::size_t col_at;
    if (toks.size() == want) {
      col_at = 1;
    } else if (toks.size() == want + 1) {
      col_at = 2;
    } else {
      Fail("malformed bound line");
    }
    const Index j = Column(toks[col_at]);
    auto& b = bounds_[j];
    if (type == "UP") {
      const double v = Number(toks[col_at + 1]);
      b.second = v;
      if (v < 0.0 && !b.first) b.first = -kInf;
    } else if (type == "LO") {
      b.first = Number(toks[col_at + 1]);
    } else if (type == "FX") {
      const double v = Number(toks[col_at + 1]);
      b.first = v;
      b.second = v;
    } else if (type == "FR") {
      b.first = -kInf;
      b.second = kInf;
    } else if (type == "MI") {
      b.first = -kInf;
    } else {
      b.second = kInf;
    }
  }

  GeneralLp Build() {
    GeneralLp g;
    g.name = name_;
    const Index n = static_cast<Index>(col_names_.size());
    const Index m0 = static_cast<Index>(row_types_.size());
    g.c = cost_;
    g.l.assign(static_cast<std::size_t>(n), 0.0);
    g.u.assign(static_cast<std::size_t>(n), kInf);
    for (const auto& [j, b] : bounds_) {
      if (b.first) g.l[static_cast<std::size_t>(j)] = *b.first;
      if (b.second) g.u[static_cast<std::size_t>(j)] = *b.second;
    }
    g.objective_offset = offset_;

    // Map each original row to one or two output rows.
    std::vector<std::vector<Index>> out_rows(static_cast<std::size_t>(m0));
    for (Index i = 0; i < m0; ++i) {
      const char t = row_types_[static_cast<std::size_t>(i)];
      const double b = rhs_.count(i) ? rhs_[i] : 0.0;
      auto emit = [&](RowSense s, double r) {
        out_rows[static_cast<std::size_t>(i)].push_back(
            static_cast<Index>(g.senses.size()));
        g.senses.push_back(s);
        g.rhs.push_back(r);
      };
      auto rg = ranges_.find(i);
      if (rg == ranges_.end()) {
        emit(t == 'L' ? RowSense::kLe : t == 'G' ? RowSense::kGe : RowSense::kEq, b);
        continue;
      }
      const double r = rg->second;
      double lo, hi;
      if (t == 'G') {
        lo = b;
        hi = b + std::abs(r);
      } else if (t == 'L') {
        lo = b - std::abs(r);
        hi = b;
      } else if (r >= 0.0) {
        lo = b;
        hi = b + r;
      } else {
        lo = b + r;
        hi = b;
      }
      emit(RowSense::kGe, lo);
      emit(RowSense::kLe, hi);
    }
    std::vector<Triplet> trips;
    trips.reserve(entries_.size() * 2);
    for (const Triplet& e : entries_) {
      for (Index r : out_rows[static_cast<std::size_t>(e.row)]) {
        trips.push_back({r, e.col, e.value});
      }
    }
    g.a = SparseMatrix::FromTriplets(static_cast<Index>(g.senses.size()), n, trips);
    g.Validate();
    return g;
  }

  std::string source_;
  Section section_ = Section::kNone;
  std::string section_name_ = "header";
  long long line_no_ = 0;
  std::string name_;
  std::string objective_;
  std::unordered_map<std::string, RowInfo> rows_;
  std::vector<char> row_types_;
  std::unordered_map<std::string, Index> cols_;
  std::vector<std::string> col_names_;
  Vector cost_;
  std::vector<Triplet> entries_;
  std::map<Index, double> rhs_;
  std::map<Index, double> ranges_;
  std::map<Index, std::pair<std::optional<double>, std::optional<double>>> bounds_;
  double offset_ = 0.0;
};

}  // namespace

GeneralLp ParseMpsSubset(const std::string& text, const std::string& source) {
  return MpsParser(source).Parse(text);
}

GeneralLp ReadMpsSubset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseMpsSubset(ss.str(), path);
}

}  // namespace pdhgnet
