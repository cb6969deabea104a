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

#include "pdhgnet/persist.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdhgnet/error.hpp"

namespace pdhgnet {
namespace {

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream OpenForWrite(const std::string& path,
                           std::ios::openmode mode = std::ios::trunc) {
  std::ofstream out(path, std::ios::out | mode);
  if (!out) throw Error(ErrorKind::kIo, "cannot open for writing: " + path);
  return out;
}

void CloseChecked(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path);
}

void WriteSection(std::ostream& out, const char* tag,
                  std::span<const double> values) {
  out << tag << ' ' << values.size() << '\n';
  for (double v : values) out << FormatDouble(v) << '\n';
}

void WriteIndexSection(std::ostream& out, const char* tag,
                       std::span<const Index> values) {
  out << tag << ' ' << values.size() << '\n';
  for (Index v : values) out << v << '\n';
}

// Reads a text file line by line, skipping blank lines, and reports errors
// with the file name, the current section and the line number.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw Error(ErrorKind::kIo, "cannot open for reading: " + path);
  }

  void set_section(std::string s) { section_ = std::move(s); }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorKind::kParse, path_ + ":" + std::to_string(line_no_) +
                                       ": section '" + section_ + "': " + what);
  }

  // Next line split on whitespace. Fails at end of file.
  std::vector<std::string> Next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> toks;
      std::string t;
      while (ss >> t) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    Fail("unexpected end of file");
  }

  std::vector<std::string> Expect(const std::string& tag, std::size_t args) {
    set_section(tag);
    auto toks = Next();
    if (toks[0] != tag) Fail("expected '" + tag + "', found '" + toks[0] + "'");
    if (toks.size() != args + 1) {
      Fail("expected " + std::to_string(args) + " field(s) after '" + tag + "'");
    }
    return toks;
  }

  double ParseDouble(const std::string& s) {
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || std::isnan(v)) {
      Fail("invalid number '" + s + "'");
    }
    return v;
  }

  long long ParseInt(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0' || errno == ERANGE) {
      Fail("invalid integer '" + s + "'");
    }
    return v;
  }

  long long ParseCount(const std::string& s) {
    const long long v = ParseInt(s);
    if (v < 0) Fail("negative count");
    return v;
  }

  Vector ReadValues(const std::string& tag, long long expected) {
    const auto head = Expect(tag, 1);
    const long long count = ParseCount(head[1]);
    if (expected >= 0 && count != expected) {
      Fail("declared " + std::to_string(count) + " values, expected " +
           std::to_string(expected));
    }
    Vector v;
    v.reserve(static_cast<std::size_t>(count));
    while (static_cast<long long>(v.size()) < count) {
      for (const std::string& t : Next()) {
        if (static_cast<long long>(v.size()) == count) Fail("too many values");
        v.push_back(ParseDouble(t));
      }
    }
    return v;
  }

  std::vector<Index> ReadIndices(const std::string& tag, long long expected) {
    const auto head = Expect(tag, 1);
    const long long count = ParseCount(head[1]);
    if (count != expected) {
      Fail("declared " + std::to_string(count) + " entries, expected " +
           std::to_string(expected));
    }
    std::vector<Index> v;
    v.reserve(static_cast<std::size_t>(count));
    while (static_cast<long long>(v.size()) < count) {
      for (const std::string& t : Next()) {
        if (static_cast<long long>(v.size()) == count) Fail("too many entries");
        v.push_back(ParseInt(t));
      }
    }
    return v;
  }

  void ExpectMagic(const std::string& magic, int version) {
    set_section("header");
    const auto toks = Next();
    if (toks[0] != magic || toks.size() != 2) Fail("missing '" + magic + "' header");
    const long long v = ParseInt(toks[1]);
    if (v != version) {
      throw Error(ErrorKind::kUnsupportedVersion,
                  path_ + ": format version " + toks[1] + " (supported: " +
                      std::to_string(version) + ")");
    }
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::string section_ = "header";
  long long line_no_ = 0;
};

}  // namespace

void WriteInstance(const std::string& path, const LpInstance& inst,
                   const std::optional<InstanceLabel>& label) {
  inst.Validate();
  auto out = OpenForWrite(path);
  out << "PDHGLP " << kInstanceFormatVersion << '\n';
  out << "name " << (inst.name.empty() ? "unnamed" : inst.name) << '\n';
  out << "dims " << inst.num_vars() << ' ' << inst.num_cons() << ' '
      << inst.g.nnz() << '\n';
  WriteSection(out, "c", inst.c);
  WriteSection(out, "h", inst.h);
  WriteSection(out, "l", inst.l);
  WriteSection(out, "u", inst.u);
  WriteIndexSection(out, "row_offsets", inst.g.row_offsets());
  WriteIndexSection(out, "cols", inst.g.col_indices());
  WriteSection(out, "values", inst.g.values());
  if (label) {
    if (label->x.size() != inst.c.size() || label->y.size() != inst.h.size()) {
      ThrowUsage("label dimensions do not match the instance");
    }
    out << "label " << FormatDouble(label->tol) << '\n';
    WriteSection(out, "x", label->x);
    WriteSection(out, "y", label->y);
  }
  out << "end\n";
  CloseChecked(out, path);
}

InstanceFile ReadInstance(const std::string& path) {
  LineReader r(path);
  r.ExpectMagic("PDHGLP", kInstanceFormatVersion);
  InstanceFile f;
  f.instance.name = r.Expect("name", 1)[1];
  const auto dims = r.Expect("dims", 3);
  const long long n = r.ParseCount(dims[1]);
  const long long m = r.ParseCount(dims[2]);
  const long long nnz = r.ParseCount(dims[3]);
  f.instance.c = r.ReadValues("c", n);
  f.instance.h = r.ReadValues("h", m);
  f.instance.l = r.ReadValues("l", n);
  f.instance.u = r.ReadValues("u", n);
  auto offsets = r.ReadIndices("row_offsets", m + 1);
  auto cols = r.ReadIndices("cols", nnz);
  Vector values = r.ReadValues("values", nnz);
  r.set_section("values");
  try {
    f.instance.g = SparseMatrix::FromCsr(m, n, std::move(offsets), std::move(cols),
                                         std::move(values));
  } catch (const Error& e) {
    r.Fail(std::string("invalid CSR structure: ") + e.what());
  }
  r.set_section("trailer");
  auto toks = r.Next();
  if (toks[0] == "label") {
    r.set_section("label");
    if (toks.size() != 2) r.Fail("expected 'label <tol>'");
    InstanceLabel lab;
    lab.tol = r.ParseDouble(toks[1]);
    lab.x = r.ReadValues("x", n);
    lab.y = r.ReadValues("y", m);
    f.label = std::move(lab);
    r.set_section("trailer");
    toks = r.Next();
  }
  if (toks[0] != "end" || toks.size() != 1) r.Fail("expected 'end'");
  try {
    f.instance.Validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
  return f;
}

std::string Digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string ParamsDigest(const NetParams& params) {
  std::string text;
  for (Index w : params.widths) text += std::to_string(w) + ",";
  text += FormatDouble(params.bound_cap) + ";";
  for (double v : params.Flatten()) text += FormatDouble(v) + ",";
  return Digest(text);
}

namespace {

void WriteMatrix(std::ostream& out, const char* tag, const DenseMatrix& a) {
  out << tag << ' ' << a.rows() << ' ' << a.cols() << '\n';
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      out << (c ? " " : "") << FormatDouble(a(r, c));
    }
    out << '\n';
  }
}

DenseMatrix ReadMatrix(LineReader& r, const std::string& tag, Index rows,
                       Index cols) {
  const auto head = r.Expect(tag, 2);
  const long long rr = r.ParseCount(head[1]);
  const long long cc = r.ParseCount(head[2]);
  if (rr != rows || cc != cols) {
    throw Error(ErrorKind::kIntegrity,
                tag + " is " + head[1] + "x" + head[2] + " but the width chain needs " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  DenseMatrix a(rows, cols);
  std::size_t k = 0;
  const std::size_t total = static_cast<std::size_t>(rows * cols);
  while (k < total) {
    for (const std::string& t : r.Next()) {
      if (k == total) r.Fail("too many values");
      a.data()[k++] = r.ParseDouble(t);
    }
  }
  return a;
}

}  // namespace

void WriteWeights(const std::string& path, const NetParams& params,
                  const WeightMetadata& meta) {
  params.Validate();
  auto out = OpenForWrite(path);
  out << "PDHGNET " << kWeightFormatVersion << '\n';
  out << "depth " << params.depth() << '\n';
  out << "widths";
  for (Index w : params.widths) out << ' ' << w;
  out << '\n';
  out << "bound_cap " << FormatDouble(params.bound_cap) << '\n';
  out << "seed " << meta.seed << '\n';
  out << "digest " << (meta.config_digest.empty() ? "-" : meta.config_digest) << '\n';
  for (int k = 0; k < params.depth(); ++k) {
    out << "layer " << k << '\n';
    out << "tau " << FormatDouble(params.primal[k].tau) << '\n';
    WriteMatrix(out, "u_x", params.primal[k].u_x);
    WriteMatrix(out, "u_y", params.primal[k].u_y);
    out << "sigma " << FormatDouble(params.dual[k].sigma) << '\n';
    WriteMatrix(out, "v_y", params.dual[k].v_y);
    WriteMatrix(out, "v_x", params.dual[k].v_x);
    WriteMatrix(out, "w_x", params.dual[k].w_x);
  }
  WriteSection(out, "readout_x", params.readout_x);
  WriteSection(out, "readout_y", params.readout_y);
  out << "end\n";
  CloseChecked(out, path);
}

WeightFile ReadWeights(const std::string& path) {
  LineReader r(path);
  r.ExpectMagic("PDHGNET", kWeightFormatVersion);
  WeightFile f;
  NetParams& p = f.params;
  const long long depth = r.ParseCount(r.Expect("depth", 1)[1]);
  if (depth < 1) throw Error(ErrorKind::kIntegrity, path + ": depth must be >= 1");
  const auto w = r.Expect("widths", static_cast<std::size_t>(depth));
  for (long long k = 0; k < depth; ++k) {
    const long long d = r.ParseCount(w[static_cast<std::size_t>(k) + 1]);
    if (d < 1) throw Error(ErrorKind::kIntegrity, path + ": widths must be >= 1");
    p.widths.push_back(d);
  }
  p.bound_cap = r.ParseDouble(r.Expect("bound_cap", 1)[1]);
  const long long seed = r.ParseInt(r.Expect("seed", 1)[1]);
  f.meta.seed = static_cast<std::uint64_t>(seed);
  const std::string digest = r.Expect("digest", 1)[1];
  f.meta.config_digest = digest == "-" ? "" : digest;
  for (int k = 0; k < p.depth(); ++k) {
    const auto head = r.Expect("layer", 1);
    if (r.ParseInt(head[1]) != k) r.Fail("layers out of order");
    const Index in_x = p.primal_in(k);
    const Index in_y = p.dual_in(k);
    const Index out_w = p.widths[k];
    PrimalBlockParams pb;
    pb.tau = r.ParseDouble(r.Expect("tau", 1)[1]);
    pb.u_x = ReadMatrix(r, "u_x", in_x, out_w);
    pb.u_y = ReadMatrix(r, "u_y", in_y, out_w);
    DualBlockParams db;
    db.sigma = r.ParseDouble(r.Expect("sigma", 1)[1]);
    db.v_y = ReadMatrix(r, "v_y", in_y, out_w);
    db.v_x = ReadMatrix(r, "v_x", in_x, out_w);
    db.w_x = ReadMatrix(r, "w_x", out_w, out_w);
    p.primal.push_back(std::move(pb));
    p.dual.push_back(std::move(db));
  }
  p.readout_x = r.ReadValues("readout_x", -1);
  p.readout_y = r.ReadValues("readout_y", -1);
  r.set_section("trailer");
  const auto toks = r.Next();
  if (toks[0] != "end" || toks.size() != 1) r.Fail("expected 'end'");
  p.Validate();
  return f;
}

void WriteSolution(const std::string& path, const SolutionFile& sol) {
  auto out = OpenForWrite(path);
  out << "PDHGSOL " << kSolutionFormatVersion << '\n';
  out << "status " << (sol.status.empty() ? "unknown" : sol.status) << '\n';
  out << "iterations " << sol.iterations << '\n';
  WriteSection(out, "x", sol.x);
  WriteSection(out, "y", sol.y);
  out << "end\n";
  CloseChecked(out, path);
}

SolutionFile ReadSolution(const std::string& path) {
  LineReader r(path);
  r.ExpectMagic("PDHGSOL", kSolutionFormatVersion);
  SolutionFile s;
  s.status = r.Expect("status", 1)[1];
  s.iterations = static_cast<int>(r.ParseInt(r.Expect("iterations", 1)[1]));
  s.x = r.ReadValues("x", -1);
  s.y = r.ReadValues("y", -1);
  r.set_section("trailer");
  const auto toks = r.Next();
  if (toks[0] != "end" || toks.size() != 1) r.Fail("expected 'end'");
  return s;
}

namespace {

void WriteRows(std::ostream& out, const std::vector<RunRecord>& records) {
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatDouble(*v) : std::string();
  };
  for (const RunRecord& rec : records) {
    out << rec.instance << ',' << rec.n << ',' << rec.m << ',' << rec.mode << ','
        << rec.iterations << ',' << rec.restarts << ',' << FormatDouble(rec.seconds)
        << ',' << opt(rec.improv_iters) << ',' << opt(rec.improv_time) << '\n';
  }
}

}  // namespace

void WriteReport(const std::vector<RunRecord>& records, const std::string& path) {
  auto out = OpenForWrite(path);
  out << kReportHeader << '\n';
  WriteRows(out, records);
  CloseChecked(out, path);
}

void AppendReport(const std::vector<RunRecord>& records, const std::string& path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) ||
                     std::filesystem::file_size(path, ec) == 0;
  auto out = OpenForWrite(path, std::ios::app);
  if (fresh) out << kReportHeader << '\n';
  WriteRows(out, records);
  CloseChecked(out, path);
}

}  // namespace pdhgnet
