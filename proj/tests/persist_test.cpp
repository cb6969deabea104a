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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "pdhgnet/error.hpp"
#include "pdhgnet/generators.hpp"
#include "pdhgnet/mps.hpp"
#include "pdhgnet/pipeline.hpp"
#include "test_util.hpp"

namespace pdhgnet {
namespace {

using testing::TempPath;

std::string Slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kUsage;
}

TEST(InstanceFileTest, PageRankRoundTripIsExact) {
  const LpInstance inst = GenPageRank({100, 3, 0.85, 2});
  const std::string path = TempPath("pr100.inst");
  WriteInstance(path, inst);
  const InstanceFile f = ReadInstance(path);
  EXPECT_EQ(f.instance.g, inst.g);
  EXPECT_EQ(f.instance.c, inst.c);
  EXPECT_EQ(f.instance.h, inst.h);
  EXPECT_EQ(f.instance.l, inst.l);
  EXPECT_EQ(f.instance.u, inst.u);
  EXPECT_EQ(f.instance.name, inst.name);
  EXPECT_FALSE(f.label.has_value());
}

TEST(InstanceFileTest, RandomInstancesWithInfinitiesRoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SolvableInstance s = GenRandomSolvable(9, 6, 0.5, seed);
    s.instance.l[0] = -kInf;
    s.instance.u[1] = kInf;
    const std::string path = TempPath("rand.inst");
    WriteInstance(path, s.instance, InstanceLabel{s.x_star, s.y_star, 1e-12});
    const InstanceFile f = ReadInstance(path);
    EXPECT_EQ(f.instance.g, s.instance.g);
    EXPECT_EQ(f.instance.c, s.instance.c);
    EXPECT_EQ(f.instance.l, s.instance.l);
    EXPECT_EQ(f.instance.u, s.instance.u);
    ASSERT_TRUE(f.label.has_value());
    EXPECT_EQ(f.label->x, s.x_star);
    EXPECT_EQ(f.label->y, s.y_star);
  }
}

TEST(InstanceFileTest, LabelResidualsReverifyAfterLoad) {
  const LpInstance inst = GenPageRank({60, 3, 0.85, 1});
  SolverConfig cfg;
  cfg.tol = 1e-8;
  cfg.max_iter = 100000;
  const SolverResult r = PdhgSolve(inst, cfg);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  const std::string path = TempPath("labeled.inst");
  WriteInstance(path, inst, InstanceLabel{r.x, r.y, 1e-8});
  const InstanceFile f = ReadInstance(path);
  ASSERT_TRUE(f.label.has_value());
  EXPECT_LE(KktResiduals(f.instance, f.label->x, f.label->y).MaxResidual(), f.label->tol);
}

TEST(InstanceFileTest, TruncatedCsrNamesSection) {
  const std::string path = TempPath("trunc.inst");
  WriteInstance(path, GenPageRank({20, 3, 0.85, 1}));
  std::string text = Slurp(path);
  text = text.substr(0, text.find("values"));
  text += "values 5\n1\n2\n";
  Spit(path, text);
  try {
    ReadInstance(path);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("values"), std::string::npos) << e.what();
  }
  text = Slurp(path);
  text = text.substr(0, text.find("cols")) + "cols 10\n1\n";
  Spit(path, text);
  try {
    ReadInstance(path);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("cols"), std::string::npos) << e.what();
  }
}

TEST(InstanceFileTest, VersionAndSyntaxErrors) {
  const std::string path = TempPath("bad.inst");
  Spit(path, "PDHGLP 7\n");
  EXPECT_EQ(KindOf([&] { ReadInstance(path); }), ErrorKind::kUnsupportedVersion);
  Spit(path, "something else\n");
  EXPECT_EQ(KindOf([&] { ReadInstance(path); }), ErrorKind::kParse);
  WriteInstance(path, testing::OneDimLp());
  std::string text = Slurp(path);
  const auto at = text.find("c 1\n") + 4;
  text.replace(at, text.find('\n', at) - at, "1.0x");
  Spit(path, text);
  EXPECT_EQ(KindOf([&] { ReadInstance(path); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([&] { ReadInstance(TempPath("missing/none.inst")); }), ErrorKind::kIo);
}

TEST(WeightFileTest, TrainableRoundTripIsExact) {
  const NetParams p = InitTrainable({7, 5, 9}, 0.123, 0.456, 3, 10.0);
  const std::string path = TempPath("w.txt");
  WriteWeights(path, p, {42, "abc123"});
  const WeightFile f = ReadWeights(path);
  EXPECT_EQ(f.params, p);
  EXPECT_EQ(f.meta.seed, 42u);
  EXPECT_EQ(f.meta.config_digest, "abc123");
  EXPECT_EQ(ParamsDigest(f.params), ParamsDigest(p));
}

TEST(WeightFileTest, LoadedExactConstructionStillAligns) {
  const SolvableInstance s = GenRandomSolvable(14, 11, 0.4, 5);
  const StepSizes st = DefaultStepSizes(s.instance);
  AlignedNet net = ConstructThetaPdhg({10, 10, 10, 10}, st.tau, st.sigma);
  const std::string path = TempPath("theta.txt");
  WriteWeights(path, net.params);
  net.params = ReadWeights(path).params;
  EXPECT_LE(CheckAlignment(net, s.instance, st.tau, st.sigma).MaxDeviation(), 1e-8);
}

TEST(WeightFileTest, CorruptedWidthChainRejected) {
  const std::string path = TempPath("wbad.txt");
  WriteWeights(path, InitTrainable({4, 4}, 0.1, 0.1, 1));
  std::string text = Slurp(path);
  text.replace(text.find("widths 4 4"), 10, "widths 4 5");
  Spit(path, text);
  EXPECT_EQ(KindOf([&] { ReadWeights(path); }), ErrorKind::kIntegrity);
  Spit(path, "PDHGNET 2\n");
  EXPECT_EQ(KindOf([&] { ReadWeights(path); }), ErrorKind::kUnsupportedVersion);
}

TEST(SolutionFileTest, RoundTrip) {
  const std::string path = TempPath("sol.txt");
  WriteSolution(path, {{1.0, 0.1 + 0.2}, {3.0}, "optimal", 17});
  const SolutionFile s = ReadSolution(path);
  EXPECT_EQ(s.x, (Vector{1.0, 0.1 + 0.2}));
  EXPECT_EQ(s.y, (Vector{3.0}));
  EXPECT_EQ(s.status, "optimal");
  EXPECT_EQ(s.iterations, 17);
}

TEST(ReportTest, HeaderOnlyForEmptyRecords) {
  const std::string path = TempPath("empty.csv");
  WriteReport({}, path);
  EXPECT_EQ(Slurp(path),
            "instance,n,m,mode,iterations,restarts,seconds,improv_iters,improv_time\n");
}

TEST(ReportTest, ImprovementColumnsEmptyWithoutBaseline) {
  const std::string path = TempPath("rows.csv");
  WriteReport({{"a", 3, 4, "cold", 10, 1, 0.5, std::nullopt, std::nullopt},
               {"a", 3, 4, "warm", 5, 0, 0.25, 0.5, 0.25}},
              path);
  std::istringstream in(Slurp(path));
  std::string header, cold, warm;
  std::getline(in, header);
  std::getline(in, cold);
  std::getline(in, warm);
  EXPECT_EQ(cold, "a,3,4,cold,10,1,0.5,,");
  EXPECT_EQ(warm, "a,3,4,warm,5,0,0.25,0.5,0.25");
}

TEST(ReportTest, AppendWritesHeaderOnce) {
  const std::string path = TempPath("append.csv");
  std::remove(path.c_str());
  AppendReport({{"a", 1, 1, "cold", 1, 0, 0.0, std::nullopt, std::nullopt}}, path);
  AppendReport({{"b", 1, 1, "cold", 2, 0, 0.0, std::nullopt, std::nullopt}}, path);
  const std::string text = Slurp(path);
  EXPECT_EQ(text.find("instance,"), 0u);
  EXPECT_EQ(text.find("instance,", 1), std::string::npos);
  EXPECT_NE(text.find("\nb,"), std::string::npos);
}

TEST(ReportTest, UnwritablePathIsIoError) {
  EXPECT_EQ(KindOf([] { WriteReport({}, "/nonexistent_dir/x/report.csv"); }), ErrorKind::kIo);
}

constexpr const char* kTinyMps = R"(NAME          TINY
ROWS
 N  COST
 L  LIM1
 G  LIM2
COLUMNS
    X1        COST         1.0   LIM1         1.0
    X1        LIM2         1.0
    X2        COST         2.0   LIM1         1.0
RHS
    RHS       LIM1         4.0   LIM2         1.0
BOUNDS
 UP BND       X1           3.0
ENDATA
)";

TEST(MpsTest, HandFixtureMapsToGeneralLp) {
  const GeneralLp g = ParseMpsSubset(kTinyMps);
  EXPECT_EQ(g.name, "TINY");
  EXPECT_EQ(g.c, (Vector{1.0, 2.0}));
  ASSERT_EQ(g.senses.size(), 2u);
  EXPECT_EQ(g.senses[0], RowSense::kLe);
  EXPECT_EQ(g.senses[1], RowSense::kGe);
  EXPECT_EQ(g.rhs, (Vector{4.0, 1.0}));
  EXPECT_EQ(Spmv(g.a, Vector{1.0, 0.0}), (Vector{1.0, 1.0}));
  EXPECT_EQ(Spmv(g.a, Vector{0.0, 1.0}), (Vector{1.0, 0.0}));
  EXPECT_EQ(g.l, (Vector{0.0, 0.0}));
  EXPECT_EQ(g.u, (Vector{3.0, kInf}));
  const LpInstance inst = Canonicalize(g);
  EXPECT_EQ(inst.h, (Vector{-4.0, 1.0}));
}

TEST(MpsTest, RangesAndBoundTypes) {
  const std::string text = R"(NAME RNG
ROWS
 N obj
 E r1
 L r2
COLUMNS
 x obj 1 r1 1
 y obj 1 r2 1
 z obj 0 r1 1
RHS
 rhs r1 2 r2 5
RANGES
 rng r1 3 r2 2
BOUNDS
 FR bnd x
 MI bnd y
 FX bnd z 1.5
ENDATA
)";
  const GeneralLp g = ParseMpsSubset(text);
  ASSERT_EQ(g.senses.size(), 4u);
  EXPECT_EQ(g.senses, (std::vector<RowSense>{RowSense::kGe, RowSense::kLe, RowSense::kGe,
                                             RowSense::kLe}));
  EXPECT_EQ(g.rhs, (Vector{2.0, 5.0, 3.0, 5.0}));
  EXPECT_EQ(g.l, (Vector{-kInf, -kInf, 1.5}));
  EXPECT_EQ(g.u, (Vector{kInf, kInf, 1.5}));
}

TEST(MpsTest, RangesSectionIsOptional) {
  const GeneralLp g = ParseMpsSubset(kTinyMps);
  EXPECT_EQ(g.senses.size(), 2u);
}

TEST(MpsTest, IntegerMarkerIsUnsupported) {
  const std::string text = R"(NAME INT
ROWS
 N obj
 G c1
COLUMNS
    MARKER                 'MARKER'                 'INTORG'
    x  obj 1 c1 1
    MARKER                 'MARKER'                 'INTEND'
RHS
    rhs c1 1
ENDATA
)";
  try {
    ParseMpsSubset(text);
    FAIL() << "expected unsupported feature";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFeature);
    EXPECT_NE(std::string(e.what()).find("COLUMNS"), std::string::npos);
  }
}

TEST(MpsTest, UnsupportedSectionsAndBadInput) {
  const std::string quad = std::string(kTinyMps).replace(std::string(kTinyMps).find("ENDATA"),
                                                         6, "QUADOBJ\nENDATA");
  try {
    ParseMpsSubset(quad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFeature);
    EXPECT_NE(std::string(e.what()).find("QUADOBJ"), std::string::npos);
  }
  const std::string bv = std::string(kTinyMps).replace(std::string(kTinyMps).find(" UP BND"),
                                                       7, " BV BND");
  EXPECT_EQ(KindOf([&] { ParseMpsSubset(bv); }), ErrorKind::kUnsupportedFeature);
  EXPECT_EQ(KindOf([] { ParseMpsSubset("NAME X\nROWS\n N obj\n"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ParseMpsSubset("NAME X\nROWS\n Q obj\nENDATA\n"); }), ErrorKind::kParse);
  const std::string unknown_row = R"(NAME X
ROWS
 N obj
COLUMNS
 x nope 1
ENDATA
)";
  EXPECT_EQ(KindOf([&] { ParseMpsSubset(unknown_row); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ReadMpsSubset("/nonexistent.mps"); }), ErrorKind::kIo);
}

TEST(MpsTest, ReadsFromFile) {
  const std::string path = TempPath("tiny.mps");
  Spit(path, kTinyMps);
  EXPECT_EQ(ReadMpsSubset(path).c, (Vector{1.0, 2.0}));
}

}  // namespace
}  // namespace pdhgnet
