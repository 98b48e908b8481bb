// Copyright 2026 The Impedance Space Authors.
//
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "impedance/cli.hpp"
#include "impedance/report.hpp"

namespace impspace {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
  std::map<std::string, std::string> kv() const {
    std::istringstream in(out);
    return KeyValueReport::parse(in);
  }
  double num(const std::string& key) const { return std::stod(kv().at(key)); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(IMPSPACE_TEST_TMPDIR) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, NoArgsPrintsHelp) {
  const auto r = run({});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("synth"), std::string::npos);
}

TEST(Cli, BarePlotPrintsHelp) {
  const auto r = run({"plot"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("--kind"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run({"synth", "--bogus", "1"}).code, cli::kExitUsage);
}

TEST(CliSynth, ReportHasTanRho) {
  const auto path = tmp("synth_report.txt");
  const auto r = run({"synth", "--k", "1000", "--d", "200", "--m", "0", "--a", "1", "--w", "1",
                      "--report", path.string(), "--out", tmp("synth.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.num("tan_rho"), 200.0, 1e-10);
  std::ifstream in(path);
  const auto kv = KeyValueReport::parse(in);
  EXPECT_NEAR(std::stod(kv.at("tan_rho")), 200.0, 1e-10);
}

TEST(CliSynth, ZeroImpedanceBinormal) {
  const auto r = run({"synth", "--k", "0", "--d", "0", "--m", "0", "--a", "1", "--w", "1",
                      "--report", tmp("zero_report.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.num("b1"), 0.0);
  EXPECT_EQ(r.num("b2"), 0.0);
  EXPECT_EQ(r.num("b3"), -1.0);
}

TEST(CliSynth, ZeroAmplitudeIsUsageError) {
  const auto r = run({"synth", "--a", "0", "--k", "10"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("amplitude"), std::string::npos) << r.err;
}

TEST(CliSynth, CsvToStdout) {
  const auto r = run({"synth", "--k", "100", "--n", "10"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.starts_with("t,e,e_dot,f_int\n"));
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 11);
}

TEST(CliSynth, Deterministic) {
  const std::vector<std::string> args{"synth", "--k", "100", "--d", "3", "--noise", "0.01",
                                      "--seed", "42", "--n", "50"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliFit, RoundTrip) {
  const auto csv = tmp("fit_in.csv");
  ASSERT_EQ(run({"synth", "--k", "1000", "--d", "200", "--out", csv.string(), "--report",
                 tmp("fit_in_report.txt").string()})
                .code,
            0);
  const auto report = tmp("fit_report.txt");
  const auto r = run({"fit", csv.string(), "--w", "1", "--out", report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.num("recovered_k"), 1000.0, 1e-6 * 1000);
  EXPECT_NEAR(r.num("recovered_d"), 200.0, 1e-6 * 200);
  EXPECT_TRUE(fs::exists(report));
}

TEST(CliFit, AssumedMass) {
  const auto csv = tmp("fit_mass.csv");
  // Plane (0, 200, -1) at w = 2: lumped term zero, so k = m w^2 = 20 with m = 5.
  ASSERT_EQ(run({"synth", "--k", "20", "--d", "200", "--m", "5", "--w", "2", "--out",
                 csv.string(), "--report", tmp("fit_mass_report.txt").string()})
                .code,
            0);
  const auto r = run({"fit", csv.string(), "--w", "2", "--assumed-m", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.num("lumped_km"), 0.0, 1e-6);
  EXPECT_NEAR(r.num("recovered_k"), 20.0, 1e-6 * 20);
  EXPECT_NEAR(r.num("recovered_d"), 200.0, 1e-6 * 200);
}

TEST(CliFit, ConstantDataIsDegenerate) {
  const auto csv = tmp("constant.csv");
  std::ofstream f(csv);
  f << "t,e,e_dot,f_int\n";
  for (int i = 0; i < 20; ++i) f << i << ",0.1,0,5\n";
  f.close();
  const auto r = run({"fit", csv.string(), "--w", "1"});
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_NE(r.err.find("degenerate-data"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("stage"), std::string::npos) << r.err;
}

TEST(CliFit, MissingFile) {
  EXPECT_EQ(run({"fit", "/nonexistent/x.csv", "--w", "1"}).code, cli::kExitUsage);
}

TEST(CliRecover, FromNormal) {
  const auto r = run({"recover", "--normal", "0,200,-1", "--w", "2", "--assumed-m", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.num("recovered_k"), 20.0, 1e-9);
  EXPECT_NEAR(r.num("recovered_d"), 200.0, 1e-9);
}

TEST(CliRecover, IllConditioned) {
  EXPECT_EQ(run({"recover", "--normal", "1,1,0", "--w", "1"}).code, cli::kExitNumerical);
}

TEST(CliMetrics, SelfComparisonIsZero) {
  const auto csv = tmp("metrics_self.csv");
  ASSERT_EQ(run({"synth", "--k", "1000", "--d", "200", "--periods", "1", "--n", "720", "--out",
                 csv.string(), "--report", tmp("metrics_self_report.txt").string()})
                .code,
            0);
  const auto r = run({"metrics", "--k", "1000", "--d", "200", "--measured", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(r.num("force_fidelity_rms"), 1e-9);
  EXPECT_LT(r.num("orientation_error"), 1e-8);
  EXPECT_LT(std::abs(r.num("stiffness_error")), 1e-8);
  EXPECT_LT(std::abs(r.num("damping_error")), 1e-8);
}

TEST(CliMetrics, StiffnessMismatchClosedForm) {
  const auto csv = tmp("metrics_k.csv");
  // One period without the repeated endpoint.
  ASSERT_EQ(run({"synth", "--k", "1100", "--periods", "0.999", "--n", "1000", "--out",
                 csv.string(), "--report", tmp("metrics_k_report.txt").string()})
                .code,
            0);
  const auto r = run({"metrics", "--k", "1000", "--measured", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.num("force_fidelity_rms"), 100.0 / std::sqrt(2.0), 1e-9);
}

TEST(CliMetrics, FromFitReport) {
  const auto csv = tmp("metrics_fit.csv");
  const auto rep = tmp("metrics_fit_report.txt");
  ASSERT_EQ(run({"synth", "--k", "1000", "--d", "200", "--out", csv.string(), "--report",
                 tmp("unused.txt").string()})
                .code,
            0);
  ASSERT_EQ(run({"fit", csv.string(), "--w", "1", "--out", rep.string()}).code, 0);
  const auto r = run({"metrics", "--k", "1000", "--d", "200", "--fit-report", rep.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(r.num("orientation_error"), 1e-8);
  EXPECT_LT(r.num("force_fidelity_rms"), 1e-3);
}

TEST(CliMetrics, OmegaMismatchIsUsageError) {
  const auto csv = tmp("metrics_w.csv");
  ASSERT_EQ(run({"synth", "--k", "1000", "--w", "3", "--periods", "4", "--out", csv.string(),
                 "--report", tmp("metrics_w_report.txt").string()})
                .code,
            0);
  EXPECT_EQ(run({"metrics", "--k", "1000", "--w", "1", "--measured", csv.string()}).code,
            cli::kExitUsage);
}

TEST(CliMetrics, MissingFileIsUsageError) {
  EXPECT_EQ(run({"metrics", "--k", "1000", "--measured", "/nonexistent/m.csv"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"metrics", "--k", "1000"}).code, cli::kExitUsage);
}

TEST(CliPlot, DampingSweep) {
  const auto r = run({"plot", "--kind", "damping", "--k", "500,1000,2000", "--d", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("</svg>"), std::string::npos);
  EXPECT_NE(r.out.find("k=2000"), std::string::npos);
}

TEST(CliPlot, StiffnessSweepToFile) {
  const auto svg = tmp("sweep.svg");
  const auto data = tmp("sweep.csv");
  const auto r = run({"plot", "--kind", "stiffness", "--d", "0,100,200,400", "--k", "1000",
                      "--out", svg.string(), "--data", data.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(svg));
  EXPECT_TRUE(fs::exists(data));
}

TEST(CliPlot, SpaceDeterministic) {
  const std::vector<std::string> args{"plot", "--kind", "space", "--k", "1000", "--d", "200"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliPlot, BadKindIsUsageError) {
  EXPECT_EQ(run({"plot", "--kind", "nope"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"plot", "--k", "1,x"}).code, cli::kExitUsage);
}

TEST(CliIngestCheck, Summary) {
  const auto csv = tmp("check.csv");
  ASSERT_EQ(run({"synth", "--k", "10", "--periods", "3", "--out", csv.string(), "--report",
                 tmp("check_report.txt").string()})
                .code,
            0);
  const auto r = run({"ingest-check", csv.string(), "--w", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.num("rows"), 500.0);
}

}  // namespace
}  // namespace impspace
