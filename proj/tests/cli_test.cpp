// Copyright 2026 The iqfi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

#include "iqfi/cli.hpp"
#include "iqfi/parallel.hpp"
#include "iqfi/protocol_json.hpp"

namespace iqfi::cli {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "iqfi-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("iqfi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Parses "# iqfi-lab v1 / omega,J" files into (omega, J) columns.
  static std::pair<std::vector<double>, std::vector<double>> read_spectrum(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# iqfi-lab v1");
    std::getline(in, line);
    EXPECT_EQ(line, "omega,J");
    std::vector<double> w;
    std::vector<double> j;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      w.push_back(std::stod(line.substr(0, comma)));
      j.push_back(std::stod(line.substr(comma + 1)));
    }
    return {w, j};
  }

  static double argmax(const std::pair<std::vector<double>, std::vector<double>>& s) {
    const auto it = std::max_element(s.second.begin(), s.second.end());
    return s.first[static_cast<std::size_t>(it - s.second.begin())];
  }

  fs::path dir_;
};

double K_of(const Outcome& o) { return nlohmann::json::parse(o.out).at("K").get<double>(); }

TEST_F(CliTest, IqfiNamedProtocols) {
  Outcome r = invoke({"iqfi", "--protocol", "ramsey", "--T", "4", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(K_of(r), 8.0 * kPi, 1e-3 * 8.0 * kPi);
  const auto report = nlohmann::json::parse(r.out);
  EXPECT_EQ(report.at("bounds").size(), 2U);

  r = invoke({"iqfi", "--protocol", "pi-train", "--T", "4", "--B", "0.01", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(K_of(r), 8.0 * kPi, 1e-2 * 8.0 * kPi);

  r = invoke({"iqfi", "--protocol", "ghz", "--n", "2", "--T", "4", "--B", "0", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(K_of(r), 32.0 * kPi, 1e-2 * 32.0 * kPi);

  r = invoke({"iqfi", "--protocol", "ramsey", "--T", "2"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.rfind("# iqfi-lab v1\nT,K,K_err,tail_coefficient\n2,", 0), 0U);
}

TEST_F(CliTest, SpectrumShapes) {
  Outcome r = invoke({"spectrum", "--protocol", "ramsey", "--T", "2", "--B", "1",
                      "--omega-max", "10", "--omega-points", "201"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(argmax(read_spectrum(r.out)), 0.0);

  const double g = kPi / 2.0;
  r = invoke({"spectrum", "--protocol", "gx", "--T", "8", "--B", "1", "--omega-max", "6",
              "--omega-points", "121"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const double peak = argmax(read_spectrum(r.out));
  EXPECT_GE(peak, 1.8 * g);
  EXPECT_LE(peak, 2.2 * g);

  r = invoke({"spectrum", "--protocol", "pi-train", "--T", "4", "--B", "1", "--omega-points",
              "201"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto pi = read_spectrum(r.out);
  EXPECT_NEAR(pi.second.front(), 0.0, 1e-12);
  EXPECT_GT(argmax(pi), 1.0);
}

TEST_F(CliTest, JsonSpectrum) {
  const Outcome r = invoke({"spectrum", "--omega-points", "5", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("omega").size(), 5U);
  EXPECT_EQ(j.at("J").size(), 5U);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({"iqfi", "--bogus"}).code, kUsageError);
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"iqfi", "--protocol", "nope"}).code, kUsageError);
  EXPECT_EQ(invoke({"iqfi", "--format", "xml"}).code, kUsageError);
  EXPECT_EQ(invoke({"iqfi", "--phi", "7"}).code, kUsageError);
  EXPECT_EQ(invoke({"iqfi", "--T", "-1"}).code, kUsageError);
  EXPECT_EQ(invoke({"iqfi", "--T", "abc"}).code, kUsageError);
  EXPECT_EQ(invoke({"haar", "--protocol", "gx"}).code, kUsageError);
  EXPECT_EQ(invoke({"spectrum", "--omega-points", "0"}).code, kUsageError);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

TEST_F(CliTest, IntegrationFailureExitsThreeAndLeavesOutputAlone) {
  const std::string out = path("k.json");
  { std::ofstream(out) << "previous"; }
  const Outcome r = invoke({"iqfi", "--rel-tol", "1e-300", "--out", out});
  EXPECT_EQ(r.code, kIntegrationFailure) << r.err;
  EXPECT_EQ(slurp(out), "previous");
}

TEST_F(CliTest, OutputsAreDeterministicAndAtomic) {
  const std::string a = path("a.csv");
  const std::string b = path("b.csv");
  ASSERT_EQ(invoke({"spectrum", "--protocol", "pi2-train", "--T", "2", "--B", "1", "--out", a,
                    "--jobs", "1"}).code, kOk);
  ASSERT_EQ(invoke({"spectrum", "--protocol", "pi2-train", "--T", "2", "--B", "1", "--out", b,
                    "--jobs", "3"}).code, kOk);
  EXPECT_EQ(slurp(a), slurp(b));
  for (const auto& entry : fs::directory_iterator(dir_)) {
    EXPECT_EQ(entry.path().string().find(".tmp."), std::string::npos);
  }
}

TEST_F(CliTest, Fig1WritesOneSweepPerField) {
  const std::string prefix = path("fig1");
  const Outcome r = invoke({"fig1", "--Ts", "2,4", "--fields", "1,0", "--slope-window", "2,4",
                            "--out", prefix});
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string one = slurp(prefix + "_B1.csv");
  EXPECT_EQ(one.rfind("# iqfi-lab v1\nT,K,K_err,slope_window\n2,", 0), 0U);
  const std::string zero = slurp(prefix + "_B0.csv");
  EXPECT_NE(zero.find("\n4,"), std::string::npos);
  EXPECT_NE(r.out.find("B=0 slope[2,4]="), std::string::npos);
}

TEST_F(CliTest, Fig2WritesFourSpectraPerPanel) {
  const std::string prefix = path("fig2");
  const Outcome r = invoke({"fig2", "--Ts", "2", "--omega-points", "21", "--out", prefix});
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* name : {"ramsey", "pi-train", "pi2-train", "gx"}) {
    const auto s = read_spectrum(slurp(prefix + "_T2_" + name + ".csv"));
    EXPECT_EQ(s.first.size(), 21U);
    for (const double j : s.second) EXPECT_GE(j, 0.0);
  }
}

TEST_F(CliTest, HaarReport) {
  const Outcome r = invoke({"haar", "--protocol", "pi-train", "--T", "4", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("method"), "analytic-alpha");
  EXPECT_NEAR(j.at("value").get<double>(), 16.0 * kPi / 3.0, 1e-2 * 16.0 * kPi / 3.0);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const std::string ini = path("run.ini");
  { std::ofstream(ini) << "protocol = ramsey\nT = 2\nformat = json\n"; }
  Outcome r = invoke({"iqfi", "--config", ini});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(K_of(r), 4.0 * kPi, 1e-3 * 4.0 * kPi);
  r = invoke({"iqfi", "--config", ini, "--T", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(K_of(r), 6.0 * kPi, 1e-3 * 6.0 * kPi);
}

TEST_F(CliTest, ProtocolFile) {
  const std::string file = path("seq.json");
  { std::ofstream(file) << dump_sequence(make_pi_train({0.5, 1.5}, Axis::Y, 2.0)); }
  const Outcome r = invoke({"iqfi", "--protocol", "file", "--protocol-file", file, "--B", "0.01",
                            "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NEAR(K_of(r), 4.0 * kPi, 1e-2 * 4.0 * kPi);
  EXPECT_EQ(invoke({"iqfi", "--protocol", "file", "--protocol-file", path("missing.json")}).code,
            kUsageError);
}

TEST_F(CliTest, BoundsCheckPassesWithDefaultSeed) {
  const std::string out = path("bounds.json");
  const Outcome r = invoke({"bounds-check", "--format", "json", "--out", out});
  ASSERT_EQ(r.code, kOk) << r.err << r.out;
  const auto reports = nlohmann::json::parse(slurp(out));
  ASSERT_TRUE(reports.is_array());
  EXPECT_GT(reports.size(), 100U);
  for (const auto& rep : reports) EXPECT_TRUE(rep.at("satisfied").get<bool>()) << rep.dump();
}

TEST(Jobs, ExplicitRequestThenEnvironmentThenSerial) {
  ::unsetenv("IQFI_LAB_THREADS");
  EXPECT_EQ(resolve_jobs(), 1U);
  ::setenv("IQFI_LAB_THREADS", "3", 1);
  EXPECT_EQ(resolve_jobs(), 3U);
  EXPECT_EQ(resolve_jobs(5), 5U);
  ::setenv("IQFI_LAB_THREADS", "junk", 1);
  EXPECT_EQ(resolve_jobs(), 1U);
  ::unsetenv("IQFI_LAB_THREADS");
}

TEST(ParallelMap, OrderAndExceptions) {
  const auto squares = parallel_map(50, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(squares[i], i * i);
  EXPECT_THROW(parallel_map(10, 3,
                            [](std::size_t i) -> int {
                              if (i == 7) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace iqfi::cli
