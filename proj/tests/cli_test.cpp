// Copyright 2026 The HMIP Lab Authors.
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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "hmip/scenario.hpp"

namespace hmip::cli {
namespace {

namespace fs = std::filesystem;

const std::string kSource = HMIP_SOURCE_DIR;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path Fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hmip_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Outcome {
  int code;
  std::string log;
  std::string err;
};

Outcome Exec(const std::string& command, const CommandOptions& o) {
  std::ostringstream log, err;
  const int code = run_command(command, o, log, err);
  return {code, log.str(), err.str()};
}

fs::path WriteScenario(const fs::path& dir, const Scenario& sc) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << serialize_scenario(sc);
  return p;
}

// Value of a column in the row whose first two cells are (f, performed).
double Cell(const std::string& csv, const std::string& f, const std::string& row, int column) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::vector<std::string> c;
    std::string x;
    while (std::getline(cells, x, ',')) c.push_back(x);
    if (c.size() > 2 && c[0] == f && c[1] == row) return std::stod(c.at(column));
  }
  ADD_FAILURE() << "row " << f << "," << row << " missing";
  return 0.0;
}

TEST(MiTable, PeerGradingShannonTable) {
  CommandOptions o;
  o.out_dir = Fresh("mi").string();
  ASSERT_EQ(Exec("mi-table", o).code, kExitOk);
  const std::string t = Slurp(fs::path(o.out_dir) / "mi_table.csv");
  const double q[] = {0.6931, 0.2259, 0.0115, 0.9305}, w[] = {0.6931, 0.2218, 0.0041, 0.9190},
               l[] = {0.6931, 0, 0, 0.6931};
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(Cell(t, "kl", "m_q", c + 2), q[c], 1e-4);
    EXPECT_NEAR(Cell(t, "kl", "m_w", c + 2), w[c], 1e-4);
    EXPECT_NEAR(Cell(t, "kl", "m_l", c + 2), l[c], 1e-4);
  }
}

TEST(MiTable, IntermediatesAndDeterminism) {
  CommandOptions o;
  o.out_dir = Fresh("mi2").string();
  ASSERT_EQ(Exec("mi-table", o).code, kExitOk);
  const std::string first = Slurp(fs::path(o.out_dir) / "mi_pairs.csv");
  EXPECT_NE(first.find("kl,m_l+m_w,m_q,0.0185469"), std::string::npos);
  EXPECT_NE(first.find("kl,m_l+m_w+m_q,m_q,0.026695"), std::string::npos);
  EXPECT_NE(first.find("kl,m_l+m_w+m_q,m_w+m_q,0.237398"), std::string::npos);
  ASSERT_EQ(Exec("mi-table", o).code, kExitOk);
  EXPECT_EQ(Slurp(fs::path(o.out_dir) / "mi_pairs.csv"), first);
}

TEST(MiTable, SingleMethodRowRepeatsItsMi) {
  CommandOptions o;
  o.scenario = kSource + "/tests/fixtures/algorithm1_unconditional.json";
  o.out_dir = Fresh("mi1").string();
  ASSERT_EQ(Exec("mi-table", o).code, kExitOk);
  const std::string t = Slurp(fs::path(o.out_dir) / "mi_table.csv");
  const double mi = Cell(t, "kl", "m", 2);
  EXPECT_GT(mi, 0.0);
  EXPECT_DOUBLE_EQ(Cell(t, "kl", "m", 3), mi);
}

TEST(MiTable, JsonFormat) {
  CommandOptions o;
  o.out_dir = Fresh("mij").string();
  o.format = "json";
  ASSERT_EQ(Exec("mi-table", o).code, kExitOk);
  const auto j = nlohmann::json::parse(Slurp(fs::path(o.out_dir) / "mi_table.json"));
  EXPECT_EQ(j["table"].size(), 6u);
  o.format = "xml";
  EXPECT_EQ(Exec("mi-table", o).code, kExitValidation);
}

TEST(CoeffSolve, PeerGradingAndSweep) {
  CommandOptions o;
  o.out_dir = Fresh("coeff").string();
  o.sweep = true;
  const Outcome r = Exec("coeff-solve", o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.log.find("non-increasing as margin shrinks: yes"), std::string::npos);
  const std::string c = Slurp(fs::path(o.out_dir) / "coefficients.csv");
  std::istringstream in(c);
  std::string line;
  double aoi_q = 0.0;
  while (std::getline(in, line))
    if (line.rfind("m_q,", 0) == 0) aoi_q = std::stod(line.substr(line.rfind(',') + 1));
  EXPECT_NEAR(aoi_q, 5.001, 1e-6);  // low-cost m_q cost plus margin
  EXPECT_TRUE(fs::exists(fs::path(o.out_dir) / "margin_sweep.csv"));
}

TEST(CoeffSolve, OneAgentIsInfeasible) {
  const fs::path dir = Fresh("coeff1");
  Scenario sc = peer_grading_scenario();
  sc.structure = peer_grading_config(1, 0);
  CommandOptions o;
  o.scenario = WriteScenario(dir, sc).string();
  o.out_dir = dir.string();
  const Outcome r = Exec("coeff-solve", o);
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.log.find("infeasible"), std::string::npos);
}

TEST(Simulate, ZeroReplicatesIsValidationError) {
  CommandOptions o;
  o.replicates = 0;
  o.out_dir = Fresh("sim0").string();
  const Outcome r = Exec("simulate", o);
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("replicates"), std::string::npos);
}

TEST(Simulate, ReproducibleBytes) {
  CommandOptions o;
  o.replicates = 3;
  o.tasks = 40;
  o.seed = 9;
  o.out_dir = Fresh("sim").string();
  ASSERT_EQ(Exec("simulate", o).code, kExitOk);
  const std::string first = Slurp(fs::path(o.out_dir) / "utilities.csv");
  ASSERT_EQ(Exec("simulate", o).code, kExitOk);
  EXPECT_EQ(Slurp(fs::path(o.out_dir) / "utilities.csv"), first);
}

TEST(Scan, FlatPayExitsWithViolation) {
  const fs::path dir = Fresh("scanflat");
  Scenario sc = peer_grading_scenario();
  sc.mechanism.kind = MechanismKind::kFlat;
  sc.simulation.profile.assign(10, "m_w");
  sc.simulation.scan_agents = {0};
  sc.simulation.library.report_maps = false;
  sc.simulation.library.lambdas.clear();
  sc.simulation.tasks = 20;
  sc.simulation.replicates = 3;
  CommandOptions o;
  o.scenario = WriteScenario(dir, sc).string();
  o.out_dir = dir.string();
  EXPECT_EQ(Exec("scan", o).code, kExitViolation);
  EXPECT_NE(Slurp(dir / "scan.csv").find("effort none"), std::string::npos);
}

TEST(Scan, NamedPotentScanPasses) {
  CommandOptions o;
  o.scan = "potent_hmip";
  o.out_dir = Fresh("scanpot").string();
  const Outcome r = Exec("scan", o);
  EXPECT_EQ(r.code, kExitOk) << r.log;
  o.scan = "bogus";
  EXPECT_EQ(Exec("scan", o).code, kExitValidation);
}

TEST(Pay, AlgorithmOneUnconditionalTrace) {
  CommandOptions o;
  o.scenario = kSource + "/tests/fixtures/algorithm1_unconditional.json";
  o.reports = kSource + "/tests/fixtures/algorithm1_unconditional.csv";
  o.out_dir = Fresh("pay1").string();
  ASSERT_EQ(Exec("pay", o).code, kExitOk);
  const auto a = nlohmann::json::parse(Slurp(fs::path(o.out_dir) / "audit.json"));
  const auto& level = a[0]["levels"][0];
  EXPECT_EQ(level["B"], nlohmann::json({1, 3, 4}));
  EXPECT_EQ(level["score"].get<double>(), 0.0);
}

TEST(Pay, AlgorithmOneConditionalTrace) {
  CommandOptions o;
  o.scenario = kSource + "/tests/fixtures/algorithm1_conditional.json";
  o.reports = kSource + "/tests/fixtures/algorithm1_conditional.csv";
  o.out_dir = Fresh("pay2").string();
  ASSERT_EQ(Exec("pay", o).code, kExitOk);
  const auto a = nlohmann::json::parse(Slurp(fs::path(o.out_dir) / "audit.json"));
  bool found = false;
  for (const auto& level : a[0]["levels"])
    if (level["method"] == "m") {
      found = true;
      EXPECT_EQ(level["C"], nlohmann::json({1, 2, 3, 4, 5}));
      EXPECT_EQ(level["t_c_star"], 2);
      EXPECT_EQ(level["D"], nlohmann::json({1, 2, 4}));
      EXPECT_EQ(level["score"].get<double>(), 0.0);
    }
  EXPECT_TRUE(found);
}

TEST(Pay, BadLabelIsValidationError) {
  const fs::path dir = Fresh("paybad");
  std::ofstream(dir / "r.csv") << "agent,task,m\n0,1,smile\n0,2,grin\n";
  CommandOptions o;
  o.scenario = kSource + "/tests/fixtures/algorithm1_unconditional.json";
  o.reports = (dir / "r.csv").string();
  o.out_dir = dir.string();
  const Outcome r = Exec("pay", o);
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Learn, SimulatedRunWritesHierarchy) {
  const fs::path dir = Fresh("learn");
  CommandOptions o;
  o.tasks = 400;
  o.noise_agents = 2;
  o.out_dir = dir.string();
  const Outcome r = Exec("learn", o);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "hierarchy.csv"));
  EXPECT_TRUE(fs::exists(dir / "maximal_vectors.csv"));
  // The written clusters file names every submitted vector.
  const std::string clusters = Slurp(dir / "clusters.csv");
  EXPECT_NE(clusters.find("noise"), std::string::npos);
}

TEST(Verify, SmallRunPasses) {
  CommandOptions o;
  o.instances = 20;
  o.out_dir = Fresh("verify").string();
  const Outcome r = Exec("verify", o);
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(std::count(r.log.begin(), r.log.end(), '\n'), 6);
}

TEST(Commands, UnknownCommand) { EXPECT_EQ(Exec("frobnicate", CommandOptions{}).code, kExitValidation); }

}  // namespace
}  // namespace hmip::cli
