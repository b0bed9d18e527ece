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

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hmip/scenario.hpp"

namespace hmip {
namespace {

const std::string kSource = HMIP_SOURCE_DIR;

std::string ErrorOf(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(Scenario, RoundTripsEveryShippedFile) {
  for (const char* name : {"scenarios/peer_grading.json", "scenarios/peer_grading_learning.json",
                           "scenarios/peer_grading_single.json", "scenarios/small_binary.json",
                           "tests/fixtures/algorithm1_unconditional.json", "tests/fixtures/algorithm1_conditional.json"}) {
    const Scenario a = load_scenario(kSource + "/" + name);
    const std::string text = serialize_scenario(a);
    const Scenario b = parse_scenario(text);
    EXPECT_EQ(a.structure, b.structure) << name;
    EXPECT_EQ(serialize_scenario(b), text) << name;
  }
}

TEST(Scenario, ShippedPeerGradingMatchesBuiltIn) {
  const Scenario a = load_scenario(kSource + "/scenarios/peer_grading.json");
  EXPECT_EQ(a.structure, peer_grading_config());
  EXPECT_EQ(serialize_scenario(a), serialize_scenario(peer_grading_scenario()));
}

TEST(Scenario, UnknownKeysAreRejectedWithPath) {
  std::string text = serialize_scenario(peer_grading_scenario());
  const std::string bad = text.substr(0, text.find("\"tasks\"")) + "\"taks\": 3, " + text.substr(text.find("\"tasks\""));
  EXPECT_NE(ErrorOf(bad).find("simulation.taks: unknown key"), std::string::npos) << ErrorOf(bad);
  const std::string top = "{\"structure\": {}, \"extra\": 1}";
  EXPECT_NE(ErrorOf(top).find("extra: unknown key"), std::string::npos);
}

TEST(Scenario, MalformedJsonReportsLine) {
  const std::string err = ErrorOf("{\n  \"name\": \"x\",\n  oops\n}");
  EXPECT_NE(err.find("line 3"), std::string::npos) << err;
}

TEST(Scenario, TypeAndRangeErrorsNameTheField) {
  std::string text = serialize_scenario(peer_grading_scenario());
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string t = text;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  EXPECT_NE(ErrorOf(replace("\"replicates\": 100", "\"replicates\": 0")).find("simulation.replicates"),
            std::string::npos);
  EXPECT_NE(ErrorOf(replace("\"count\": 2", "\"count\": \"two\"")).find("structure.agent_classes[0].count"),
            std::string::npos);
  EXPECT_NE(ErrorOf(replace("\"kind\": \"multi\"", "\"kind\": \"auction\"")).find("mechanism.kind"),
            std::string::npos);
  EXPECT_NE(ErrorOf(replace("\"prob\": 0.2", "\"prob\": 0.9")).find("structure."), std::string::npos);
}

TEST(Scenario, ProfileEntriesMustBeMethods) {
  Scenario sc = peer_grading_scenario();
  sc.simulation.profile.assign(10, "m_w");
  sc.simulation.profile[4] = "m_z";
  const std::string err = ErrorOf(serialize_scenario(sc));
  EXPECT_NE(err.find("simulation.profile[4]"), std::string::npos) << err;
}

TEST(Scenario, PrudentProfilesPerMechanism) {
  Scenario sc = peer_grading_scenario();
  const InformationStructure s = build_structure(sc.structure);
  const auto multi = scenario_profile(sc, s);
  EXPECT_EQ(multi[0], 2);
  EXPECT_EQ(multi[1], 2);
  sc.mechanism.kind = MechanismKind::kLearning;
  const auto learning = scenario_profile(sc, s);
  EXPECT_EQ(learning[0], 2);
  EXPECT_EQ(learning[9], 1);
  sc.mechanism.alpha = {1.0, 1.0};
  EXPECT_THROW(scenario_alpha(sc, s), ValidationError);
}

TEST(ReportFiles, MultiRoundTrip) {
  const InformationStructure s = build_structure(peer_grading_config());
  const SignalTable world = sample_world(s, 6, 3);
  const MultiReportSet r = truthful_reports(s, world, {2, 2, 1, 1, 0, 0, 1, 1, 1, kNoEffort});
  std::stringstream buf;
  write_multi_reports(s, r, buf);
  EXPECT_EQ(read_multi_reports(s, buf), r);
}

TEST(ReportFiles, EmptyTokenAndBlankAgree) {
  const InformationStructure s = build_structure(peer_grading_config(2, 0));
  std::istringstream a("agent,task,m_l,m_w,m_q\n0,1,smile,,\n1,1,frown,\xE2\x88\x85,\xE2\x88\x85\n");
  const MultiReportSet r = read_multi_reports(s, a);
  EXPECT_EQ(r.claimed(0, 0), 0);
  EXPECT_EQ(r.signal(1, 0, 1), kEmpty);
  std::istringstream stranger("agent,task,m_l,m_w,m_q\n7,1,smile,,\n");
  EXPECT_THROW(read_multi_reports(s, stranger), ValidationError);
}

TEST(ReportFiles, LearningRoundTrip) {
  std::vector<SubmittedVector> v = {{0, true, "a", kNoEffort, {0, 1, 1, 2}},
                                    {1, true, "b", kNoEffort, {1, 1, 0, 0}}};
  std::stringstream buf;
  write_learning_vectors(v, buf);
  const auto back = read_learning_vectors(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].values, v[0].values);
  EXPECT_EQ(back[1].label, "b");
  std::istringstream holey("agent,label,own,t1,t2\n0,a,1,0,\xE2\x88\x85\n");
  EXPECT_THROW(read_learning_vectors(holey), ValidationError);
}

TEST(ReportFiles, SingleReports) {
  const InformationStructure s = build_structure(peer_grading_config(2, 0));
  std::istringstream in(
      "agent,m_l,m_w,m_q,m_l:frown,m_l:smile,m_w:frown,m_w:smile,m_q:frown,m_q:smile\n"
      "0,smile,frown,,0.01,0.99,0.8,0.2,,\n"
      "1,smile,,,0.01,0.99,,,,\n");
  const auto r = read_single_reports(s, in);
  EXPECT_EQ(r[0].performed, 1);
  EXPECT_EQ(r[1].performed, 0);
  EXPECT_TRUE(r[1].forecasts[1].empty());
  EXPECT_DOUBLE_EQ(r[0].forecasts[1][0], 0.8);
  std::istringstream half("agent,m_l,m_l:frown,m_l:smile\n0,smile,0.5,\n1,smile,0.5,0.5\n");
  EXPECT_THROW(read_single_reports(s, half), ValidationError);
}

}  // namespace
}  // namespace hmip
