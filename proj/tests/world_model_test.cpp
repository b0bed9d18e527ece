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

#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hmip/joint_distribution.hpp"

namespace hmip {
namespace {

InformationStructure PeerGrading() { return build_structure(peer_grading_config()); }

// Brute force: Σ_a Q(a) Π channel(a)(σ), written without the library.
double BruteForce(const InformationStructure& s, const std::vector<SignalVar>& vars, const std::vector<int>& sig) {
  double total = 0.0;
  for (std::size_t a = 0; a < s.attributes.size(); ++a) {
    double p = s.attributes.probs[a];
    for (std::size_t k = 0; k < vars.size(); ++k) p *= s.methods[vars[k].method].channel[a][sig[k]];
    total += p;
  }
  return total;
}

TEST(BuildStructure, PeerGradingIsValid) {
  const InformationStructure s = PeerGrading();
  EXPECT_EQ(s.n_agents, 10);
  ASSERT_EQ(s.num_methods(), 3u);
  const MethodId l = s.method_index("m_l"), w = s.method_index("m_w"), q = s.method_index("m_q");
  EXPECT_TRUE(s.poset.dominates(q, w));
  EXPECT_TRUE(s.poset.dominates(w, l));
  EXPECT_TRUE(s.poset.dominates(q, l));  // closure
  EXPECT_FALSE(s.poset.dominates(l, q));
  EXPECT_EQ(s.poset.maximal(), std::vector<MethodId>{q});
  EXPECT_EQ(s.poset.minimal(), std::vector<MethodId>{l});
  EXPECT_EQ(s.poset.depth(q), 2);
  EXPECT_DOUBLE_EQ(s.costs.cost(0, q), 5.0);
  EXPECT_DOUBLE_EQ(s.costs.cost(9, q), 10.0);
  EXPECT_DOUBLE_EQ(s.costs.cost(9, kNoEffort), 0.0);
}

TEST(BuildStructure, TrivialSingleMethod) {
  StructureConfig c;
  c.attribute_names = {"only"};
  c.attribute_probs = {1.0};
  c.methods = {{"m", {"x"}, {{1.0}}}};
  c.agent_classes = {{"a", 1, {1.0}}};
  const InformationStructure s = build_structure(c);
  EXPECT_EQ(s.num_methods(), 1u);
  EXPECT_EQ(s.poset.maximal(), std::vector<MethodId>{0});
}

TEST(BuildStructure, RejectsCycle) {
  StructureConfig c = peer_grading_config();
  c.edges.push_back({"m_l", "m_q"});
  try {
    build_structure(c);
    FAIL() << "cycle accepted";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "poset.edges");
  }
}

TEST(BuildStructure, RejectsUnnormalizedPrior) {
  StructureConfig c = peer_grading_config();
  c.attribute_probs[0] += 0.01;
  try {
    build_structure(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "attributes.probs");
  }
}

TEST(BuildStructure, RejectsUnnormalizedChannel) {
  StructureConfig c = peer_grading_config();
  c.methods[1].channel[3][0] = 0.5;
  try {
    build_structure(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field().rfind("methods[1].channel", 0), 0u) << e.field();
  }
}

TEST(BuildStructure, RejectsNonMonotoneCost) {
  StructureConfig c = peer_grading_config();
  c.agent_classes[1].costs = {1.0, 4.0, 3.0};
  try {
    build_structure(c);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field().rfind("agents", 0), 0u) << e.field();
  }
}

TEST(BuildStructure, RejectsDuplicateAttribute) {
  StructureConfig c = peer_grading_config();
  c.attribute_names[1] = c.attribute_names[0];
  EXPECT_THROW(build_structure(c), ValidationError);
}

TEST(JointDistribution, WidthQualityCell) {
  const InformationStructure s = PeerGrading();
  const JointDistribution j = joint_distribution(s, {{0, s.method_index("m_w")}, {1, s.method_index("m_q")}});
  const std::array<int, 2> smile{1, 1};
  EXPECT_NEAR(j.probability(smile), 0.298, 1e-12);
}

TEST(JointDistribution, LengthIsSharedFairCoin) {
  const InformationStructure s = PeerGrading();
  const MethodId l = s.method_index("m_l");
  const JointDistribution j = joint_distribution(s, {{0, l}, {1, l}});
  EXPECT_NEAR(j.table()[0], 0.5, 1e-12);
  EXPECT_NEAR(j.table()[1], 0.0, 1e-12);
  EXPECT_NEAR(j.table()[2], 0.0, 1e-12);
  EXPECT_NEAR(j.table()[3], 0.5, 1e-12);
}

TEST(JointDistribution, MatchesBruteForceAndMarginals) {
  const InformationStructure s = PeerGrading();
  const std::vector<SignalVar> vars{{0, 0}, {0, 2}, {1, 1}, {2, 2}};
  const JointDistribution j = joint_distribution(s, vars);
  double sum = 0.0;
  std::vector<int> sig(vars.size());
  for (std::size_t idx = 0; idx < j.num_states(); ++idx) {
    j.decode(idx, sig);
    EXPECT_NEAR(j.table()[idx], BruteForce(s, vars, sig), 1e-14);
    sum += j.table()[idx];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  const JointDistribution m = j.marginal({3, 1});
  const JointDistribution direct = joint_distribution(s, {{2, 2}, {0, 2}});
  for (std::size_t k = 0; k < m.num_states(); ++k) EXPECT_NEAR(m.table()[k], direct.table()[k], 1e-14);
}

TEST(JointDistribution, ExchangeableAcrossAgents) {
  const InformationStructure s = PeerGrading();
  const JointDistribution a = joint_distribution(s, {{0, 1}, {3, 2}, {5, 0}});
  const JointDistribution b = joint_distribution(s, {{7, 1}, {1, 2}, {2, 0}});
  for (std::size_t k = 0; k < a.num_states(); ++k) EXPECT_NEAR(a.table()[k], b.table()[k], 1e-15);
}

TEST(JointDistribution, MethodsIndependentGivenAttribute) {
  const InformationStructure s = PeerGrading();
  for (std::size_t a = 0; a < s.attributes.size(); ++a) {
    // Condition by putting all prior mass on one attribute.
    InformationStructure t = s;
    for (std::size_t b = 0; b < t.attributes.size(); ++b) t.attributes.probs[b] = (a == b) ? 1.0 : 0.0;
    const JointDistribution j = joint_distribution(t, {{0, 1}, {0, 2}});
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        const std::array<int, 2> cell{x, y};
        EXPECT_NEAR(j.probability(cell), s.methods[1].channel[a][x] * s.methods[2].channel[a][y], 1e-15);
      }
  }
}

TEST(JointDistribution, StateCapIsEnforced) {
  const InformationStructure s = PeerGrading();
  std::vector<SignalVar> vars;
  for (int i = 0; i < 10; ++i)
    for (int m = 0; m < 3; ++m) vars.push_back({i, m});
  EXPECT_THROW(joint_distribution(s, vars), StateSpaceError);
  EXPECT_THROW(joint_distribution(s, {{0, 0}, {0, 1}, {0, 2}}, 4), StateSpaceError);
}

TEST(JointDistribution, ThroughChannelAppendsOutput) {
  const InformationStructure s = PeerGrading();
  const JointDistribution j = joint_distribution(s, {{0, 1}, {1, 1}});
  // Flip the first variable.
  const JointDistribution f = j.through_channel({0}, {{0.0, 1.0}, {1.0, 0.0}}, "flip");
  ASSERT_EQ(f.num_variables(), 2u);
  EXPECT_EQ(f.names()[1], "flip");
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const std::array<int, 2> orig{x, y};
      const std::array<int, 2> moved{y, 1 - x};
      EXPECT_NEAR(f.probability(moved), j.probability(orig), 1e-15);
    }
}

TEST(SampleWorld, DeterministicGivenSeed) {
  const InformationStructure s = PeerGrading();
  EXPECT_EQ(sample_world(s, 50, 7), sample_world(s, 50, 7));
  EXPECT_FALSE(sample_world(s, 50, 7) == sample_world(s, 50, 8));
}

TEST(SampleWorld, DeterministicChannelsFollowAttribute) {
  const InformationStructure s = PeerGrading();
  const SignalTable t = sample_world(s, 1, 3);
  // m_l is noiseless: every agent sees the length bit of the drawn attribute.
  const int length_bit = s.methods[0].channel[t.attribute[0]][1] == 1.0 ? 1 : 0;
  for (int i = 0; i < s.n_agents; ++i) EXPECT_EQ(t.at(0, i, 0), length_bit);
}

TEST(SampleWorld, EmpiricalCellConverges) {
  const InformationStructure s = PeerGrading();
  const int T = 100000;
  const SignalTable t = sample_world(s, T, 2026);
  int hits = 0;
  for (int k = 0; k < T; ++k) hits += (t.at(k, 0, 1) == 1 && t.at(k, 1, 2) == 1);
  const double p = 0.298;
  const double sigma = std::sqrt(p * (1 - p) / T);
  EXPECT_NEAR(static_cast<double>(hits) / T, p, 3 * sigma);
}

TEST(SampleWorld, FrequenciesMatchJointChiSquare) {
  const InformationStructure s = PeerGrading();
  const int T = 100000;
  const SignalTable t = sample_world(s, T, 11);
  const JointDistribution j = joint_distribution(s, {{0, 1}, {0, 2}, {1, 2}});
  std::vector<double> counts(j.num_states(), 0.0);
  for (int k = 0; k < T; ++k) {
    const std::array<int, 3> cell{t.at(k, 0, 1), t.at(k, 0, 2), t.at(k, 1, 2)};
    counts[j.index_of(cell)] += 1;
  }
  double chi2 = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double e = T * j.table()[c];
    chi2 += (counts[c] - e) * (counts[c] - e) / e;
  }
  // 7 degrees of freedom: mean 7, sd sqrt(14); 3 sd above the mean.
  EXPECT_LT(chi2, 7 + 3 * std::sqrt(14.0));
}

}  // namespace
}  // namespace hmip
