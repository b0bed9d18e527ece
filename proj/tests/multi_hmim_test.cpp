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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hmip/multi_hmim.hpp"

namespace hmip {
namespace {

InformationStructure PeerGrading() { return build_structure(peer_grading_config()); }

// E[Corr(v1; v2)] by enumerating every (t1, t2) draw.
double ExactCorrExpectation(const AnswerVector& v1, const AnswerVector& v2) {
  std::vector<int> ne1, ne2, b;
  for (std::size_t t = 0; t < v1.size(); ++t) {
    if (v1[t] != kEmpty) ne1.push_back(static_cast<int>(t));
    if (v2[t] != kEmpty) ne2.push_back(static_cast<int>(t));
    if (v1[t] != kEmpty && v2[t] != kEmpty) b.push_back(static_cast<int>(t));
  }
  if (ne1.size() < 2 || ne2.size() < 2 || b.empty()) return 0.0;
  double penalty = 0.0;
  for (int t1 : ne1) {
    double hits = 0.0, n = 0.0;
    for (int t2 : ne2) {
      if (t2 == t1) continue;
      hits += v1[t1] == v2[t2];
      n += 1.0;
    }
    penalty += hits / n;
  }
  penalty /= static_cast<double>(ne1.size());
  double match = 0.0;
  for (int t : b) match += v1[t] == v2[t];
  return match - static_cast<double>(b.size()) * penalty;
}

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

template <typename F>
Moments MonteCarlo(int n, F draw) {
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = draw(k);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sq / n - mean * mean) / n)};
}

TEST(Corr, WorkedUnconditionalExample) {
  const AnswerVector v1{1, kEmpty, 1, 1, 1}, v2{1, 1, 1, 1, kEmpty};
  const CorrAudit a = corr(v1, v2, 3);
  EXPECT_TRUE(a.success);
  EXPECT_EQ(a.b, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(a.per_task, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(a.score, 0.0);
}

TEST(Corr, AllEmptyFails) {
  const AnswerVector v1(5, kEmpty), v2{1, 0, 1, 1, 0};
  const CorrAudit a = corr(v1, v2, 1);
  EXPECT_FALSE(a.success);
  EXPECT_EQ(a.score, 0.0);
}

TEST(Corr, DisjointSupportFails) {
  const AnswerVector v1{1, 0, kEmpty, kEmpty}, v2{kEmpty, kEmpty, 1, 1};
  EXPECT_FALSE(corr(v1, v2, 1).success);
}

TEST(Corr, LengthMismatchThrows) {
  EXPECT_THROW(corr(AnswerVector{1, 0}, AnswerVector{1}, 1), std::invalid_argument);
  EXPECT_THROW(corr_conditional(AnswerVector{1, 0}, AnswerVector{1, 0}, {AnswerVector{1}}, 1), std::invalid_argument);
}

TEST(Corr, DrawsRespectSupportAndDistinctness) {
  const AnswerVector v1{1, kEmpty, 0, 1, 0, 1}, v2{0, 1, kEmpty, 1, 1, 0};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CorrAudit a = corr(v1, v2, seed);
    for (std::size_t k = 0; k < a.b.size(); ++k) {
      EXPECT_NE(v1[a.t1[k]], kEmpty);
      EXPECT_NE(v2[a.t2[k]], kEmpty);
      EXPECT_NE(a.t1[k], a.t2[k]);
    }
  }
}

TEST(Corr, TwoTaskExpectationByEnumeration) {
  const AnswerVector v1{1, 1}, v2{1, 0};
  const double exact = ExactCorrExpectation(v1, v2);
  EXPECT_DOUBLE_EQ(exact, 0.0);  // match 1 + 0, penalty 2 × 1/2
  const Moments mc = MonteCarlo(20000, [&](int k) { return corr(v1, v2, static_cast<std::uint64_t>(k)).score; });
  EXPECT_NEAR(mc.mean, exact, 3 * mc.se + 1e-12);
}

TEST(Corr, RandomVectorsMatchEnumeration) {
  Rng rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    AnswerVector v1(7), v2(7);
    for (auto* v : {&v1, &v2})
      for (Signal& x : *v) {
        const std::size_t r = uniform_index(rng, 4);
        x = r == 3 ? kEmpty : static_cast<Signal>(r % 2);
      }
    const double exact = ExactCorrExpectation(v1, v2);
    Rng draws(rep);
    const Moments mc = MonteCarlo(20000, [&](int) { return corr(v1, v2, draws).score; });
    EXPECT_NEAR(mc.mean, exact, 3.5 * mc.se + 1e-12) << "rep " << rep;
  }
}

TEST(CorrConditional, WorkedTraceWithFrozenSeed) {
  const AnswerVector v1{1, 1, 0, 1, 1}, v2{1, 1, 0, 1, 0}, v{1, 1, 0, 1, 0};
  // Seed 16 draws t_C* = task 2 (1-based).
  const CorrAudit a = corr_conditional(v1, v2, {v}, 16);
  ASSERT_TRUE(a.conditioned);
  EXPECT_EQ(a.c, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(a.t_c_star, 1);
  EXPECT_EQ(a.d, (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(a.b, (std::vector<int>{0, 1, 3}));
  EXPECT_TRUE(a.success);
  EXPECT_EQ(a.score, 0.0);
}

TEST(CorrConditional, EmptyConditionerFallsBack) {
  const AnswerVector v1{1, 0, 1, 1}, v2{1, 1, 0, 1}, none(4, kEmpty);
  const CorrAudit a = corr_conditional(v1, v2, {none}, 5);
  const CorrAudit b = corr(v1, v2, 5);
  EXPECT_FALSE(a.conditioned);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.t1, b.t1);
}

TEST(CorrConditional, SingletonSliceFails) {
  const AnswerVector v1{1, 0, 1}, v2{1, 0, 1}, v{0, 1, 2};
  const CorrAudit a = corr_conditional(v1, v2, {v}, 4);
  EXPECT_TRUE(a.conditioned);
  EXPECT_EQ(a.d.size(), 1u);
  EXPECT_FALSE(a.success);
}

TEST(Reports, ValidationCatchesMissingClaimedSignal) {
  const InformationStructure s = PeerGrading();
  MultiReportSet r(s.n_agents, 3, 3);
  r.set_assigned(0, 0, true);
  r.set_claimed(0, 0, 2);
  EXPECT_THROW(r.validate(s), ValidationError);
  r.set_signal(0, 0, 2, 1);
  EXPECT_NO_THROW(r.validate(s));
  r.set_signal(0, 0, 1, 5);
  EXPECT_THROW(r.validate(s), ValidationError);
}

TEST(Batches, ExactSizeAndDeterministic) {
  const auto a = assign_batches(5, 20, 6, 9);
  EXPECT_EQ(a, assign_batches(5, 20, 6, 9));
  for (const auto& row : a) EXPECT_EQ(std::count(row.begin(), row.end(), true), 6);
  for (const auto& row : assign_batches(2, 5, 0, 1)) EXPECT_EQ(std::count(row.begin(), row.end(), true), 5);
}

TEST(MultiPayment, ConstantReportsPayZero) {
  const InformationStructure s = PeerGrading();
  const SignalTable w = sample_world(s, 30, 1);
  MultiReportSet r = truthful_reports(s, w, std::vector<MethodId>(s.n_agents, 2));
  for (int i = 0; i < s.n_agents; ++i)
    for (int t = 0; t < 30; ++t)
      for (MethodId m = 0; m < 3; ++m) r.set_signal(i, t, m, 1);
  const MultiPaymentResult p = multi_hmim_payment(s, r, {{1.0, 1.0, 1.0}}, 4);
  for (const auto& a : p.agents) EXPECT_EQ(a.total, 0.0);
}

TEST(MultiPayment, LoneAgentEarnsNothing) {
  const InformationStructure s = build_structure(peer_grading_config(1, 0));
  const SignalTable w = sample_world(s, 20, 2);
  const MultiPaymentResult p = multi_hmim_payment(s, truthful_reports(s, w, {2}), {{1.0, 1.0, 1.0}}, 3);
  EXPECT_EQ(p.agents[0].total, 0.0);
  for (const auto& l : p.agents[0].levels) EXPECT_FALSE(l.corr.success);
}

TEST(MultiPayment, FewerThanTwoTasksRejected) {
  const InformationStructure s = PeerGrading();
  const SignalTable w = sample_world(s, 1, 2);
  EXPECT_THROW(multi_hmim_payment(s, truthful_reports(s, w, std::vector<MethodId>(10, 2)), {{1, 1, 1}}, 3),
               ValidationError);
}

TEST(MultiPayment, PeersQualifyByClaimedLevel) {
  const InformationStructure s = PeerGrading();
  const SignalTable w = sample_world(s, 50, 5);
  std::vector<MethodId> performed(10, 1);
  performed[0] = performed[1] = 2;
  const MultiPaymentResult p = multi_hmim_payment(s, truthful_reports(s, w, performed), {{1, 1, 1}}, 6);
  // Level m_q: agent 0's only eligible peer is agent 1.
  for (int j : p.agents[0].levels[2].peer) EXPECT_EQ(j, 1);
  for (int j : p.agents[5].levels[2].peer) EXPECT_TRUE(j == 0 || j == 1);
  for (int j : p.agents[5].levels[1].peer) EXPECT_NE(j, 5);
}

TEST(MultiPayment, PaymentIsTwiceAlphaTimesCorr) {
  const InformationStructure s = PeerGrading();
  const SignalTable w = sample_world(s, 60, 8);
  const Coefficients a{{0.5, 3.0, 40.0}};
  const MultiPaymentResult p = multi_hmim_payment(s, truthful_reports(s, w, std::vector<MethodId>(10, 2)), a, 9);
  for (const auto& ag : p.agents) {
    double total = 0.0;
    for (const auto& l : ag.levels) {
      EXPECT_DOUBLE_EQ(l.payment, 2.0 * a.alpha[l.method] * l.corr.score);
      total += l.payment;
    }
    EXPECT_DOUBLE_EQ(ag.total, total);
  }
}

TEST(MultiPayment, DeterministicGivenSeed) {
  const InformationStructure s = PeerGrading();
  const SignalTable w = sample_world(s, 40, 8);
  const MultiReportSet r = truthful_reports(s, w, std::vector<MethodId>(10, 2));
  const auto a = multi_hmim_payment(s, r, {{1, 1, 1}}, 12);
  const auto b = multi_hmim_payment(s, r, {{1, 1, 1}}, 12);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.agents[i].total, b.agents[i].total);
}

TEST(MultiPayment, QualityLevelIsUnbiasedForHalfTvd) {
  const InformationStructure s = PeerGrading();
  // Peer's quality given peer's width and length.
  const JointDistribution j = joint_distribution(s, {{0, 2}, {1, 2}, {1, 1}, {1, 0}});
  const double target = 0.5 * grouped_mutual_information(j, {0}, {1}, {2, 3}, FKind::kTvd);
  std::vector<MethodId> performed(10, 1);
  performed[0] = performed[1] = 2;
  const Moments mc = MonteCarlo(300, [&](int k) {
    const SignalTable w = sample_world(s, 400, mix_seed(100, k));
    const auto p = multi_hmim_payment(s, truthful_reports(s, w, performed), {{1, 1, 1}}, mix_seed(200, k));
    return p.agents[0].levels[2].corr.mean_per_reward_task();
  });
  EXPECT_NEAR(mc.mean, target, 3 * mc.se);
}

TEST(MultiPayment, MisreportsStayBelowHalfTvdBound) {
  const InformationStructure s = PeerGrading();
  // Own width through each of the four binary maps, peer truthful.
  const std::vector<std::vector<int>> maps{{0, 1}, {1, 0}, {0, 0}, {1, 1}};
  const JointDistribution j = joint_distribution(s, {{0, 1}, {1, 1}, {1, 0}});
  for (const auto& g : maps) {
    std::vector<std::vector<double>> ch(2, std::vector<double>(2, 0.0));
    ch[0][g[0]] = ch[1][g[1]] = 1.0;
    // (peer w, peer l, reported)
    const JointDistribution rep = j.through_channel({0}, ch, "report");
    const double bound = 0.5 * grouped_mutual_information(rep, {2}, {0}, {1}, FKind::kTvd);
    const Moments mc = MonteCarlo(200, [&](int k) {
      const SignalTable w = sample_world(s, 300, mix_seed(300, k));
      MultiReportSet r = truthful_reports(s, w, std::vector<MethodId>(10, 1));
      for (int t = 0; t < w.tasks; ++t) r.set_signal(0, t, 1, g[w.at(t, 0, 1)]);
      return multi_hmim_payment(s, r, {{1, 1, 1}}, mix_seed(400, k)).agents[0].levels[1].corr.mean_per_reward_task();
    });
    EXPECT_LE(mc.mean, bound + 3 * mc.se) << g[0] << g[1];
  }
}

TEST(PositiveCorrelation, PeerGradingInequalitiesHold) {
  const CorrelationReport r = check_positive_correlation(PeerGrading());
  EXPECT_GT(r.cells_checked, 0);
  EXPECT_TRUE(r.positive_correlation.empty());
}

TEST(PositiveCorrelation, PeerGradingConditionalIndependenceFails) {
  // Own quality sharpens the guess of a peer's width beyond own width.
  const InformationStructure s = PeerGrading();
  const CorrelationReport r = check_positive_correlation(s);
  ASSERT_FALSE(r.conditional_independence.empty());
  bool width_given_quality = false;
  for (const auto& v : r.conditional_independence)
    width_given_quality |= v.method == s.method_index("m_w") && v.performed == s.method_index("m_q");
  EXPECT_TRUE(width_given_quality);
}

TEST(PositiveCorrelation, DisjointSupportsViolate) {
  // Attribute A emits {0, 1}, B emits {0, 2}: seeing 2 rules out a peer 1,
  // and seeing 1 leaves a peer 0 exactly at its prior.
  StructureConfig c;
  c.attribute_names = {"A", "B"};
  c.attribute_probs = {0.5, 0.5};
  c.methods = {{"m", {"0", "1", "2"}, {{0.5, 0.5, 0.0}, {0.5, 0.0, 0.5}}}};
  c.agent_classes = {{"x", 2, {1.0}}};
  const CorrelationReport r = check_positive_correlation(build_structure(c));
  EXPECT_FALSE(r.positive_correlation.empty());
}

TEST(PositiveCorrelation, IndependentChannelsViolate) {
  StructureConfig c;
  c.attribute_names = {"A", "B"};
  c.attribute_probs = {0.5, 0.5};
  c.methods = {{"m", {"0", "1"}, {{0.3, 0.7}, {0.3, 0.7}}}};
  c.agent_classes = {{"x", 2, {1.0}}};
  const CorrelationReport r = check_positive_correlation(build_structure(c));
  EXPECT_EQ(r.positive_correlation.size(), 4u);
}

}  // namespace
}  // namespace hmip
