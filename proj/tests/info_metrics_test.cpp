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
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hmip/info_metrics.hpp"
#include "hmip/scoring.hpp"

namespace hmip {
namespace {

InformationStructure PeerGrading() { return build_structure(peer_grading_config()); }

// Shannon MI straight from a 2-D table.
double ShannonOracle(const std::vector<std::vector<double>>& u) {
  std::vector<double> px(u.size(), 0.0), py(u[0].size(), 0.0);
  for (std::size_t x = 0; x < u.size(); ++x)
    for (std::size_t y = 0; y < u[0].size(); ++y) {
      px[x] += u[x][y];
      py[y] += u[x][y];
    }
  double mi = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x)
    for (std::size_t y = 0; y < u[0].size(); ++y)
      if (u[x][y] > 0) mi += u[x][y] * std::log(u[x][y] / (px[x] * py[y]));
  return mi;
}

double TvdOracle(const std::vector<std::vector<double>>& u) {
  std::vector<double> px(u.size(), 0.0), py(u[0].size(), 0.0);
  for (std::size_t x = 0; x < u.size(); ++x)
    for (std::size_t y = 0; y < u[0].size(); ++y) {
      px[x] += u[x][y];
      py[y] += u[x][y];
    }
  double d = 0.0;
  for (std::size_t x = 0; x < u.size(); ++x)
    for (std::size_t y = 0; y < u[0].size(); ++y) d += std::abs(u[x][y] - px[x] * py[y]);
  return d;
}

JointDistribution FromMatrix(const std::vector<std::vector<double>>& u) {
  std::vector<double> t;
  for (const auto& row : u) t.insert(t.end(), row.begin(), row.end());
  return JointDistribution({"x", "y"}, {u.size(), u[0].size()}, t);
}

std::vector<std::vector<double>> RandomMatrix(std::mt19937_64& rng, int nx, int ny) {
  std::gamma_distribution<double> g(0.7, 1.0);
  std::vector<std::vector<double>> u(nx, std::vector<double>(ny));
  double z = 0.0;
  for (auto& row : u)
    for (double& v : row) z += (v = g(rng));
  for (auto& row : u)
    for (double& v : row) v /= z;
  return u;
}

TEST(FDivergence, SelfDivergenceIsZero) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(f_divergence(p, p, FKind::kKl), 0.0);
  EXPECT_DOUBLE_EQ(f_divergence(p, p, FKind::kTvd), 0.0);
}

TEST(FDivergence, TvdIsUnhalved) {
  const std::vector<double> p{1.0, 0.0}, q{0.0, 1.0};
  EXPECT_DOUBLE_EQ(f_divergence(p, q, FKind::kTvd), 2.0);
  EXPECT_TRUE(std::isinf(f_divergence(p, q, FKind::kKl)));
}

TEST(FDivergence, KlArgumentOrder) {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  // Σ p (−ln(q/p)).
  const double expected = -0.5 * std::log(0.25 / 0.5) - 0.5 * std::log(0.75 / 0.5);
  EXPECT_NEAR(f_divergence(p, q, FKind::kKl), expected, 1e-15);
  EXPECT_NEAR(expected, 0.1438410362, 1e-9);
}

TEST(FDivergence, AlphabetMismatchThrows) {
  const std::vector<double> p{0.5, 0.5}, q{1.0};
  EXPECT_THROW(f_divergence(p, q, FKind::kKl), std::invalid_argument);
}

TEST(MutualInformation, PerfectlyCorrelatedBitIsLn2) {
  EXPECT_NEAR(mutual_information(FromMatrix({{0.5, 0.0}, {0.0, 0.5}}), FKind::kKl), std::log(2.0), 1e-15);
}

TEST(MutualInformation, IndependentIsZero) {
  const auto u = std::vector<std::vector<double>>{{0.06, 0.14}, {0.24, 0.56}};
  EXPECT_NEAR(mutual_information(FromMatrix(u), FKind::kKl), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information(FromMatrix(u), FKind::kTvd), 0.0, 1e-15);
}

TEST(MutualInformation, PeerGradingWidthPair) {
  const InformationStructure s = PeerGrading();
  const JointDistribution j = joint_distribution(s, {{0, 1}, {1, 1}});
  EXPECT_NEAR(mutual_information(j, FKind::kKl), 0.2218, 1e-4);
  std::vector<std::vector<double>> u{{j.table()[0], j.table()[1]}, {j.table()[2], j.table()[3]}};
  EXPECT_NEAR(mutual_information(j, FKind::kKl), ShannonOracle(u), 1e-14);
  EXPECT_NEAR(mutual_information(j, FKind::kTvd), TvdOracle(u), 1e-14);
  EXPECT_NEAR(mutual_information(j, FKind::kTvd), 0.64, 1e-12);
}

TEST(MutualInformation, MatchesOracleOnRandomTables) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto u = RandomMatrix(rng, 2 + k % 3, 2 + k % 4);
    EXPECT_NEAR(mutual_information(FromMatrix(u), FKind::kKl), ShannonOracle(u), 1e-12);
    EXPECT_NEAR(mutual_information(FromMatrix(u), FKind::kTvd), TvdOracle(u), 1e-12);
  }
}

TEST(ConditionalMI, ChainRuleOnPeerGrading) {
  const InformationStructure s = PeerGrading();
  // (own w, own q, peer q, peer w)
  const JointDistribution j = joint_distribution(s, {{0, 1}, {0, 2}, {1, 2}, {1, 1}});
  const double cond = grouped_mutual_information(j, {0, 1}, {2}, {3}, FKind::kKl);
  const double both = grouped_mutual_information(j, {0, 1}, {2, 3}, {}, FKind::kKl);
  const double w_only = grouped_mutual_information(j, {0, 1}, {3}, {}, FKind::kKl);
  EXPECT_NEAR(both, 0.2374, 1e-4);
  EXPECT_NEAR(w_only, 0.2259, 1e-4);
  EXPECT_NEAR(cond, both - w_only, 1e-12);
  EXPECT_NEAR(cond, 0.0115, 1e-4);
  EXPECT_NEAR(grouped_mutual_information(j, {0}, {2}, {3}, FKind::kKl), 0.0041, 1e-4);
}

TEST(ConditionalMI, IndependentConditionerIsIgnored) {
  std::mt19937_64 rng(9);
  const auto u = RandomMatrix(rng, 3, 2);
  const std::vector<double> z{0.3, 0.7};
  std::vector<double> t;
  for (const auto& row : u)
    for (double v : row)
      for (double pz : z) t.push_back(v * pz);
  const JointDistribution j({"x", "y", "z"}, {3, 2, 2}, t);
  for (FKind k : {FKind::kKl, FKind::kTvd})
    EXPECT_NEAR(conditional_mutual_information(j, k), mutual_information(FromMatrix(u), k), 1e-12);
}

TEST(ConditionalMI, ZeroProbabilitySliceContributesNothing) {
  const JointDistribution j({"x", "y", "z"}, {2, 2, 2}, {0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0});
  EXPECT_NEAR(conditional_mutual_information(j, FKind::kKl), std::log(2.0), 1e-15);
}

TEST(EmpiricalJoint, RejectsBadInput) {
  const std::vector<int> a{0, 1, 1}, b{1, 0};
  EXPECT_THROW(empirical_joint({}), std::invalid_argument);
  EXPECT_THROW(empirical_joint({a, b}), std::invalid_argument);
  const std::vector<int> empty;
  EXPECT_THROW(empirical_joint({empty, empty}), std::invalid_argument);
}

TEST(EmpiricalJoint, IdenticalFairBitsApproachLn2) {
  std::mt19937_64 rng(1);
  std::vector<int> x(100000);
  for (int& v : x) v = static_cast<int>(rng() & 1);
  EXPECT_NEAR(mutual_information(empirical_joint({x, x}), FKind::kKl), std::log(2.0), 1e-3);
}

TEST(EmpiricalJoint, IndependentUniformTvdIsSmall) {
  std::mt19937_64 rng(2);
  std::vector<int> x(10000), y(10000);
  for (int& v : x) v = static_cast<int>(rng() % 2);
  for (int& v : y) v = static_cast<int>(rng() % 2);
  EXPECT_LT(mutual_information(empirical_joint({x, y}), FKind::kTvd), 0.05);
}

TEST(EmpiricalJoint, PeerGradingWidthEstimate) {
  const InformationStructure s = PeerGrading();
  const SignalTable t = sample_world(s, 100000, 99);
  std::vector<int> x(t.tasks), y(t.tasks);
  for (int k = 0; k < t.tasks; ++k) {
    x[k] = t.at(k, 0, 1);
    y[k] = t.at(k, 1, 1);
  }
  EXPECT_NEAR(mutual_information(empirical_joint({x, y}), FKind::kKl), 0.2218, 0.01);
}

TEST(Scoring, LogScore) {
  EXPECT_DOUBLE_EQ(log_score(1, std::vector<double>{0.0, 1.0}), 0.0);
  EXPECT_NEAR(log_score(0, std::vector<double>{0.9, 0.1}), -0.1053605157, 1e-9);
  EXPECT_THROW(log_score(1, std::vector<double>{1.0, 0.0}), ScoringError);
}

TEST(Scoring, ExpectedScore) {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  EXPECT_NEAR(expected_score(p, q, ScoringRule::kLog), 0.5 * std::log(0.25) + 0.5 * std::log(0.75), 1e-15);
  EXPECT_NEAR(expected_score(p, q, ScoringRule::kLog), -0.8369, 1e-4);
  EXPECT_NEAR(expected_score(q, q, ScoringRule::kLog), -entropy(q), 1e-15);
}

TEST(Scoring, TruthfulForecastMaximizes) {
  const std::vector<double> p{0.2, 0.5, 0.3};
  const double best = expected_score(p, p, ScoringRule::kLog);
  for (int a = 1; a < 20; ++a)
    for (int b = 1; a + b < 20; ++b) {
      const std::vector<double> q{a / 20.0, b / 20.0, 1.0 - (a + b) / 20.0};
      EXPECT_LE(expected_score(p, q, ScoringRule::kLog), best + 1e-15);
    }
}

TEST(FKindNames, RoundTrip) {
  EXPECT_EQ(fkind_from_string(to_string(FKind::kKl)), FKind::kKl);
  EXPECT_EQ(fkind_from_string(to_string(FKind::kTvd)), FKind::kTvd);
  EXPECT_THROW(fkind_from_string("hellinger"), ValidationError);
}

}  // namespace
}  // namespace hmip
