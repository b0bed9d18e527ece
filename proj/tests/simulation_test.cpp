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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "hmip/multi_hmim.hpp"
#include "hmip/theorem_scans.hpp"

namespace hmip {
namespace {

constexpr MethodId kL = 0, kW = 1, kQ = 2;

InformationStructure PeerGrading() { return build_structure(peer_grading_config()); }
InformationStructure SmallBinary() { return build_structure(small_binary_config()); }

std::vector<Strategy> Truthful(const InformationStructure& s, const std::vector<MethodId>& methods) {
  std::vector<Strategy> out;
  for (MethodId m : methods) out.push_back(truthful_strategy(s, m));
  return out;
}

MechanismConfig Multi(const Coefficients& alpha) {
  MechanismConfig m;
  m.kind = MechanismKind::kMulti;
  m.alpha = alpha;
  return m;
}

double Mean(const std::vector<double>& v) {
  double t = 0.0;
  for (double x : v) t += x;
  return t / static_cast<double>(v.size());
}

double StdErr(const std::vector<double>& v) {
  const double mu = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

TEST(Simulation, SameSeedSameTable) {
  const auto s = PeerGrading();
  const auto setup = multi_potent_setup(s, 50);
  const SimulationConfig sim{50, 5, 42};
  const auto a = simulate_replicates(s, Multi(setup.alpha), Truthful(s, setup.profile), sim);
  const auto b = simulate_replicates(s, Multi(setup.alpha), Truthful(s, setup.profile), sim);
  EXPECT_EQ(a.payment, b.payment);
  EXPECT_EQ(a.cost, b.cost);
  const auto c = simulate_replicates(s, Multi(setup.alpha), Truthful(s, setup.profile), {50, 5, 43});
  EXPECT_NE(a.payment, c.payment);
}

TEST(Simulation, NoEffortEarnsAndCostsNothing) {
  const auto s = PeerGrading();
  std::vector<MethodId> methods(s.n_agents, kL);
  methods[3] = kNoEffort;
  const auto est = simulate(s, Multi(Coefficients{{1.0, 1.0, 1.0}}), Truthful(s, methods), {40, 4, 7});
  EXPECT_EQ(est[3].payment, 0.0);
  EXPECT_EQ(est[3].cost, 0.0);
  EXPECT_DOUBLE_EQ(est[0].cost, s.costs.cost(0, kL));
}

TEST(Simulation, TruthfulLengthLevelPaysTwiceAgreement) {
  // Length is a fair coin seen without noise: Σσ P(σ,σ) − P(σ)² = 1 − 1/2.
  const auto s = PeerGrading();
  EXPECT_NEAR(multi_level_terms(s, 200).terms[kL][kL], 1.0, 1e-12);
  EXPECT_NEAR(multi_level_terms(s, 7).terms[kQ][kL], 1.0, 1e-12);
}

TEST(Simulation, MultiPaymentMatchesExactLevelTerms) {
  const auto s = PeerGrading();
  const int T = 200;
  const AoiTable terms = multi_level_terms(s, T);
  const auto setup = multi_potent_setup(s, T);
  ASSERT_TRUE(setup.potent);
  ASSERT_EQ(setup.profile[0], kQ);
  const auto table = simulate_replicates(s, Multi(setup.alpha), Truthful(s, setup.profile), {T, 300, 11});
  for (int agent : {0, 1}) {
    std::vector<double> pay;
    for (const auto& row : table.payment) pay.push_back(row[agent]);
    EXPECT_NEAR(Mean(pay), terms.aoi(setup.alpha, kQ), 3.5 * StdErr(pay)) << "agent " << agent;
  }
}

TEST(Simulation, MultiPotentSetupMakesTopMethodPay) {
  const auto s = PeerGrading();
  const auto setup = multi_potent_setup(s, 200);
  const AoiTable terms = multi_level_terms(s, 200);
  ASSERT_TRUE(setup.potent);
  EXPECT_GE(std::count(setup.profile.begin(), setup.profile.end(), kQ), 2);
  for (int i = 0; i < s.n_agents; ++i) {
    const MethodId p = setup.profile[i];
    const double u = p == kNoEffort ? 0.0 : terms.aoi(setup.alpha, p) - s.costs.cost(i, p);
    EXPECT_GE(u, -1e-9);
    for (MethodId m : {kL, kW, kQ})
      if (m != p) {
        EXPECT_GT(u, terms.aoi(setup.alpha, m) - s.costs.cost(i, m) + 1e-3);
      }
  }
}

TEST(Simulation, IdenticalDeviationHasZeroDelta) {
  const auto s = PeerGrading();
  const auto setup = multi_potent_setup(s, 60);
  const auto base = Truthful(s, setup.profile);
  const auto scan =
      deviation_scan(s, Multi(setup.alpha), base, 0, {{"same", truthful_strategy(s, setup.profile[0])}}, {60, 6, 3});
  ASSERT_EQ(scan.rows.size(), 1u);
  EXPECT_EQ(scan.rows[0].delta, 0.0);
  EXPECT_FALSE(scan.rows[0].flagged);
  EXPECT_FALSE(scan.violation);
}

TEST(Simulation, FlatPayFlagsShirking) {
  const auto s = PeerGrading();
  MechanismConfig flat;
  flat.kind = MechanismKind::kFlat;
  flat.flat_payment = 3.0;
  const std::vector<MethodId> methods(s.n_agents, kW);
  const auto scan = deviation_scan(s, flat, Truthful(s, methods), 0,
                                   {{"effort none", truthful_strategy(s, kNoEffort)}}, {30, 4, 9});
  EXPECT_TRUE(scan.violation);
  EXPECT_NEAR(scan.rows[0].delta, s.costs.cost(0, kW), 1e-12);
}

Forecast Perturb(Forecast f, double delta) {
  std::size_t top = 0;
  for (std::size_t k = 1; k < f.size(); ++k)
    if (f[k] > f[top]) top = k;
  const double d = std::min(delta, f[top] - 0.01);
  if (d > 0.0) {
    f[top] -= d;
    f[(top + 1) % f.size()] += d;
  }
  return f;
}

TEST(Simulation, SingleForecastPerturbationLossMatchesExact) {
  const auto s = SmallBinary();
  SingleConfig config{Coefficients{{1.0, 1.0, 1.0}}};
  const std::vector<MethodId> methods = {2, 2, 1, 0};
  const std::vector<MethodId> peers = {2, 1, 0};

  SingleStrategy perturbed = truthful_single_strategy(s, 2);
  for (auto& per_method : perturbed.forecasts)
    for (auto& f : per_method) f = Perturb(f, 0.1);
  const double exact_delta = expected_single_payment(s, config, perturbed, peers) -
                             expected_single_payment(s, config, truthful_single_strategy(s, 2), peers);
  ASSERT_LT(exact_delta, 0.0);

  MechanismConfig mech;
  mech.kind = MechanismKind::kSingle;
  mech.alpha = config.alpha;
  Strategy dev = truthful_strategy(s, 2);
  dev.forecast = ForecastPolicy::kPerturbed;
  dev.perturbation = 0.1;
  const auto scan = deviation_scan(s, mech, Truthful(s, methods), 0, {{"perturb", dev}}, {100, 200, 5});
  EXPECT_NEAR(scan.rows[0].delta, exact_delta, 3.5 * scan.rows[0].stderr_delta);
  EXPECT_LT(scan.rows[0].delta, 0.0);
}

TEST(Simulation, LengthLieLeavesSingleMechanismUndefined) {
  const auto s = PeerGrading();
  MechanismConfig mech;
  mech.kind = MechanismKind::kSingle;
  mech.alpha = Coefficients{{1.0, 1.0, 1.0}};
  std::vector<MethodId> methods(s.n_agents, kL);
  Strategy lie = truthful_strategy(s, kL);
  lie.report.assign(s.num_methods(), {});
  lie.report[kL] = deterministic_channel(s, kL, [&](const std::vector<Signal>& got) {
    return std::vector<Signal>{static_cast<Signal>(1 - got[0]), kEmpty, kEmpty};
  });
  const auto scan = deviation_scan(s, mech, Truthful(s, methods), 0, {{"flip length", lie}}, {20, 3, 1});
  EXPECT_TRUE(scan.rows.empty());
  ASSERT_EQ(scan.notes.size(), 1u);
  EXPECT_NE(scan.notes[0].find("undefined"), std::string::npos);
}

TEST(Simulation, ReportEncodingRoundTrips) {
  const auto s = PeerGrading();
  const std::size_t n = report_tuple_count(s);
  std::size_t expected = 1;
  for (const auto& m : s.methods) expected *= m.alphabet_size() + 1;
  ASSERT_EQ(n, expected);
  for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(encode_report(s, decode_report(s, k)), k);
}

TEST(Simulation, StrategyValidation) {
  const auto s = PeerGrading();
  Strategy st = truthful_strategy(s, kW);
  EXPECT_NO_THROW(validate_strategy(s, st));
  st.effort[0] = 0.5;
  EXPECT_THROW(validate_strategy(s, st), ValidationError);
  Strategy mix = mixed_effort_strategy(s, kQ, kNoEffort, 0.25);
  EXPECT_NO_THROW(validate_strategy(s, mix));
  EXPECT_DOUBLE_EQ(mix.effort[kQ], 0.25);
  EXPECT_DOUBLE_EQ(mix.effort.back(), 0.75);
}

TEST(Simulation, StandardLibraryIsValidAndNamedUniquely) {
  const auto s = PeerGrading();
  LibraryOptions options;
  options.forecast_perturbations = {0.1};
  const auto lib = standard_library(s, kQ, options);
  std::set<std::string> names;
  for (const auto& d : lib) {
    EXPECT_NO_THROW(validate_strategy(s, d.strategy)) << d.name;
    names.insert(d.name);
  }
  EXPECT_EQ(names.size(), lib.size());
  EXPECT_TRUE(names.count("effort none"));
  // Three binary coordinates: 4^3 − 1 combined signal maps.
  EXPECT_EQ(std::count_if(lib.begin(), lib.end(), [](const Deviation& d) { return d.name.rfind("report", 0) == 0; }),
            63);
}

TEST(Simulation, CsvHasOneLinePerRow) {
  ScanResult scan;
  scan.name = "x";
  scan.rows.push_back({"a", -1.0, 0.1, 0.0, false});
  scan.rows.push_back({"b", 2.0, 0.1, 3.0, true});
  std::ostringstream out;
  scan.write_csv(out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find("x,0,\"b\",2,"), std::string::npos);
}

TEST(NamedScans, UnknownNameIsRejected) {
  EXPECT_THROW(run_named_scan("nope", SmallBinary()), ValidationError);
  EXPECT_EQ(named_scan_names().size(), 5u);
}

TEST(NamedScans, PotentHmipIsExactAndClean) {
  const auto rep = run_named_scan("potent_hmip", PeerGrading());
  EXPECT_TRUE(rep.passed);
  for (const auto& scan : rep.scans)
    for (const auto& row : scan.rows) EXPECT_LE(row.delta, 0.0) << scan.name << " " << row.name;
}

TEST(NamedScans, SingleTableMeasuresFromUninformedFloor) {
  const auto s = SmallBinary();
  const AoiTable t = single_aoi_table(s);
  const SingleConfig unit{Coefficients{{1.0, 1.0, 1.0}}};
  for (MethodId p : {0, 1, 2}) {
    double sum = 0.0;
    for (double v : t.terms[p]) {
      EXPECT_GE(v, -1e-12);
      sum += v;
    }
    EXPECT_NEAR(sum, single_aoi(s, unit, p) - single_aoi(s, unit, kNoEffort), 1e-12);
  }
  const auto setup = single_potent_setup(s);
  EXPECT_TRUE(setup.potent);
  for (double a : setup.alpha.alpha) EXPECT_GE(a, 1e-6);
}

TEST(NamedScans, MixedEffortOnSmallWorld) {
  NamedScanOptions o;
  o.tasks = 60;
  o.replicates = 40;
  const auto rep = run_named_scan("mixed_effort_dominated", SmallBinary(), o);
  EXPECT_TRUE(rep.passed);
  EXPECT_FALSE(rep.scans.empty());
}

TEST(NamedScans, LearningPotentProfile) {
  const auto s = PeerGrading();
  const auto setup = learning_potent_setup(s, default_learning_rule());
  EXPECT_TRUE(setup.potent);
  EXPECT_EQ(setup.profile[0], kQ);
  EXPECT_EQ(setup.profile[1], kQ);
  for (int i = 2; i < s.n_agents; ++i) EXPECT_EQ(setup.profile[i], kW);
}

}  // namespace
}  // namespace hmip
