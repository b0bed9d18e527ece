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

#ifndef HMIP_SIMULATION_HPP_
#define HMIP_SIMULATION_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hmip/learning_hmim.hpp"
#include "hmip/multi_hmim.hpp"
#include "hmip/single_hmim.hpp"

namespace hmip {

enum class MechanismKind { kMulti, kLearning, kSingle, kFlat };

std::string to_string(MechanismKind kind);
MechanismKind mechanism_from_string(const std::string& name);

struct MechanismConfig {
  MechanismKind kind = MechanismKind::kMulti;
  Coefficients alpha;  // Multi and Single
  // Learning.
  FKind fkind = FKind::kKl;
  double delta0 = 0.0;  // <= 0: suggest_delta0 on every replicate
  RuleL rule;
  // Single.
  double info_weight = 1.0;
  double prediction_weight = 1.0;
  // Multi: tasks per agent (0 = all).
  int batch = 0;
  // Flat control: paid per task whatever is reported.
  double flat_payment = 1.0;
};

enum class ForecastPolicy { kHonest, kFixed, kPerturbed };

// One agent's strategy. Reports are tuples over all methods: coordinate m
// is a signal of m or kEmpty, encoded as symbol |Σ_m| (first method most
// significant). report[p] maps the received tuple over down_set(p) to such
// an output tuple; an empty report[p] is the truthful map.
struct Strategy {
  std::vector<double> effort;  // [m] per method, back() = no effort
  std::vector<std::vector<std::vector<double>>> report;
  ForecastPolicy forecast = ForecastPolicy::kHonest;
  double perturbation = 0.0;
};

// Pure effort on `performed` (kNoEffort allowed) with truthful reports.
Strategy truthful_strategy(const InformationStructure& s, MethodId performed);
// Performs a with probability lambda and b otherwise; truthful reports.
Strategy mixed_effort_strategy(const InformationStructure& s, MethodId a, MethodId b, double lambda);
// Throws ValidationError unless effort and every channel are distributions
// (row-stochastic within 1e-12) of the right shape.
void validate_strategy(const InformationStructure& s, const Strategy& st);

// Output-tuple helpers for building report channels.
std::size_t report_tuple_count(const InformationStructure& s);
std::size_t encode_report(const InformationStructure& s, const std::vector<Signal>& tuple);
std::vector<Signal> decode_report(const InformationStructure& s, std::size_t index);
// Deterministic channel for performed p: out(received tuple over down_set(p)).
std::vector<std::vector<double>> deterministic_channel(
    const InformationStructure& s, MethodId performed,
    const std::function<std::vector<Signal>(const std::vector<Signal>&)>& out);

struct SimulationConfig {
  int tasks = 200;
  int replicates = 100;
  std::uint64_t seed = 1;
};

struct UtilityEstimate {
  double payment = 0.0;  // per task
  double cost = 0.0;     // per task
  double utility = 0.0;
  double stderr_utility = 0.0;
  int replicates = 0;
};

// utility[replicate][agent], per task. Replicate r uses world seed
// mix_seed(seed, 3r), per-agent strategy draws mix_seed(mix_seed(seed, 3r+1), i)
// and mechanism seed mix_seed(seed, 3r+2). Learning draws one effort per
// agent and replicate; the other mechanisms draw per task.
struct ReplicateTable {
  std::vector<std::vector<double>> payment;
  std::vector<std::vector<double>> cost;
};
ReplicateTable simulate_replicates(const InformationStructure& s, const MechanismConfig& mech,
                                   const std::vector<Strategy>& profile, const SimulationConfig& sim);

std::vector<UtilityEstimate> simulate(const InformationStructure& s, const MechanismConfig& mech,
                                      const std::vector<Strategy>& profile, const SimulationConfig& sim);

struct Deviation {
  std::string name;
  Strategy strategy;
};

struct DeviationResult {
  std::string name;
  double delta = 0.0;  // deviation utility − baseline utility
  double stderr_delta = 0.0;
  double deviation_utility = 0.0;
  bool flagged = false;  // delta > 3 stderr and > 0
};

struct ScanResult {
  std::string name;
  int agent = 0;
  double baseline_utility = 0.0;
  std::vector<DeviationResult> rows;  // descending delta
  std::vector<std::string> notes;
  bool violation = false;

  void write_csv(std::ostream& out) const;
};

// Paired-seed comparison of each deviation against the baseline for one
// agent, all others fixed at the baseline.
ScanResult deviation_scan(const InformationStructure& s, const MechanismConfig& mech,
                          const std::vector<Strategy>& baseline, int agent, const std::vector<Deviation>& library,
                          const SimulationConfig& sim);

struct LibraryOptions {
  bool report_maps = true;     // every per-method deterministic signal map
  bool effort_changes = true;  // pure switches to other methods and no effort
  std::vector<double> lambdas = {0.25, 0.5, 0.75};
  bool substitution = true;  // claim the next level up with a copied signal
  std::vector<double> forecast_perturbations;  // Single only
};

// Deviations from the truthful strategy of an agent performing `performed`.
// Per-method maps cover each coordinate's k^k functions of its own signal
// (identity, flips, constants for binary signals), combined across methods.
std::vector<Deviation> standard_library(const InformationStructure& s, MethodId performed,
                                        const LibraryOptions& options = {});

}  // namespace hmip

#endif  // HMIP_SIMULATION_HPP_
