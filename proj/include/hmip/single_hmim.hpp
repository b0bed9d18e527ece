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

#ifndef HMIP_SINGLE_HMIM_HPP_
#define HMIP_SINGLE_HMIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hmip/paradigm.hpp"
#include "hmip/scoring.hpp"

namespace hmip {

// One agent's report. performed == kNoEffort is an uninformed agent: no
// signals, forecasts optional. signals[m] is set exactly for m ⪯ performed;
// forecasts[m] is empty when the agent does not forecast m.
struct SingleReport {
  MethodId performed = kNoEffort;
  std::vector<Signal> signals;
  std::vector<Forecast> forecasts;
};

struct SingleConfig {
  Coefficients alpha;
  double info_weight = 1.0;        // outer α
  double prediction_weight = 1.0;  // outer β
  ScoringRule rule = ScoringRule::kLog;
};

void validate_single_config(const InformationStructure& s, const SingleConfig& c);
void validate_single_reports(const InformationStructure& s, const std::vector<SingleReport>& reports);

// Exact posterior of a peer's Ψ^target given one's own signals on
// `received` (any subset of methods). Throws ValidationError when the
// signal combination has probability 0.
Forecast posterior_forecast(const InformationStructure& s, const std::vector<MethodId>& received,
                            const std::vector<Signal>& values, MethodId target);

// Truthful report of an agent who performed m (kNoEffort: uninformed) and
// received `own` (indexed by method, kEmpty elsewhere); forecasts every
// method.
SingleReport truthful_single_report(const InformationStructure& s, MethodId performed, const std::vector<Signal>& own);

struct PredictionAudit {
  double score = 0.0;
  std::vector<int> reference;  // per method, -1 when unscored
};

// Σ_{m ∈ M_{-i} ∩ M_i} α_m PS(σ̂^m, p̂_i^m), with the reference for m drawn
// uniformly among agents j != i whose performed method is ⪰ m.
PredictionAudit prediction_score(const InformationStructure& s, const std::vector<SingleReport>& reports, int agent,
                                 const SingleConfig& config, Rng& rng);

struct InformationAudit {
  double score = 0.0;
  int reference = -1;  // -1: nobody reported the same signals
};

// −Σ_{m ∈ M_i ∩ M_j} α_m (PS(p̂_j, p̂_j) − PS(p̂_j, p̂_i)) for a uniformly drawn
// j != i with the same reported signals (same performed level and values).
InformationAudit information_score(const InformationStructure& s, const std::vector<SingleReport>& reports, int agent,
                                   const SingleConfig& config, Rng& rng);

struct SinglePayment {
  int agent = 0;
  double information = 0.0;
  double prediction = 0.0;
  double total = 0.0;  // info_weight · information + prediction_weight · prediction
  InformationAudit info_audit;
  PredictionAudit prediction_audit;
};

// Agent i draws with mix_seed(seed, i). Requires at least two agents.
std::vector<SinglePayment> single_hmim_payment(const InformationStructure& s, const std::vector<SingleReport>& reports,
                                               const SingleConfig& config, std::uint64_t seed);

// AOI_single(m) = Σ_{m'} α_{m'} E[PS(σ^{m'}, p_m^{m'})]; kNoEffort gives the
// uninformed value (prior forecasts).
double single_aoi(const InformationStructure& s, const SingleConfig& config, MethodId performed);

// argmax over {uninformed} ∪ methods of AOI_single − h_i, where the
// uninformed option costs nothing; ties as in prudent_method.
PrudentChoice prudent_single_method(const InformationStructure& s, const SingleConfig& config, int agent);

// A deterministic strategy of one agent with a fixed performed method,
// indexed by her received tuple over down_set(performed) (first method most
// significant): the tuple she reports and her forecast per method.
struct SingleStrategy {
  MethodId performed = kNoEffort;
  std::vector<int> report;                      // [received] -> reported tuple
  std::vector<std::vector<Forecast>> forecasts;  // [received][method], empty = none
};

SingleStrategy truthful_single_strategy(const InformationStructure& s, MethodId performed);

// Exact expected payment of `strategy` when every other agent is truthful
// and forecasts every method; peers[k] is the performed method of peer k.
// −∞ when a forecast misses an outcome that can occur.
double expected_single_payment(const InformationStructure& s, const SingleConfig& config,
                               const SingleStrategy& strategy, const std::vector<MethodId>& peers);

struct StrictnessReport {
  bool truthful_unique = false;
  double truthful_value = 0.0;
  double best_deviation = 0.0;  // best non-truthful value found
  double margin = 0.0;          // truthful_value − best_deviation
  long long candidates = 0;     // (received, report, method, forecast) cells scored
  std::string worst;            // description of the closest deviation
};

// Exhaustive search over every deterministic signal misreport and every
// forecast on {0.01, step, 2 step, …, 0.99} (binary alphabets) or the
// probability simplex grid at `step` (clamped to ≥ 0.01), plus the truthful
// forecasts. The payment is separable per received tuple and per method, so
// maximizing cell by cell covers the whole strategy space.
StrictnessReport single_strictness_search(const InformationStructure& s, const SingleConfig& config,
                                          MethodId performed, const std::vector<MethodId>& peers, double step = 0.05);

struct RelevanceViolation {
  MethodId performed = 0;
  int tuple_a = 0;
  int tuple_b = 0;
};

// Distinct positive-probability received tuples of the same level must give
// distinct posteriors on at least one method.
std::vector<RelevanceViolation> check_stochastic_relevance(const InformationStructure& s);

}  // namespace hmip

#endif  // HMIP_SINGLE_HMIM_HPP_
