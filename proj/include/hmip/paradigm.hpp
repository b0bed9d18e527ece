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

#ifndef HMIP_PARADIGM_HPP_
#define HMIP_PARADIGM_HPP_

#include <string>
#include <vector>

#include "hmip/info_metrics.hpp"

namespace hmip {

// Payment scale α_m per method (aligned with InformationStructure::methods).
struct Coefficients {
  std::vector<double> alpha;
};

void validate_coefficients(const InformationStructure& s, const Coefficients& c);

// Stochastic report map of one agent. Rows are indexed by the composite
// received state over `received` (first method most significant); columns
// are opaque report symbols.
struct ReportMap {
  std::vector<MethodId> received;
  std::vector<std::vector<double>> channel;
};

// Reports the received tuple unchanged.
ReportMap truthful_report(const InformationStructure& s, const std::vector<MethodId>& received);
// Reports one fixed symbol whatever was received.
ReportMap constant_report(const InformationStructure& s, const std::vector<MethodId>& received);
// Deterministic map given as received-state -> symbol labels.
ReportMap deterministic_report(const std::vector<MethodId>& received, const std::vector<int>& labels);

// Σ_{m ∈ peer_methods} α_m MI^f(report; Ψ_{-i}^m | {Ψ_{-i}^{m'}}_{m' ≺ m, m' ∈ peer_methods}),
// computed exactly with the reporter as agent 0 and the peer as agent 1.
double hmip_information_score(const InformationStructure& s, const Coefficients& alpha, FKind kind,
                              const ReportMap& report, const std::vector<MethodId>& peer_methods);

// Per-method MI terms earned by truthfully reporting {ℓ ⪯ performed} against
// a peer reporting every level: terms[m] = MI^f({Ψ_i^ℓ}; Ψ_{-i}^m | {Ψ_{-i}^{m'}}_{m' ≺ m}).
// kNoEffort yields all zeros.
std::vector<double> information_terms(const InformationStructure& s, FKind kind, MethodId performed);

// information_terms for every method, computed once per structure.
struct AoiTable {
  FKind kind = FKind::kKl;
  std::vector<std::vector<double>> terms;  // [performed][m]

  double aoi(const Coefficients& alpha, MethodId performed) const;
};
AoiTable build_aoi_table(const InformationStructure& s, FKind kind);

// AOI(m_i) = Σ_m α_m terms[m_i][m].
double amount_of_information(const InformationStructure& s, const Coefficients& alpha, FKind kind,
                             MethodId performed);

struct PrudentChoice {
  MethodId method = kNoEffort;  // kNoEffort: invest nothing, report nothing
  double utility = 0.0;
  double aoi = 0.0;
};

// argmax over methods ∪ {no effort} of AOI(m) − h_i(m). Ties (within 1e-12)
// go to the cheaper option, then the lower method index; no effort costs 0.
PrudentChoice prudent_method(const AoiTable& table, const InformationStructure& s, const Coefficients& alpha,
                             int agent);
PrudentChoice prudent_method(const InformationStructure& s, const Coefficients& alpha, FKind kind, int agent);

struct PotencyReport {
  bool potent = false;
  std::vector<PrudentChoice> choices;                // per agent
  std::vector<MethodId> maximal;                     // maximal methods
  std::vector<std::vector<int>> witnesses;           // per maximal method
};

// Potent iff every maximal method is the prudent choice of at least two agents.
PotencyReport potent_check(const InformationStructure& s, const Coefficients& alpha, FKind kind);

}  // namespace hmip

#endif  // HMIP_PARADIGM_HPP_
