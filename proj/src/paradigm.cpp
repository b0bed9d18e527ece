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

#include "hmip/paradigm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmip {
namespace {

constexpr double kTieTol = 1e-12;

// Exact joints only need two exchangeable agents; a one-agent structure still
// has a well-defined hypothetical peer.
const InformationStructure& with_peer(const InformationStructure& s, InformationStructure& scratch) {
  if (s.n_agents >= 2) return s;
  scratch = s;
  scratch.n_agents = 2;
  return scratch;
}

std::size_t received_states(const InformationStructure& s, const std::vector<MethodId>& received) {
  std::size_t n = 1;
  for (MethodId m : received) n *= s.methods.at(m).alphabet_size();
  return n;
}

}  // namespace

void validate_coefficients(const InformationStructure& s, const Coefficients& c) {
  if (c.alpha.size() != s.num_methods())
    throw ValidationError("alpha", "needs one coefficient per method");
  for (std::size_t m = 0; m < c.alpha.size(); ++m)
    if (!(c.alpha[m] >= 0.0) || !std::isfinite(c.alpha[m]))
      throw ValidationError("alpha[" + std::to_string(m) + "]", "coefficient must be finite and >= 0");
}

ReportMap truthful_report(const InformationStructure& s, const std::vector<MethodId>& received) {
  const std::size_t n = received_states(s, received);
  ReportMap r{received, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  for (std::size_t k = 0; k < n; ++k) r.channel[k][k] = 1.0;
  return r;
}

ReportMap constant_report(const InformationStructure& s, const std::vector<MethodId>& received) {
  const std::size_t n = received_states(s, received);
  return ReportMap{received, std::vector<std::vector<double>>(n, std::vector<double>{1.0})};
}

ReportMap deterministic_report(const std::vector<MethodId>& received, const std::vector<int>& labels) {
  int symbols = 0;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("deterministic_report: negative label");
    symbols = std::max(symbols, l + 1);
  }
  ReportMap r{received, std::vector<std::vector<double>>(labels.size(), std::vector<double>(symbols, 0.0))};
  for (std::size_t k = 0; k < labels.size(); ++k) r.channel[k][labels[k]] = 1.0;
  return r;
}

double hmip_information_score(const InformationStructure& s, const Coefficients& alpha, FKind kind,
                              const ReportMap& report, const std::vector<MethodId>& peer_methods) {
  validate_coefficients(s, alpha);
  if (peer_methods.empty()) return 0.0;
  InformationStructure scratch;
  const InformationStructure& st = with_peer(s, scratch);

  std::vector<SignalVar> vars;
  for (MethodId m : report.received) vars.push_back({0, m});
  for (MethodId m : peer_methods) vars.push_back({1, m});
  std::vector<std::size_t> inputs(report.received.size());
  for (std::size_t k = 0; k < inputs.size(); ++k) inputs[k] = k;
  // After the channel: peer variables first (in peer_methods order), report last.
  const JointDistribution joint = joint_distribution(st, vars).through_channel(inputs, report.channel, "report");
  const std::size_t report_var = peer_methods.size();

  double total = 0.0;
  for (std::size_t k = 0; k < peer_methods.size(); ++k) {
    const MethodId m = peer_methods[k];
    if (alpha.alpha[m] == 0.0) continue;
    std::vector<std::size_t> lower;
    for (std::size_t j = 0; j < peer_methods.size(); ++j)
      if (s.poset.dominates(m, peer_methods[j])) lower.push_back(j);
    total += alpha.alpha[m] * grouped_mutual_information(joint, {report_var}, {k}, lower, kind);
  }
  return total;
}

std::vector<double> information_terms(const InformationStructure& s, FKind kind, MethodId performed) {
  std::vector<double> terms(s.num_methods(), 0.0);
  if (performed == kNoEffort) return terms;
  InformationStructure scratch;
  const InformationStructure& st = with_peer(s, scratch);

  const std::vector<MethodId> own = s.poset.down_set(performed);
  std::vector<SignalVar> vars;
  for (MethodId m : own) vars.push_back({0, m});
  for (std::size_t m = 0; m < s.num_methods(); ++m) vars.push_back({1, static_cast<MethodId>(m)});
  const JointDistribution joint = joint_distribution(st, vars);

  std::vector<std::size_t> own_vars(own.size());
  for (std::size_t k = 0; k < own.size(); ++k) own_vars[k] = k;
  for (std::size_t m = 0; m < s.num_methods(); ++m) {
    std::vector<std::size_t> lower;
    for (MethodId l : s.poset.strictly_below(static_cast<MethodId>(m))) lower.push_back(own.size() + l);
    terms[m] = grouped_mutual_information(joint, own_vars, {own.size() + m}, lower, kind);
  }
  return terms;
}

double AoiTable::aoi(const Coefficients& alpha, MethodId performed) const {
  if (performed == kNoEffort) return 0.0;
  const auto& t = terms.at(performed);
  double total = 0.0;
  for (std::size_t m = 0; m < t.size(); ++m) total += alpha.alpha.at(m) * t[m];
  return total;
}

AoiTable build_aoi_table(const InformationStructure& s, FKind kind) {
  AoiTable table;
  table.kind = kind;
  for (std::size_t m = 0; m < s.num_methods(); ++m)
    table.terms.push_back(information_terms(s, kind, static_cast<MethodId>(m)));
  return table;
}

double amount_of_information(const InformationStructure& s, const Coefficients& alpha, FKind kind,
                             MethodId performed) {
  validate_coefficients(s, alpha);
  const std::vector<double> t = information_terms(s, kind, performed);
  double total = 0.0;
  for (std::size_t m = 0; m < t.size(); ++m) total += alpha.alpha[m] * t[m];
  return total;
}

PrudentChoice prudent_method(const AoiTable& table, const InformationStructure& s, const Coefficients& alpha,
                             int agent) {
  if (agent < 0 || agent >= s.n_agents) throw std::out_of_range("prudent_method: agent index out of range");
  validate_coefficients(s, alpha);
  PrudentChoice best;  // no effort: utility 0, cost 0
  double best_cost = 0.0;
  for (std::size_t m = 0; m < s.num_methods(); ++m) {
    const auto id = static_cast<MethodId>(m);
    const double aoi = table.aoi(alpha, id);
    const double cost = s.costs.cost(agent, id);
    const double u = aoi - cost;
    const double scale = std::max({1.0, std::abs(u), std::abs(best.utility)});
    const bool better = u > best.utility + kTieTol * scale;
    const bool tie = !better && std::abs(u - best.utility) <= kTieTol * scale;
    // Ties keep the incumbent unless the challenger is strictly cheaper;
    // indices are visited in ascending order.
    if (better || (tie && cost < best_cost)) {
      best = PrudentChoice{id, u, aoi};
      best_cost = cost;
    }
  }
  return best;
}

PrudentChoice prudent_method(const InformationStructure& s, const Coefficients& alpha, FKind kind, int agent) {
  return prudent_method(build_aoi_table(s, kind), s, alpha, agent);
}

PotencyReport potent_check(const InformationStructure& s, const Coefficients& alpha, FKind kind) {
  const AoiTable table = build_aoi_table(s, kind);
  PotencyReport report;
  report.maximal = s.poset.maximal();
  report.witnesses.resize(report.maximal.size());
  for (int i = 0; i < s.n_agents; ++i) report.choices.push_back(prudent_method(table, s, alpha, i));
  report.potent = true;
  for (std::size_t k = 0; k < report.maximal.size(); ++k) {
    for (int i = 0; i < s.n_agents; ++i)
      if (report.choices[i].method == report.maximal[k]) report.witnesses[k].push_back(i);
    if (report.witnesses[k].size() < 2) report.potent = false;
  }
  return report;
}

}  // namespace hmip
