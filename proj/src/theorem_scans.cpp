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

#include "hmip/theorem_scans.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmip/multi_hmim.hpp"

namespace hmip {
namespace {

std::string method_name(const InformationStructure& s, MethodId m) {
  return m == kNoEffort ? std::string("none") : s.methods[m].id;
}

std::string format_alpha(const Coefficients& c) {
  std::ostringstream out;
  out << "alpha";
  for (double a : c.alpha) out << " " << a;
  return out.str();
}

bool witnessed(const InformationStructure& s, const std::vector<MethodId>& profile) {
  for (MethodId top : s.poset.maximal())
    if (std::count(profile.begin(), profile.end(), top) < 2) return false;
  return true;
}

PotentSetup from_solution(const InformationStructure& s, const CoefficientSolution& sol) {
  PotentSetup out;
  if (!sol.feasible) {
    out.alpha.alpha.assign(s.num_methods(), 1.0);
    out.profile.assign(s.n_agents, kNoEffort);
    return out;
  }
  out.alpha = sol.alpha;
  for (const PrudentChoice& c : sol.agent_choices) out.profile.push_back(c.method);
  out.potent = sol.choices_match && witnessed(s, out.profile);
  return out;
}

// First agent of each cost class; agents in one class are interchangeable.
std::vector<int> representatives(const InformationStructure& s) {
  std::vector<int> out;
  for (const CostClass& c : cost_classes(s)) out.push_back(c.agents.front());
  return out;
}

std::vector<Strategy> truthful_profile(const InformationStructure& s, const std::vector<MethodId>& profile) {
  std::vector<Strategy> out;
  for (MethodId p : profile) out.push_back(truthful_strategy(s, p));
  return out;
}

// Relabels every reported signal x to x + 1 (mod k).
Strategy shifted_strategy(const InformationStructure& s, MethodId performed) {
  Strategy st = truthful_strategy(s, performed);
  if (performed == kNoEffort) return st;
  const auto below = s.poset.down_set(performed);
  st.report.assign(s.num_methods(), {});
  st.report[performed] = deterministic_channel(s, performed, [&](const std::vector<Signal>& got) {
    std::vector<Signal> o(s.num_methods(), kEmpty);
    for (std::size_t c = 0; c < below.size(); ++c) {
      const auto k = static_cast<Signal>(s.methods[below[c]].alphabet_size());
      o[below[c]] = static_cast<Signal>((got[c] + 1) % k);
    }
    return o;
  });
  return st;
}

std::vector<double> agent_utilities(const ReplicateTable& t, int agent) {
  std::vector<double> u;
  for (std::size_t r = 0; r < t.payment.size(); ++r) u.push_back(t.payment[r][agent] - t.cost[r][agent]);
  return u;
}

DeviationResult paired(const std::string& name, const std::vector<double>& dev, const std::vector<double>& base) {
  DeviationResult row;
  row.name = name;
  const auto R = static_cast<double>(dev.size());
  double sum2 = 0.0;
  for (std::size_t r = 0; r < dev.size(); ++r) {
    const double d = dev[r] - base[r];
    row.delta += d / R;
    row.deviation_utility += dev[r] / R;
    sum2 += d * d;
  }
  row.stderr_delta = R > 1 ? std::sqrt(std::max(0.0, (sum2 - R * row.delta * row.delta) / (R - 1)) / R) : 0.0;
  row.flagged = row.delta > 1e-12 && row.delta > 3.0 * row.stderr_delta;
  return row;
}

void sort_rows(ScanResult& scan) {
  std::stable_sort(scan.rows.begin(), scan.rows.end(),
                   [](const DeviationResult& a, const DeviationResult& b) { return a.delta > b.delta; });
  scan.violation = std::any_of(scan.rows.begin(), scan.rows.end(), [](const DeviationResult& r) { return r.flagged; });
}

NamedScanReport truthful_multi(const InformationStructure& s, const NamedScanOptions& o) {
  NamedScanReport rep;
  rep.name = "truthful_multi";
  const PotentSetup setup = multi_potent_setup(s, o.tasks);
  rep.notes.push_back(format_alpha(setup.alpha) + (setup.potent ? " (potent)" : " (not potent)"));
  MechanismConfig mech;
  mech.kind = MechanismKind::kMulti;
  mech.alpha = setup.alpha;
  const SimulationConfig sim{o.tasks, o.replicates, o.seed};
  const auto baseline = truthful_profile(s, setup.profile);
  bool ok = setup.potent;
  for (int agent : representatives(s)) {
    ScanResult scan =
        deviation_scan(s, mech, baseline, agent, standard_library(s, setup.profile[agent]), sim);
    scan.name = "truthful_multi agent " + std::to_string(agent) + " " + method_name(s, setup.profile[agent]);
    ok = ok && !scan.violation;
    rep.scans.push_back(std::move(scan));
  }
  rep.passed = ok;
  return rep;
}

NamedScanReport dominant_truthful_learning(const InformationStructure& s, const NamedScanOptions& o) {
  NamedScanReport rep;
  rep.name = "dominant_truthful_learning";
  const RuleL rule = default_learning_rule();
  const PotentSetup setup = learning_potent_setup(s, rule);
  rep.notes.push_back(format_alpha(setup.alpha) + (setup.potent ? " (potent)" : " (not potent)"));
  const SimulationConfig sim{o.learning_tasks, o.learning_replicates, o.seed};
  const GapReport gap = exact_gap(s, FKind::kKl);
  rep.notes.push_back(std::string("exact gap ") + (gap.holds ? "holds" : "violated"));

  // Suggested δ₀ per replicate, then one far too fine and one far too coarse.
  const std::vector<std::pair<std::string, double>> deltas = {
      {"suggested", 0.0}, {"delta0/10", gap.delta0 / 10.0}, {"delta0*10", gap.delta0 * 10.0}};
  LibraryOptions lib_options;
  lib_options.effort_changes = false;
  lib_options.lambdas.clear();

  bool ok = true;
  for (const auto& [label, d0] : deltas) {
    MechanismConfig mech;
    mech.kind = MechanismKind::kLearning;
    mech.fkind = FKind::kKl;
    mech.rule = rule;
    mech.delta0 = d0;
    for (int agent : representatives(s)) {
      if (setup.profile[agent] == kNoEffort) continue;
      const auto library = standard_library(s, setup.profile[agent], lib_options);
      // Truthful peers, then peers who relabel their signals.
      for (int adversarial = 0; adversarial < 2; ++adversarial) {
        auto baseline = truthful_profile(s, setup.profile);
        if (adversarial)
          for (int j = 0; j < s.n_agents; ++j)
            if (j != agent && j % 2 == 1) baseline[j] = shifted_strategy(s, setup.profile[j]);
        ScanResult scan = deviation_scan(s, mech, baseline, agent, library, sim);
        scan.name = "dominant_truthful_learning " + label + (adversarial ? " relabelling peers" : " truthful peers") +
                    " agent " + std::to_string(agent) + " " + method_name(s, setup.profile[agent]);
        ok = ok && !scan.violation;
        rep.scans.push_back(std::move(scan));
      }
    }
  }
  rep.passed = ok;
  return rep;
}

NamedScanReport strict_truthful_single(const InformationStructure& s, const NamedScanOptions& o) {
  NamedScanReport rep;
  rep.name = "strict_truthful_single";
  const PotentSetup setup = single_potent_setup(s);
  rep.notes.push_back(format_alpha(setup.alpha) + (setup.potent ? " (potent)" : " (not potent)"));
  const auto relevance = check_stochastic_relevance(s);
  rep.notes.push_back("stochastic relevance violations " + std::to_string(relevance.size()));
  const SingleConfig config{setup.alpha};
  bool ok = relevance.empty();

  MechanismConfig mech;
  mech.kind = MechanismKind::kSingle;
  mech.alpha = setup.alpha;
  const SimulationConfig sim{o.tasks, o.replicates, o.seed};
  const auto baseline = truthful_profile(s, setup.profile);
  LibraryOptions lib_options;
  lib_options.forecast_perturbations = {0.1, 0.3};

  for (int agent : representatives(s)) {
    const MethodId p = setup.profile[agent];
    if (p != kNoEffort) {
      std::vector<MethodId> peers;
      for (int j = 0; j < s.n_agents; ++j)
        if (j != agent) peers.push_back(setup.profile[j]);
      const StrictnessReport strict = single_strictness_search(s, config, p, peers);
      std::ostringstream note;
      note << "exact agent " << agent << " " << method_name(s, p) << ": truthful " << strict.truthful_value
           << ", best deviation " << strict.best_deviation << ", margin " << strict.margin << ", "
           << (strict.truthful_unique ? "strict" : "not strict");
      rep.notes.push_back(note.str());
      ok = ok && strict.truthful_unique && strict.margin > 0.0;
    }
    ScanResult scan = deviation_scan(s, mech, baseline, agent, standard_library(s, p, lib_options), sim);
    scan.name = "strict_truthful_single agent " + std::to_string(agent) + " " + method_name(s, p);
    ok = ok && !scan.violation;
    rep.scans.push_back(std::move(scan));
  }
  rep.passed = ok && setup.potent;
  return rep;
}

NamedScanReport potent_hmip(const InformationStructure& s, const NamedScanOptions&) {
  NamedScanReport rep;
  rep.name = "potent_hmip";
  bool ok = true;
  for (FKind kind : {FKind::kKl, FKind::kTvd}) {
    const std::string kname = kind == FKind::kKl ? "kl" : "tvd";
    const CoefficientSolution sol = solve_potent_coefficients(s, kind, 1e-6, 1e-3);
    if (!sol.feasible) {
      rep.notes.push_back(kname + ": infeasible (" + sol.infeasibility + ")");
      ok = false;
      continue;
    }
    const PotencyReport potency = potent_check(s, sol.alpha, kind);
    rep.notes.push_back(kname + ": " + format_alpha(sol.alpha) + (potency.potent ? " potent" : " not potent"));
    ok = ok && potency.potent;
    const AoiTable table = build_aoi_table(s, kind);
    for (int agent : representatives(s)) {
      ScanResult scan;
      scan.agent = agent;
      const MethodId chosen = potency.choices[agent].method;
      scan.name = "potent_hmip " + kname + " agent " + std::to_string(agent) + " " + method_name(s, chosen);
      scan.baseline_utility = potency.choices[agent].utility;
      for (std::size_t m = 0; m <= s.num_methods(); ++m) {
        const MethodId alt = m == s.num_methods() ? kNoEffort : static_cast<MethodId>(m);
        if (alt == chosen) continue;
        const double u = alt == kNoEffort ? 0.0 : table.aoi(sol.alpha, alt) - s.costs.cost(agent, alt);
        DeviationResult row;
        row.name = "effort " + method_name(s, alt);
        row.deviation_utility = u;
        row.delta = u - scan.baseline_utility;
        row.flagged = row.delta > 1e-12;
        scan.rows.push_back(row);
      }
      sort_rows(scan);
      ok = ok && !scan.violation;
      rep.scans.push_back(std::move(scan));
    }
  }
  rep.passed = ok;
  return rep;
}

NamedScanReport mixed_effort_dominated(const InformationStructure& s, const NamedScanOptions& o) {
  NamedScanReport rep;
  rep.name = "mixed_effort_dominated";
  const PotentSetup setup = multi_potent_setup(s, o.tasks);
  rep.notes.push_back(format_alpha(setup.alpha));
  MechanismConfig mech;
  mech.kind = MechanismKind::kMulti;
  mech.alpha = setup.alpha;
  const SimulationConfig sim{o.tasks, o.replicates, o.seed};
  const auto baseline = truthful_profile(s, setup.profile);

  std::vector<MethodId> options;
  for (std::size_t m = 0; m < s.num_methods(); ++m) options.push_back(static_cast<MethodId>(m));
  options.push_back(kNoEffort);

  bool ok = true;
  for (int agent : representatives(s)) {
    auto run = [&](const Strategy& st) {
      auto profile = baseline;
      profile[agent] = st;
      return agent_utilities(simulate_replicates(s, mech, profile, sim), agent);
    };
    std::vector<std::vector<double>> pure;
    for (MethodId m : options) pure.push_back(run(truthful_strategy(s, m)));
    auto mean = [](const std::vector<double>& v) {
      double t = 0.0;
      for (double x : v) t += x;
      return t / static_cast<double>(v.size());
    };
    ScanResult scan;
    scan.agent = agent;
    scan.name = "mixed_effort_dominated agent " + std::to_string(agent);
    for (std::size_t a = 0; a < options.size(); ++a)
      for (std::size_t b = a + 1; b < options.size(); ++b) {
        const std::vector<double>& best = mean(pure[a]) >= mean(pure[b]) ? pure[a] : pure[b];
        for (double lambda : {0.25, 0.5, 0.75}) {
          std::ostringstream name;
          name << "mix " << lambda << " " << method_name(s, options[a]) << "/" << method_name(s, options[b])
               << " vs best pure";
          scan.rows.push_back(
              paired(name.str(), run(mixed_effort_strategy(s, options[a], options[b], lambda)), best));
        }
      }
    sort_rows(scan);
    ok = ok && !scan.violation;
    rep.scans.push_back(std::move(scan));
  }
  rep.passed = ok;
  return rep;
}

}  // namespace

RuleL default_learning_rule() {
  RuleL r;
  r.kind = RuleL::Kind::kByDepth;
  r.by_depth = {1e-6, 12.0, 450.0};
  return r;
}

AoiTable single_aoi_table(const InformationStructure& s) {
  AoiTable table;
  const std::size_t M = s.num_methods();
  table.terms.assign(M, std::vector<double>(M, 0.0));
  for (std::size_t m = 0; m < M; ++m) {
    SingleConfig unit;
    unit.alpha.alpha.assign(M, 0.0);
    unit.alpha.alpha[m] = 1.0;
    const double floor = single_aoi(s, unit, kNoEffort);
    for (std::size_t p = 0; p < M; ++p) table.terms[p][m] = single_aoi(s, unit, static_cast<MethodId>(p)) - floor;
  }
  return table;
}

PotentSetup multi_potent_setup(const InformationStructure& s, int tasks) {
  return from_solution(s, solve_potent_coefficients(s, multi_level_terms(s, tasks), 1e-6, 1e-2));
}

PotentSetup single_potent_setup(const InformationStructure& s) {
  const AoiTable table = single_aoi_table(s);
  PotentSetup out = from_solution(s, solve_potent_coefficients(s, table, 1e-6, 1e-2));
  // A zero coefficient leaves that method's forecasts unscored, so misreports
  // touching only it tie with the truth. Lift every coordinate to at least ε.
  for (double& a : out.alpha.alpha) a = std::max(a, 1e-6);
  out.profile.clear();
  for (int i = 0; i < s.n_agents; ++i) out.profile.push_back(prudent_method(table, s, out.alpha, i).method);
  out.potent = out.potent && witnessed(s, out.profile);
  return out;
}

PotentSetup learning_potent_setup(const InformationStructure& s, const RuleL& rule) {
  PotentSetup out;
  for (std::size_t m = 0; m < s.num_methods(); ++m)
    out.alpha.alpha.push_back(rule.alpha(s.poset.depth(static_cast<MethodId>(m))));
  const AoiTable table = build_aoi_table(s, FKind::kKl);
  for (int i = 0; i < s.n_agents; ++i) out.profile.push_back(prudent_method(table, s, out.alpha, i).method);
  out.potent = witnessed(s, out.profile);
  return out;
}

const std::vector<std::string>& named_scan_names() {
  static const std::vector<std::string> names = {"truthful_multi", "dominant_truthful_learning",
                                                 "strict_truthful_single", "potent_hmip", "mixed_effort_dominated"};
  return names;
}

NamedScanReport run_named_scan(const std::string& name, const InformationStructure& s,
                               const NamedScanOptions& options) {
  if (name == "truthful_multi") return truthful_multi(s, options);
  if (name == "dominant_truthful_learning") return dominant_truthful_learning(s, options);
  if (name == "strict_truthful_single") return strict_truthful_single(s, options);
  if (name == "potent_hmip") return potent_hmip(s, options);
  if (name == "mixed_effort_dominated") return mixed_effort_dominated(s, options);
  throw ValidationError("scan", "unknown scan '" + name + "'");
}

}  // namespace hmip
