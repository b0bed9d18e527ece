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

#include "hmip/coefficient_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "hmip/vertex_lp.hpp"

namespace hmip {
namespace {

constexpr double kCostTol = 1e-9;

bool lex_less(const std::vector<double>& u, const std::vector<double>& v) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double band = kCostTol * (1.0 + std::abs(u[k]) + std::abs(v[k]));
    if (u[k] < v[k] - band) return true;
    if (u[k] > v[k] + band) return false;
  }
  return false;
}

bool better(double cost, const std::vector<double>& alpha, double best_cost, const std::vector<double>& best_alpha) {
  const double band = kCostTol * (1.0 + std::abs(cost) + std::abs(best_cost));
  if (cost < best_cost - band) return true;
  if (cost > best_cost + band) return false;
  return lex_less(alpha, best_alpha);
}

}  // namespace

std::vector<CostClass> cost_classes(const InformationStructure& s) {
  std::vector<CostClass> classes;
  for (int i = 0; i < s.n_agents; ++i) {
    const std::vector<double>& c = s.costs.effort.at(i);
    auto it = std::find_if(classes.begin(), classes.end(), [&](const CostClass& k) { return k.costs == c; });
    if (it == classes.end()) {
      classes.push_back(CostClass{{i}, c});
    } else {
      it->agents.push_back(i);
    }
  }
  return classes;
}

CoefficientSolution solve_potent_coefficients(const InformationStructure& s, FKind kind, double epsilon,
                                              double margin) {
  return solve_potent_coefficients(s, build_aoi_table(s, kind), epsilon, margin);
}

CoefficientSolution solve_potent_coefficients(const InformationStructure& s, const AoiTable& table, double epsilon,
                                              double margin) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon", "must be > 0");
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw ValidationError("margin", "must be >= 0");

  const std::size_t n_methods = s.num_methods();
  if (table.terms.size() != s.num_methods()) throw ValidationError("table", "needs one row per method");
  const std::vector<MethodId> maximal = s.poset.maximal();
  const std::vector<MethodId> minimal = s.poset.minimal();

  // Free coordinates: every non-minimal method.
  std::vector<MethodId> free;
  std::vector<double> fixed(n_methods, 0.0);
  for (std::size_t m = 0; m < n_methods; ++m) {
    const auto id = static_cast<MethodId>(m);
    if (std::find(minimal.begin(), minimal.end(), id) != minimal.end()) {
      fixed[m] = epsilon;
    } else {
      free.push_back(id);
    }
  }
  const std::size_t d = free.size();

  // AOI(o) = base(o) + slope(o)·x; option index n_methods stands for no effort.
  const std::size_t n_options = n_methods + 1;
  auto option_method = [&](std::size_t o) { return o == n_methods ? kNoEffort : static_cast<MethodId>(o); };
  std::vector<double> base(n_options, 0.0);
  std::vector<std::vector<double>> slope(n_options, std::vector<double>(d, 0.0));
  for (std::size_t o = 0; o < n_methods; ++o) {
    for (std::size_t m = 0; m < n_methods; ++m) base[o] += fixed[m] * table.terms[o][m];
    for (std::size_t k = 0; k < d; ++k) slope[o][k] = table.terms[o][free[k]];
  }

  CoefficientSolution sol;
  sol.classes = cost_classes(s);
  const std::size_t n_classes = sol.classes.size();
  auto option_cost = [&](std::size_t c, std::size_t o) {
    return o == n_methods ? 0.0 : sol.classes[c].costs[o];
  };

  std::vector<std::size_t> assign(n_classes, 0);
  double best_cost = 0.0;
  std::vector<double> best_alpha;
  std::vector<std::size_t> best_assign;
  std::vector<std::vector<double>> best_vertices;
  bool any = false;

  while (true) {
    ++sol.assignments_total;
    bool potent = true;
    for (MethodId top : maximal) {
      std::size_t count = 0;
      for (std::size_t c = 0; c < n_classes; ++c)
        if (option_method(assign[c]) == top) count += sol.classes[c].agents.size();
      if (count < 2) potent = false;
    }
    if (potent) {
      ++sol.assignments_potent;
      LinearProgram lp;
      lp.c.assign(d, 0.0);
      double constant = 0.0;
      for (std::size_t c = 0; c < n_classes; ++c) {
        const std::size_t o = assign[c];
        const double n = static_cast<double>(sol.classes[c].agents.size());
        for (std::size_t k = 0; k < d; ++k) lp.c[k] += n * slope[o][k];
        constant += n * base[o];
        for (std::size_t alt = 0; alt < n_options; ++alt) {
          if (alt == o) continue;
          std::vector<double> row(d);
          for (std::size_t k = 0; k < d; ++k) row[k] = slope[o][k] - slope[alt][k];
          lp.a.push_back(std::move(row));
          lp.b.push_back(margin + option_cost(c, o) - option_cost(c, alt) - (base[o] - base[alt]));
        }
      }
      for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> row(d, 0.0);
        row[k] = 1.0;
        lp.a.push_back(std::move(row));
        lp.b.push_back(0.0);
      }
      const LpResult r = solve_by_vertices(lp);
      if (r.feasible) {
        ++sol.assignments_feasible;
        const double cost = r.value + constant;
        const auto lex_min = std::min_element(r.optimal_vertices.begin(), r.optimal_vertices.end(),
                                              [](const auto& u, const auto& v) { return lex_less(u, v); });
        if (!any || better(cost, *lex_min, best_cost, best_alpha)) {
          any = true;
          best_cost = cost;
          best_alpha = *lex_min;
          best_assign = assign;
          best_vertices = r.optimal_vertices;
        }
      }
    }
    std::size_t k = 0;
    while (k < n_classes && ++assign[k] == n_options) assign[k++] = 0;
    if (k == n_classes) break;
  }

  if (!any) {
    if (s.n_agents < 2) {
      sol.infeasibility = "fewer than two agents: no method can be chosen by two agents";
    } else if (sol.assignments_potent == 0) {
      sol.infeasibility = "no class assignment gives every maximal method two agents";
    } else {
      sol.infeasibility = "every potent class assignment has an empty coefficient region at this margin";
    }
    return sol;
  }

  auto expand = [&](const std::vector<double>& x) {
    Coefficients a{fixed};
    for (std::size_t k = 0; k < d; ++k) a.alpha[free[k]] = x[k];
    return a;
  };
  sol.feasible = true;
  sol.alpha = expand(best_alpha);
  for (std::size_t c = 0; c < n_classes; ++c) sol.class_choice.push_back(option_method(best_assign[c]));
  for (const auto& v : best_vertices) sol.optimal_vertices.push_back(expand(v));
  sol.alpha_min = sol.alpha.alpha;
  sol.alpha_max = sol.alpha.alpha;
  for (const auto& v : sol.optimal_vertices)
    for (std::size_t m = 0; m < n_methods; ++m) {
      sol.alpha_min[m] = std::min(sol.alpha_min[m], v.alpha[m]);
      sol.alpha_max[m] = std::max(sol.alpha_max[m], v.alpha[m]);
    }
  sol.cost = best_cost;
  sol.choices_match = true;
  sol.agent_choices.resize(s.n_agents);
  for (std::size_t c = 0; c < n_classes; ++c)
    for (int i : sol.classes[c].agents) {
      sol.agent_choices[i] = prudent_method(table, s, sol.alpha, i);
      if (sol.agent_choices[i].method != sol.class_choice[c]) sol.choices_match = false;
    }
  for (const auto& ch : sol.agent_choices) sol.realized_cost += ch.aoi;
  return sol;
}

}  // namespace hmip
