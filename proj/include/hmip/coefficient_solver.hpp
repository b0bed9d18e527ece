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

#ifndef HMIP_COEFFICIENT_SOLVER_HPP_
#define HMIP_COEFFICIENT_SOLVER_HPP_

#include <string>
#include <vector>

#include "hmip/paradigm.hpp"

namespace hmip {

struct CostClass {
  std::vector<int> agents;
  std::vector<double> costs;  // per method
};

// Agents grouped by identical cost vectors, in order of first appearance.
std::vector<CostClass> cost_classes(const InformationStructure& s);

struct CoefficientSolution {
  bool feasible = false;
  std::string infeasibility;  // set when !feasible

  Coefficients alpha;
  // Σ_i AOI(intended choice of i) at `alpha`: the program's optimum.
  double cost = 0.0;

  std::vector<CostClass> classes;
  std::vector<MethodId> class_choice;  // assignment realized by `alpha`
  // Direct evaluation of prudent_method at `alpha`. With margin 0 the
  // optimum sits on a tie and the tie rule may pick a different option;
  // choices_match says whether every agent realizes its class choice.
  std::vector<PrudentChoice> agent_choices;
  double realized_cost = 0.0;
  bool choices_match = false;

  // Every α in the convex hull of these vertices attains `cost` under the
  // winning assignment; alpha_min/alpha_max bound each coordinate over it.
  std::vector<Coefficients> optimal_vertices;
  std::vector<double> alpha_min;
  std::vector<double> alpha_max;

  int assignments_total = 0;
  int assignments_potent = 0;
  int assignments_feasible = 0;
};

// Cheapest coefficients under which every maximal method is strictly the
// prudent choice of at least two agents. α of every minimal method is pinned
// at `epsilon`; the other coordinates are optimized. Each agent class gets an
// intended choice, and each choice must beat every alternative by `margin`.
// Ties in cost go to the lexicographically smallest α (method-index order).
CoefficientSolution solve_potent_coefficients(const InformationStructure& s, FKind kind, double epsilon = 1e-6,
                                              double margin = 1e-3);
// Same program over any per-method payment table that is linear in α, such
// as multi_level_terms.
CoefficientSolution solve_potent_coefficients(const InformationStructure& s, const AoiTable& table,
                                              double epsilon = 1e-6, double margin = 1e-3);

}  // namespace hmip

#endif  // HMIP_COEFFICIENT_SOLVER_HPP_
