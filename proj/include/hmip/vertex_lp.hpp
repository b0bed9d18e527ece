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

#ifndef HMIP_VERTEX_LP_HPP_
#define HMIP_VERTEX_LP_HPP_

#include <vector>

namespace hmip {

// minimize c·x subject to A x ≥ b, for a handful of variables. Solved by
// enumerating every basis of d tight rows, so the feasible region must be
// pointed (for instance, x ≥ 0 among the rows) and the objective bounded
// below on it; the coefficient solver guarantees both.
struct LinearProgram {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
};

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  // Every optimal vertex (deduplicated), in enumeration order.
  std::vector<std::vector<double>> optimal_vertices;
};

LpResult solve_by_vertices(const LinearProgram& lp, double tol = 1e-9);

// Solves the square system m x = rhs by Gaussian elimination with partial
// pivoting; returns false when m is (numerically) singular.
bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs, std::vector<double>& x);

}  // namespace hmip

#endif  // HMIP_VERTEX_LP_HPP_
