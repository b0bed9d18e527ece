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

#include "hmip/vertex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hmip {
namespace {

double dot(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * v[k];
  return s;
}

bool same_point(const std::vector<double>& u, const std::vector<double>& v, double tol) {
  for (std::size_t k = 0; k < u.size(); ++k)
    if (std::abs(u[k] - v[k]) > tol * (1.0 + std::abs(u[k]))) return false;
  return true;
}

}  // namespace

bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs, std::vector<double>& x) {
  const std::size_t n = rhs.size();
  double scale = 0.0;
  for (const auto& row : m)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) <= 1e-12 * scale) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= m[r][k] * x[k];
    x[r] = s / m[r][r];
  }
  return true;
}

LpResult solve_by_vertices(const LinearProgram& lp, double tol) {
  const std::size_t d = lp.c.size();
  const std::size_t rows = lp.a.size();
  if (lp.b.size() != rows) throw std::invalid_argument("solve_by_vertices: A and b disagree in length");
  for (const auto& row : lp.a)
    if (row.size() != d) throw std::invalid_argument("solve_by_vertices: row width differs from c");

  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t r = 0; r < rows; ++r)
      if (dot(lp.a[r], x) < lp.b[r] - tol * (1.0 + std::abs(lp.b[r]))) return false;
    return true;
  };

  LpResult result;
  if (d == 0) {
    result.feasible = feasible({});
    if (result.feasible) result.optimal_vertices.push_back({});
    return result;
  }
  if (rows < d) return result;

  // Walk every d-subset of rows in lexicographic order.
  std::vector<std::size_t> pick(d);
  for (std::size_t k = 0; k < d; ++k) pick[k] = k;
  std::vector<std::vector<double>> m(d);
  std::vector<double> rhs(d), x;
  while (true) {
    for (std::size_t k = 0; k < d; ++k) {
      m[k] = lp.a[pick[k]];
      rhs[k] = lp.b[pick[k]];
    }
    if (solve_square(m, rhs, x) && feasible(x)) {
      const double v = dot(lp.c, x);
      const double band = tol * (1.0 + std::abs(v));
      if (!result.feasible || v < result.value - band) {
        result.feasible = true;
        result.value = v;
        result.optimal_vertices.assign(1, x);
      } else if (v <= result.value + band) {
        const bool seen = std::any_of(result.optimal_vertices.begin(), result.optimal_vertices.end(),
                                      [&](const auto& u) { return same_point(u, x, tol); });
        if (!seen) result.optimal_vertices.push_back(x);
        result.value = std::min(result.value, v);
      }
    }
    std::size_t k = d;
    while (k > 0 && pick[k - 1] == rows - d + (k - 1)) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return result;
}

}  // namespace hmip
