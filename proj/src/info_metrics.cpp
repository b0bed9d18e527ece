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

#include "hmip/info_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hmip {
namespace {

// D_f between a joint slice (unnormalized by `mass`) and the product of its
// marginals, both divided by mass.
double slice_mi(const double* cells, std::size_t nx, std::size_t ny, double mass, FKind kind,
                std::vector<double>& px, std::vector<double>& py) {
  px.assign(nx, 0.0);
  py.assign(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double p = cells[x * ny + y] / mass;
      px[x] += p;
      py[y] += p;
    }
  double total = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double u = cells[x * ny + y] / mass;
      const double v = px[x] * py[y];
      if (kind == FKind::kKl) {
        if (u > 0.0) total += u * std::log(u / v);
      } else {
        total += std::abs(u - v);
      }
    }
  // Rounding can push an independent table a hair below zero.
  return std::max(total, 0.0);
}

}  // namespace

std::string to_string(FKind kind) { return kind == FKind::kKl ? "kl" : "tvd"; }

FKind fkind_from_string(const std::string& name) {
  if (name == "kl" || name == "shannon") return FKind::kKl;
  if (name == "tvd") return FKind::kTvd;
  throw ValidationError("f_kind", "unknown f-divergence '" + name + "' (expected kl or tvd)");
}

void validate_forecast(std::span<const double> p, const std::string& field) {
  if (p.empty()) throw ValidationError(field, "empty forecast");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw ValidationError(field, "negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError(field, "forecast sums to " + std::to_string(total));
}

double f_divergence(std::span<const double> p, std::span<const double> q, FKind kind) {
  if (p.size() != q.size()) throw std::invalid_argument("f_divergence: alphabet mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (kind == FKind::kKl) {
      if (p[k] == 0.0) continue;
      if (q[k] == 0.0) return std::numeric_limits<double>::infinity();
      total += p[k] * std::log(p[k] / q[k]);
    } else {
      // p f(q/p) = |q - p|, with the p = 0 limit giving q.
      total += std::abs(q[k] - p[k]);
    }
  }
  return total;
}

double mutual_information(const JointDistribution& joint, FKind kind) {
  if (joint.num_variables() != 2)
    throw std::invalid_argument("mutual_information: expected a two-variable joint");
  std::vector<double> px, py;
  return slice_mi(joint.table().data(), joint.sizes()[0], joint.sizes()[1], 1.0, kind, px, py);
}

double conditional_mutual_information(const JointDistribution& joint, FKind kind) {
  if (joint.num_variables() != 3)
    throw std::invalid_argument("conditional_mutual_information: expected a three-variable joint");
  // Reorder to (Z, X, Y) so each slice is contiguous.
  const JointDistribution zxy = joint.marginal({2, 0, 1});
  const std::size_t nz = zxy.sizes()[0], nx = zxy.sizes()[1], ny = zxy.sizes()[2];
  const std::size_t slice = nx * ny;
  std::vector<double> px, py;
  double total = 0.0;
  for (std::size_t z = 0; z < nz; ++z) {
    const double* cells = zxy.table().data() + z * slice;
    double mass = 0.0;
    for (std::size_t k = 0; k < slice; ++k) mass += cells[k];
    if (mass <= 0.0) continue;
    total += mass * slice_mi(cells, nx, ny, mass, kind, px, py);
  }
  return total;
}

double grouped_mutual_information(const JointDistribution& joint, const std::vector<std::size_t>& x,
                                  const std::vector<std::size_t>& y, const std::vector<std::size_t>& z,
                                  FKind kind) {
  if (z.empty()) return mutual_information(joint.grouped({x, y}), kind);
  return conditional_mutual_information(joint.grouped({x, y, z}), kind);
}

JointDistribution empirical_joint(const std::vector<std::span<const int>>& columns,
                                  const std::vector<std::size_t>& sizes) {
  if (columns.empty() || columns.front().empty())
    throw std::invalid_argument("empirical_joint: empty input");
  const std::size_t n = columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw std::invalid_argument("empirical_joint: sequence length mismatch");
  if (!sizes.empty() && sizes.size() != columns.size())
    throw std::invalid_argument("empirical_joint: sizes do not match columns");

  std::vector<std::size_t> dims(columns.size());
  for (std::size_t v = 0; v < columns.size(); ++v) {
    int hi = -1;
    for (int x : columns[v]) {
      if (x < 0) throw std::invalid_argument("empirical_joint: negative symbol (empty entries unsupported)");
      hi = std::max(hi, x);
    }
    dims[v] = sizes.empty() ? static_cast<std::size_t>(hi) + 1 : sizes[v];
    if (static_cast<std::size_t>(hi) >= dims[v])
      throw std::invalid_argument("empirical_joint: symbol outside declared alphabet");
  }
  std::size_t states = 1;
  for (std::size_t d : dims) states *= d;
  std::vector<double> counts(states, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < columns.size(); ++v) idx = idx * dims[v] + static_cast<std::size_t>(columns[v][t]);
    counts[idx] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(n);
  std::vector<std::string> names;
  for (std::size_t v = 0; v < columns.size(); ++v) names.push_back("v" + std::to_string(v));
  return JointDistribution(std::move(names), std::move(dims), std::move(counts));
}

}  // namespace hmip
