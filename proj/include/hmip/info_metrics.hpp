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

#ifndef HMIP_INFO_METRICS_HPP_
#define HMIP_INFO_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "hmip/joint_distribution.hpp"

namespace hmip {

// The two f-divergences used throughout. Both use a convex f with f(1) = 0:
// KL with f(t) = -ln t, TVD with f(t) = |t - 1| (unhalved).
enum class FKind { kKl, kTvd };

std::string to_string(FKind kind);
FKind fkind_from_string(const std::string& name);

// A distribution over a finite alphabet.
using Forecast = std::vector<double>;

// Throws ValidationError unless p is non-negative and sums to 1 (1e-12).
void validate_forecast(std::span<const double> p, const std::string& field = "forecast");

// D_f(p, q) = Σ p(σ) f(q(σ)/p(σ)). KL cells with p = 0 contribute 0; a cell
// with q = 0 < p makes KL infinite.
double f_divergence(std::span<const double> p, std::span<const double> q, FKind kind);

// MI^f(X;Y) = D_f(U_{X,Y}, V_{X,Y}) for a two-variable joint.
double mutual_information(const JointDistribution& joint, FKind kind);

// MI^f(X;Y|Z) = Σ_z Pr[Z=z] MI^f(X;Y|Z=z) for a three-variable joint
// ordered (X, Y, Z). Slices with Pr[Z=z] = 0 contribute 0.
double conditional_mutual_information(const JointDistribution& joint, FKind kind);

// Convenience: groups variables of a larger joint into (X, Y, Z) and returns
// the conditional MI; an empty z computes the unconditional MI.
double grouped_mutual_information(const JointDistribution& joint, const std::vector<std::size_t>& x,
                                  const std::vector<std::size_t>& y, const std::vector<std::size_t>& z,
                                  FKind kind);

// Plug-in frequency table over equal-length integer sequences, one variable
// per column. Alphabet sizes default to max value + 1 per column. Entries
// must be non-negative.
JointDistribution empirical_joint(const std::vector<std::span<const int>>& columns,
                                  const std::vector<std::size_t>& sizes = {});

}  // namespace hmip

#endif  // HMIP_INFO_METRICS_HPP_
