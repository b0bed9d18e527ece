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

#ifndef HMIP_JOINT_DISTRIBUTION_HPP_
#define HMIP_JOINT_DISTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hmip/information_structure.hpp"

namespace hmip {

inline constexpr std::uint64_t kDefaultStateCap = 10'000'000;

// Exact probability table over a list of finite variables. Row-major: the
// last variable varies fastest.
class JointDistribution {
 public:
  JointDistribution() = default;
  // Validates shape and normalization (within 1e-10).
  JointDistribution(std::vector<std::string> names, std::vector<std::size_t> sizes,
                    std::vector<double> table);

  std::size_t num_variables() const { return sizes_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<double>& table() const { return table_; }
  std::size_t num_states() const { return table_.size(); }

  std::size_t index_of(std::span<const int> assignment) const;
  void decode(std::size_t index, std::span<int> assignment) const;
  double probability(std::span<const int> assignment) const { return table_[index_of(assignment)]; }

  // Joint over the listed variables (in the listed order).
  JointDistribution marginal(const std::vector<std::size_t>& keep) const;

  // Merges each group of variables into one composite variable; the first
  // variable of a group is the most significant digit. An empty group yields
  // a constant variable of size 1. Every variable must appear at most once.
  JointDistribution grouped(const std::vector<std::vector<std::size_t>>& groups) const;

  // Replaces `inputs` by a single output variable drawn through
  // `channel[input_state][output]`, where input_state is the composite index
  // of `inputs`. The output variable is appended last.
  JointDistribution through_channel(const std::vector<std::size_t>& inputs,
                                    const std::vector<std::vector<double>>& channel,
                                    const std::string& output_name) const;

  // Columns: one per variable, then "probability".
  void write_csv(std::ostream& out) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> sizes_;
  std::vector<double> table_;
};

// One agent's signal for one method.
struct SignalVar {
  int agent = 0;
  MethodId method = 0;
  friend bool operator==(const SignalVar&, const SignalVar&) = default;
};

// Pr[assignment] = Σ_a Q_A(a) Π_{(i,m)} channel_m(a)(σ_{i,m}), by enumeration.
// Throws StateSpaceError when Π alphabet sizes exceeds `cap`.
JointDistribution joint_distribution(const InformationStructure& s, const std::vector<SignalVar>& vars,
                                     std::uint64_t cap = kDefaultStateCap);

// Realized signals per task, agent and method. attribute[t] records the
// draw behind task t.
struct SignalTable {
  int tasks = 0;
  int agents = 0;
  int methods = 0;
  std::vector<int> attribute;
  std::vector<Signal> signals;  // [(t * agents + i) * methods + m]

  Signal at(int t, int i, MethodId m) const {
    return signals[(static_cast<std::size_t>(t) * agents + i) * methods + m];
  }
  Signal& at(int t, int i, MethodId m) {
    return signals[(static_cast<std::size_t>(t) * agents + i) * methods + m];
  }
  friend bool operator==(const SignalTable&, const SignalTable&) = default;
};

// Draws T i.i.d. tasks: an attribute from Q_A, then each (agent, method)
// signal independently from the method's channel.
SignalTable sample_world(const InformationStructure& s, int tasks, std::uint64_t seed);
SignalTable sample_world(const InformationStructure& s, int tasks, Rng& rng);

}  // namespace hmip

#endif  // HMIP_JOINT_DISTRIBUTION_HPP_
