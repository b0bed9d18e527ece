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

#ifndef HMIP_INFORMATION_STRUCTURE_HPP_
#define HMIP_INFORMATION_STRUCTURE_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hmip/common.hpp"

namespace hmip {

// Finite attribute space A with its distribution Q_A.
struct AttributeSpace {
  std::vector<std::string> names;
  std::vector<double> probs;

  std::size_t size() const { return names.size(); }
};

// An information-acquisition method: a channel from attributes to a finite
// signal alphabet. channel[a][s] is the probability an agent performing the
// method on attribute a receives signal s.
struct Method {
  std::string id;
  std::vector<std::string> alphabet;
  std::vector<std::vector<double>> channel;

  std::size_t alphabet_size() const { return alphabet.size(); }
};

// Strict partial order over method indices. The transitive closure is
// computed on construction; a cycle (including a self-edge) is rejected.
class MethodPoset {
 public:
  MethodPoset() = default;
  // edges are (higher, lower) pairs: higher ≻ lower.
  MethodPoset(std::size_t n, const std::vector<std::pair<MethodId, MethodId>>& edges);

  std::size_t size() const { return n_; }
  // higher ≻ lower (strict).
  bool dominates(MethodId higher, MethodId lower) const;
  // higher ⪰ lower.
  bool dominates_or_equal(MethodId higher, MethodId lower) const {
    return higher == lower || dominates(higher, lower);
  }
  std::vector<MethodId> maximal() const;
  std::vector<MethodId> minimal() const;
  // Methods strictly below m, ascending index order.
  std::vector<MethodId> strictly_below(MethodId m) const;
  // {ℓ : ℓ ⪯ m}, ascending index order.
  std::vector<MethodId> down_set(MethodId m) const;
  // All strict pairs of the closure, (higher, lower).
  std::vector<std::pair<MethodId, MethodId>> closure_edges() const;
  // Length of the longest strict chain ending at m from below (0 for minimal).
  int depth(MethodId m) const;

  friend bool operator==(const MethodPoset&, const MethodPoset&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<char> closure_;  // closure_[h * n_ + l] == 1 iff h ≻ l
};

// h_i(m) for every agent and method, in effort units.
struct CostProfile {
  std::vector<std::vector<double>> effort;  // [agent][method]

  // Cost of performing m; kNoEffort costs nothing.
  double cost(int agent, MethodId m) const {
    return m == kNoEffort ? 0.0 : effort.at(agent).at(m);
  }
};

struct InformationStructure {
  AttributeSpace attributes;
  std::vector<Method> methods;
  MethodPoset poset;
  CostProfile costs;
  int n_agents = 0;
  // Human-readable class label per agent ("low", "high", ...).
  std::vector<std::string> agent_class;

  std::size_t num_methods() const { return methods.size(); }
  MethodId method_index(const std::string& id) const;
};

// Declarative description accepted by build_structure. Agents come in
// classes sharing a cost vector.
struct AgentClassConfig {
  std::string name;
  int count = 0;
  std::vector<double> costs;  // aligned with StructureConfig::methods

  friend bool operator==(const AgentClassConfig&, const AgentClassConfig&) = default;
};

struct MethodConfig {
  std::string id;
  std::vector<std::string> alphabet;
  std::vector<std::vector<double>> channel;  // [attribute][signal]

  friend bool operator==(const MethodConfig&, const MethodConfig&) = default;
};

struct StructureConfig {
  std::vector<std::string> attribute_names;
  std::vector<double> attribute_probs;
  std::vector<MethodConfig> methods;
  std::vector<std::pair<std::string, std::string>> edges;  // (higher, lower)
  std::vector<AgentClassConfig> agent_classes;

  friend bool operator==(const StructureConfig&, const StructureConfig&) = default;
};

// Validates the config and returns the structure with the poset closure
// computed. Throws ValidationError naming the offending field.
InformationStructure build_structure(const StructureConfig& config);

// The essay peer-grading world: attributes (quality, writing, length),
// methods m_l ≺ m_w ≺ m_q with binary signals (index 1 = positive).
StructureConfig peer_grading_config(int n_low = 2, int n_high = 8);

// A binary fair attribute read by three noisy binary methods b1 ≺ b2 ≺ b3
// (accuracy 0.6, 0.75, 0.9). Every signal tuple has positive probability.
StructureConfig small_binary_config(int n_low = 2, int n_high = 2);

}  // namespace hmip

#endif  // HMIP_INFORMATION_STRUCTURE_HPP_
