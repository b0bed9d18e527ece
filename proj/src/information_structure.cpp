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

#include "hmip/information_structure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace hmip {
namespace {

constexpr double kNormTol = 1e-12;

std::string indexed(const std::string& base, std::size_t k) {
  return base + "[" + std::to_string(k) + "]";
}

void check_distribution(const std::vector<double>& p, const std::string& field) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] >= 0.0) || !std::isfinite(p[k]))
      throw ValidationError(indexed(field, k), "probability must be finite and non-negative");
    total += p[k];
  }
  if (std::abs(total - 1.0) > kNormTol)
    throw ValidationError(field, "distribution sums to " + std::to_string(total) + ", expected 1");
}

}  // namespace

MethodPoset::MethodPoset(std::size_t n, const std::vector<std::pair<MethodId, MethodId>>& edges)
    : n_(n), closure_(n * n, 0) {
  for (const auto& [hi, lo] : edges) {
    if (hi < 0 || lo < 0 || static_cast<std::size_t>(hi) >= n || static_cast<std::size_t>(lo) >= n)
      throw ValidationError("poset.edges", "edge references unknown method");
    closure_[hi * n_ + lo] = 1;
  }
  // Warshall.
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      if (closure_[i * n_ + k])
        for (std::size_t j = 0; j < n_; ++j)
          if (closure_[k * n_ + j]) closure_[i * n_ + j] = 1;
  for (std::size_t i = 0; i < n_; ++i)
    if (closure_[i * n_ + i])
      throw ValidationError("poset.edges", "cycle through method " + std::to_string(i));
}

bool MethodPoset::dominates(MethodId higher, MethodId lower) const {
  return closure_.at(static_cast<std::size_t>(higher) * n_ + static_cast<std::size_t>(lower)) != 0;
}

std::vector<MethodId> MethodPoset::maximal() const {
  std::vector<MethodId> out;
  for (std::size_t m = 0; m < n_; ++m) {
    bool dominated = false;
    for (std::size_t o = 0; o < n_ && !dominated; ++o) dominated = closure_[o * n_ + m] != 0;
    if (!dominated) out.push_back(static_cast<MethodId>(m));
  }
  return out;
}

std::vector<MethodId> MethodPoset::minimal() const {
  std::vector<MethodId> out;
  for (std::size_t m = 0; m < n_; ++m) {
    bool has_lower = false;
    for (std::size_t o = 0; o < n_ && !has_lower; ++o) has_lower = closure_[m * n_ + o] != 0;
    if (!has_lower) out.push_back(static_cast<MethodId>(m));
  }
  return out;
}

std::vector<MethodId> MethodPoset::strictly_below(MethodId m) const {
  std::vector<MethodId> out;
  for (std::size_t o = 0; o < n_; ++o)
    if (dominates(m, static_cast<MethodId>(o))) out.push_back(static_cast<MethodId>(o));
  return out;
}

std::vector<MethodId> MethodPoset::down_set(MethodId m) const {
  std::vector<MethodId> out;
  for (std::size_t o = 0; o < n_; ++o)
    if (dominates_or_equal(m, static_cast<MethodId>(o))) out.push_back(static_cast<MethodId>(o));
  return out;
}

std::vector<std::pair<MethodId, MethodId>> MethodPoset::closure_edges() const {
  std::vector<std::pair<MethodId, MethodId>> out;
  for (std::size_t h = 0; h < n_; ++h)
    for (std::size_t l = 0; l < n_; ++l)
      if (closure_[h * n_ + l]) out.emplace_back(static_cast<MethodId>(h), static_cast<MethodId>(l));
  return out;
}

int MethodPoset::depth(MethodId m) const {
  int best = 0;
  for (MethodId lower : strictly_below(m)) best = std::max(best, depth(lower) + 1);
  return best;
}

MethodId InformationStructure::method_index(const std::string& id) const {
  for (std::size_t k = 0; k < methods.size(); ++k)
    if (methods[k].id == id) return static_cast<MethodId>(k);
  throw ValidationError("method", "unknown method id '" + id + "'");
}

InformationStructure build_structure(const StructureConfig& config) {
  InformationStructure s;

  if (config.attribute_names.empty())
    throw ValidationError("attributes", "attribute list is empty");
  if (config.attribute_names.size() != config.attribute_probs.size())
    throw ValidationError("attributes", "names and probabilities differ in length");
  {
    std::set<std::string> seen;
    for (std::size_t a = 0; a < config.attribute_names.size(); ++a)
      if (!seen.insert(config.attribute_names[a]).second)
        throw ValidationError(indexed("attributes", a), "duplicate attribute '" + config.attribute_names[a] + "'");
  }
  check_distribution(config.attribute_probs, "attributes.probs");
  s.attributes.names = config.attribute_names;
  s.attributes.probs = config.attribute_probs;

  if (config.methods.empty()) throw ValidationError("methods", "no methods declared");
  std::set<std::string> ids;
  for (std::size_t k = 0; k < config.methods.size(); ++k) {
    const MethodConfig& mc = config.methods[k];
    const std::string field = indexed("methods", k);
    if (mc.id.empty()) throw ValidationError(field + ".id", "empty method id");
    if (!ids.insert(mc.id).second) throw ValidationError(field + ".id", "duplicate method id '" + mc.id + "'");
    if (mc.alphabet.empty()) throw ValidationError(field + ".alphabet", "alphabet is empty");
    if (mc.channel.size() != s.attributes.size())
      throw ValidationError(field + ".channel", "needs one row per attribute");
    for (std::size_t a = 0; a < mc.channel.size(); ++a) {
      if (mc.channel[a].size() != mc.alphabet.size())
        throw ValidationError(indexed(field + ".channel", a), "row length differs from alphabet size");
      check_distribution(mc.channel[a], indexed(field + ".channel", a));
    }
    s.methods.push_back(Method{mc.id, mc.alphabet, mc.channel});
  }

  std::vector<std::pair<MethodId, MethodId>> edges;
  for (std::size_t e = 0; e < config.edges.size(); ++e) {
    const auto& [hi, lo] = config.edges[e];
    MethodId h = kNoEffort, l = kNoEffort;
    for (std::size_t k = 0; k < s.methods.size(); ++k) {
      if (s.methods[k].id == hi) h = static_cast<MethodId>(k);
      if (s.methods[k].id == lo) l = static_cast<MethodId>(k);
    }
    if (h == kNoEffort || l == kNoEffort)
      throw ValidationError(indexed("poset.edges", e), "edge references unknown method");
    edges.emplace_back(h, l);
  }
  s.poset = MethodPoset(s.methods.size(), edges);

  if (config.agent_classes.empty()) throw ValidationError("agents", "no agent classes declared");
  for (std::size_t c = 0; c < config.agent_classes.size(); ++c) {
    const AgentClassConfig& ac = config.agent_classes[c];
    const std::string field = indexed("agents", c);
    if (ac.count < 1) throw ValidationError(field + ".count", "class must contain at least one agent");
    if (ac.costs.size() != s.methods.size())
      throw ValidationError(field + ".costs", "needs one cost per method");
    for (std::size_t m = 0; m < ac.costs.size(); ++m)
      if (!(ac.costs[m] > 0.0) || !std::isfinite(ac.costs[m]))
        throw ValidationError(indexed(field + ".costs", m), "effort must be positive");
    for (const auto& [hi, lo] : s.poset.closure_edges())
      if (ac.costs[hi] < ac.costs[lo])
        throw ValidationError(field + ".costs", "cost not monotone: " + s.methods[hi].id + " ≻ " +
                                                     s.methods[lo].id + " but cheaper");
    for (int k = 0; k < ac.count; ++k) {
      s.costs.effort.push_back(ac.costs);
      s.agent_class.push_back(ac.name);
    }
  }
  s.n_agents = static_cast<int>(s.costs.effort.size());
  return s;
}

StructureConfig peer_grading_config(int n_low, int n_high) {
  StructureConfig c;
  // Q_A over (quality, writing); length independent and fair.
  const double qw[2][2] = {{0.4, 0.1}, {0.1, 0.4}};
  std::vector<std::array<int, 3>> attrs;
  for (int q = 0; q < 2; ++q)
    for (int w = 0; w < 2; ++w)
      for (int l = 0; l < 2; ++l) {
        c.attribute_names.push_back("q" + std::to_string(q) + "w" + std::to_string(w) + "l" + std::to_string(l));
        c.attribute_probs.push_back(qw[q][w] * 0.5);
        attrs.push_back({q, w, l});
      }
  auto binary = [&](int component, double p_good, double p_bad) {
    std::vector<std::vector<double>> rows;
    for (const auto& a : attrs) {
      const double p = a[component] == 1 ? p_good : p_bad;
      rows.push_back({1.0 - p, p});
    }
    return rows;
  };
  const std::vector<std::string> faces = {"frown", "smile"};
  c.methods.push_back({"m_l", faces, binary(2, 1.0, 0.0)});
  c.methods.push_back({"m_w", faces, binary(1, 0.9, 0.1)});
  c.methods.push_back({"m_q", faces, binary(0, 0.7, 0.3)});
  c.edges = {{"m_q", "m_w"}, {"m_w", "m_l"}};
  if (n_low > 0) c.agent_classes.push_back({"low", n_low, {1.0, 2.0, 5.0}});
  if (n_high > 0) c.agent_classes.push_back({"high", n_high, {1.0, 4.0, 10.0}});
  return c;
}

StructureConfig small_binary_config(int n_low, int n_high) {
  StructureConfig c;
  c.attribute_names = {"bad", "good"};
  c.attribute_probs = {0.5, 0.5};
  const std::vector<std::string> faces = {"frown", "smile"};
  auto reader = [](double acc) { return std::vector<std::vector<double>>{{acc, 1.0 - acc}, {1.0 - acc, acc}}; };
  c.methods.push_back({"b1", faces, reader(0.6)});
  c.methods.push_back({"b2", faces, reader(0.75)});
  c.methods.push_back({"b3", faces, reader(0.9)});
  c.edges = {{"b3", "b2"}, {"b2", "b1"}};
  if (n_low > 0) c.agent_classes.push_back({"low", n_low, {0.01, 0.05, 0.1}});
  if (n_high > 0) c.agent_classes.push_back({"high", n_high, {0.01, 0.1, 0.5}});
  return c;
}

}  // namespace hmip
