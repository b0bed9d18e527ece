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

#include "hmip/joint_distribution.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace hmip {
namespace {

constexpr double kJointTol = 1e-10;

}  // namespace

JointDistribution::JointDistribution(std::vector<std::string> names, std::vector<std::size_t> sizes,
                                     std::vector<double> table)
    : names_(std::move(names)), sizes_(std::move(sizes)), table_(std::move(table)) {
  if (names_.size() != sizes_.size())
    throw std::invalid_argument("JointDistribution: names and sizes differ in length");
  std::size_t states = 1;
  for (std::size_t s : sizes_) {
    if (s == 0) throw std::invalid_argument("JointDistribution: variable with empty alphabet");
    states *= s;
  }
  if (states != table_.size())
    throw std::invalid_argument("JointDistribution: table has " + std::to_string(table_.size()) +
                                " cells, expected " + std::to_string(states));
  double total = 0.0;
  for (double p : table_) {
    if (!(p >= -kJointTol)) throw std::invalid_argument("JointDistribution: negative cell");
    total += p;
  }
  if (std::abs(total - 1.0) > kJointTol)
    throw std::invalid_argument("JointDistribution: table sums to " + std::to_string(total));
}

std::size_t JointDistribution::index_of(std::span<const int> assignment) const {
  if (assignment.size() != sizes_.size()) throw std::invalid_argument("index_of: arity mismatch");
  std::size_t idx = 0;
  for (std::size_t v = 0; v < sizes_.size(); ++v) {
    if (assignment[v] < 0 || static_cast<std::size_t>(assignment[v]) >= sizes_[v])
      throw std::out_of_range("index_of: value outside alphabet of " + names_[v]);
    idx = idx * sizes_[v] + static_cast<std::size_t>(assignment[v]);
  }
  return idx;
}

void JointDistribution::decode(std::size_t index, std::span<int> assignment) const {
  for (std::size_t v = sizes_.size(); v-- > 0;) {
    assignment[v] = static_cast<int>(index % sizes_[v]);
    index /= sizes_[v];
  }
}

JointDistribution JointDistribution::marginal(const std::vector<std::size_t>& keep) const {
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(keep.size());
  for (std::size_t v : keep) groups.push_back({v});
  return grouped(groups);
}

JointDistribution JointDistribution::grouped(const std::vector<std::vector<std::size_t>>& groups) const {
  std::vector<char> used(sizes_.size(), 0);
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) {
    std::string name;
    std::size_t size = 1;
    for (std::size_t v : g) {
      if (v >= sizes_.size()) throw std::out_of_range("grouped: variable index out of range");
      if (used[v]) throw std::invalid_argument("grouped: variable listed twice");
      used[v] = 1;
      name += (name.empty() ? "" : "+") + names_[v];
      size *= sizes_[v];
    }
    names.push_back(name.empty() ? "const" : name);
    sizes.push_back(size);
  }
  std::size_t states = 1;
  for (std::size_t s : sizes) states *= s;
  std::vector<double> table(states, 0.0);

  std::vector<int> a(sizes_.size());
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    if (table_[idx] == 0.0) continue;
    decode(idx, a);
    std::size_t out = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      std::size_t composite = 0;
      for (std::size_t v : groups[gi]) composite = composite * sizes_[v] + static_cast<std::size_t>(a[v]);
      out = out * sizes[gi] + composite;
    }
    table[out] += table_[idx];
  }
  JointDistribution j;
  j.names_ = std::move(names);
  j.sizes_ = std::move(sizes);
  j.table_ = std::move(table);
  return j;
}

JointDistribution JointDistribution::through_channel(const std::vector<std::size_t>& inputs,
                                                     const std::vector<std::vector<double>>& channel,
                                                     const std::string& output_name) const {
  std::vector<std::size_t> rest;
  std::vector<char> is_input(sizes_.size(), 0);
  for (std::size_t v : inputs) is_input.at(v) = 1;
  for (std::size_t v = 0; v < sizes_.size(); ++v)
    if (!is_input[v]) rest.push_back(v);

  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t v : rest) groups.push_back({v});
  groups.push_back(inputs);
  const JointDistribution merged = grouped(groups);
  const std::size_t in_states = merged.sizes_.back();
  if (channel.size() != in_states)
    throw std::invalid_argument("through_channel: channel has " + std::to_string(channel.size()) +
                                " rows, expected " + std::to_string(in_states));
  const std::size_t out_states = channel.empty() ? 0 : channel.front().size();
  for (const auto& row : channel)
    if (row.size() != out_states) throw std::invalid_argument("through_channel: ragged channel");

  std::vector<std::string> names(merged.names_.begin(), merged.names_.end() - 1);
  std::vector<std::size_t> sizes(merged.sizes_.begin(), merged.sizes_.end() - 1);
  names.push_back(output_name);
  sizes.push_back(out_states);
  std::size_t prefix_states = 1;
  for (std::size_t k = 0; k + 1 < merged.sizes_.size(); ++k) prefix_states *= merged.sizes_[k];
  std::vector<double> table(prefix_states * out_states, 0.0);
  for (std::size_t pre = 0; pre < prefix_states; ++pre)
    for (std::size_t in = 0; in < in_states; ++in) {
      const double p = merged.table_[pre * in_states + in];
      if (p == 0.0) continue;
      for (std::size_t o = 0; o < out_states; ++o) table[pre * out_states + o] += p * channel[in][o];
    }
  return JointDistribution(std::move(names), std::move(sizes), std::move(table));
}

void JointDistribution::write_csv(std::ostream& out) const {
  for (const auto& n : names_) out << n << ',';
  out << "probability\n";
  std::vector<int> a(sizes_.size());
  char buf[64];
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    decode(idx, a);
    for (int v : a) out << v << ',';
    std::snprintf(buf, sizeof buf, "%.17g", table_[idx]);
    out << buf << '\n';
  }
}

JointDistribution joint_distribution(const InformationStructure& s, const std::vector<SignalVar>& vars,
                                     std::uint64_t cap) {
  std::vector<std::string> names;
  std::vector<std::size_t> sizes;
  std::uint64_t states = 1;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const SignalVar& v = vars[k];
    if (v.agent < 0 || v.agent >= s.n_agents)
      throw std::invalid_argument("joint_distribution: agent index out of range");
    if (v.method < 0 || static_cast<std::size_t>(v.method) >= s.num_methods())
      throw std::invalid_argument("joint_distribution: method index out of range");
    for (std::size_t j = 0; j < k; ++j)
      if (vars[j] == v) throw std::invalid_argument("joint_distribution: variable listed twice");
    const std::size_t n = s.methods[v.method].alphabet_size();
    if (states > cap / n) throw StateSpaceError(states * n, cap);
    states *= n;
    names.push_back("a" + std::to_string(v.agent) + ":" + s.methods[v.method].id);
    sizes.push_back(n);
  }

  std::vector<double> table(states, 0.0);
  std::vector<double> partial;
  for (std::size_t a = 0; a < s.attributes.size(); ++a) {
    const double qa = s.attributes.probs[a];
    if (qa == 0.0) continue;
    partial.assign(1, qa);
    for (const SignalVar& v : vars) {
      const auto& row = s.methods[v.method].channel[a];
      std::vector<double> next(partial.size() * row.size());
      for (std::size_t p = 0; p < partial.size(); ++p)
        for (std::size_t sg = 0; sg < row.size(); ++sg) next[p * row.size() + sg] = partial[p] * row[sg];
      partial.swap(next);
    }
    for (std::size_t k = 0; k < states; ++k) table[k] += partial[k];
  }
  return JointDistribution(std::move(names), std::move(sizes), std::move(table));
}

SignalTable sample_world(const InformationStructure& s, int tasks, Rng& rng) {
  if (tasks < 1) throw std::invalid_argument("sample_world: need at least one task");
  SignalTable t;
  t.tasks = tasks;
  t.agents = s.n_agents;
  t.methods = static_cast<int>(s.num_methods());
  t.attribute.resize(tasks);
  t.signals.resize(static_cast<std::size_t>(tasks) * t.agents * t.methods);
  for (int task = 0; task < tasks; ++task) {
    const int a = static_cast<int>(sample_discrete(rng, s.attributes.probs));
    t.attribute[task] = a;
    for (int i = 0; i < t.agents; ++i)
      for (int m = 0; m < t.methods; ++m)
        t.at(task, i, m) = static_cast<Signal>(sample_discrete(rng, s.methods[m].channel[a]));
  }
  return t;
}

SignalTable sample_world(const InformationStructure& s, int tasks, std::uint64_t seed) {
  Rng rng(seed);
  return sample_world(s, tasks, rng);
}

}  // namespace hmip
