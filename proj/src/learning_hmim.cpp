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

#include "hmip/learning_hmim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <span>

namespace hmip {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

double plug_in_mi(const std::vector<const AnswerVector*>& x, const std::vector<const AnswerVector*>& y,
                  const std::vector<const AnswerVector*>& z, FKind kind) {
  std::vector<std::span<const int>> columns;
  std::vector<std::size_t> gx, gy, gz;
  for (const auto* v : x) {
    gx.push_back(columns.size());
    columns.emplace_back(*v);
  }
  for (const auto* v : y) {
    gy.push_back(columns.size());
    columns.emplace_back(*v);
  }
  for (const auto* v : z) {
    gz.push_back(columns.size());
    columns.emplace_back(*v);
  }
  return grouped_mutual_information(empirical_joint(columns), gx, gy, gz, kind);
}

}  // namespace

void validate_submissions(const std::vector<SubmittedVector>& vectors) {
  if (vectors.empty()) throw ValidationError("vectors", "no answer vectors submitted");
  const std::size_t T = vectors[0].values.size();
  if (T < 2) throw ValidationError("vectors[0]", "answer vectors need at least two tasks");
  std::set<int> with_own, agents;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const auto& v = vectors[k];
    const std::string field = "vectors[" + std::to_string(k) + "]";
    if (v.values.size() != T) throw ValidationError(field, "answer vectors differ in length");
    for (Signal x : v.values)
      if (x < 0) throw ValidationError(field, "answer vectors must be complete (no empty entries)");
    agents.insert(v.agent);
    if (v.own && !with_own.insert(v.agent).second)
      throw ValidationError(field, "agent " + std::to_string(v.agent) + " submitted two own vectors");
  }
  for (int a : agents)
    if (!with_own.count(a)) throw ValidationError("agents[" + std::to_string(a) + "]", "no own answer vector");
}

std::vector<std::vector<double>> pairwise_distances(const std::vector<SubmittedVector>& vectors, FKind kind) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double mi = plug_in_mi({&vectors[a].values}, {&vectors[b].values}, {}, kind);
      d[a][b] = d[b][a] = mi > 0.0 ? 1.0 / mi : kInf;
    }
  return d;
}

ClusterSet cluster_from_distances(const std::vector<std::vector<double>>& distance, const std::vector<int>& include,
                                  double delta0) {
  if (!(delta0 > 0.0)) throw ValidationError("delta0", "must be > 0");
  const int n = static_cast<int>(distance.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t a = 0; a < include.size(); ++a)
    for (std::size_t b = a + 1; b < include.size(); ++b)
      if (distance[include[a]][include[b]] < delta0)
        parent[find_root(parent, include[a])] = find_root(parent, include[b]);

  ClusterSet out;
  out.cluster_of.assign(n, -1);
  std::vector<int> sorted = include;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> id_of_root(n, -1);
  for (int v : sorted) {
    const int r = find_root(parent, v);
    if (id_of_root[r] < 0) {
      id_of_root[r] = static_cast<int>(out.clusters.size());
      out.clusters.emplace_back();
    }
    out.cluster_of[v] = id_of_root[r];
    out.clusters[id_of_root[r]].push_back(v);
  }
  for (const auto& c : out.clusters) {
    bool clique = true;
    for (std::size_t a = 0; a < c.size() && clique; ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b)
        if (!(distance[c[a]][c[b]] < delta0)) {
          clique = false;
          break;
        }
    out.clique.push_back(clique);
  }
  return out;
}

ClusterSet cluster_vectors(const std::vector<SubmittedVector>& vectors, FKind kind, double delta0) {
  validate_submissions(vectors);
  std::vector<int> all(vectors.size());
  std::iota(all.begin(), all.end(), 0);
  return cluster_from_distances(pairwise_distances(vectors, kind), all, delta0);
}

InferredHierarchy infer_hierarchy(const ClusterSet& clusters, const std::vector<SubmittedVector>& vectors) {
  InferredHierarchy h;
  const std::size_t n = clusters.clusters.size();
  std::vector<std::pair<MethodId, MethodId>> edges;
  std::vector<std::vector<int>> witnesses(n * n);
  for (std::size_t a = 0; a < vectors.size(); ++a) {
    if (!vectors[a].own || clusters.cluster_of[a] < 0) continue;
    for (std::size_t b = 0; b < vectors.size(); ++b) {
      if (b == a || vectors[b].agent != vectors[a].agent || clusters.cluster_of[b] < 0) continue;
      const int hi = clusters.cluster_of[a], lo = clusters.cluster_of[b];
      if (hi == lo) {
        ++h.self_evidence;
        continue;
      }
      h.evidence.push_back({hi, lo, vectors[a].agent});
      edges.push_back({hi, lo});
      witnesses[hi * n + lo].push_back(vectors[a].agent);
    }
  }
  try {
    h.order = MethodPoset(n, edges);
  } catch (const ValidationError&) {
    // Name the agents behind every edge that lies on a cycle.
    std::vector<char> reach(n * n, 0);
    for (const auto& [hi, lo] : edges) reach[hi * n + lo] = 1;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i * n + k] && reach[k * n + j]) reach[i * n + j] = 1;
    std::set<int> who;
    for (const auto& [hi, lo] : edges)
      if (reach[lo * n + hi])
        for (int agent : witnesses[hi * n + lo]) who.insert(agent);
    throw HierarchyCycleError("ordering evidence between clusters is cyclic", {who.begin(), who.end()});
  }
  for (MethodId m : h.order.maximal()) h.maximal.push_back(m);
  for (std::size_t c = 0; c < n; ++c) {
    h.depth.push_back(h.order.depth(static_cast<MethodId>(c)));
    bool related = false;
    for (std::size_t d = 0; d < n && !related; ++d)
      related = h.order.dominates(static_cast<MethodId>(c), static_cast<MethodId>(d)) ||
                h.order.dominates(static_cast<MethodId>(d), static_cast<MethodId>(c));
    h.isolated.push_back(!related && clusters.clusters[c].size() == 1);
  }
  return h;
}

double RuleL::alpha(int depth) const {
  if (kind == Kind::kByDepth) {
    if (by_depth.empty()) throw ValidationError("rule.by_depth", "no coefficients given");
    return by_depth[std::min<std::size_t>(depth, by_depth.size() - 1)];
  }
  return scale * std::pow(base, depth);
}

LearningMechanism::LearningMechanism(std::vector<SubmittedVector> vectors, FKind kind, double delta0)
    : vectors_(std::move(vectors)), kind_(kind), delta0_(delta0) {
  validate_submissions(vectors_);
  if (!(delta0 > 0.0)) throw ValidationError("delta0", "must be > 0");
  distance_ = pairwise_distances(vectors_, kind_);
}

std::vector<int> LearningMechanism::agents() const {
  std::set<int> a;
  for (const auto& v : vectors_) a.insert(v.agent);
  return {a.begin(), a.end()};
}

LearningResult LearningMechanism::learn(std::uint64_t seed) const {
  LearningResult out;
  const std::size_t T = vectors_[0].values.size();
  if (T < 1000)
    out.warnings.push_back("only " + std::to_string(T) + " tasks: plug-in MI estimates are noisy below 1000");
  std::vector<int> all(vectors_.size());
  std::iota(all.begin(), all.end(), 0);
  out.clusters = cluster_from_distances(distance_, all, delta0_);
  out.hierarchy = infer_hierarchy(out.clusters, vectors_);
  for (std::size_t c = 0; c < out.clusters.clique.size(); ++c)
    if (!out.clusters.clique[c])
      out.warnings.push_back("cluster " + std::to_string(c) + " is not a clique at this delta0");

  Rng rng(mix_seed(seed, ~std::uint64_t{0}));
  const bool all_isolated = std::all_of(out.hierarchy.maximal.begin(), out.hierarchy.maximal.end(),
                                        [&](int c) { return out.hierarchy.isolated[c]; });
  for (int c : out.hierarchy.maximal) {
    if (out.hierarchy.isolated[c] && !all_isolated) continue;
    const auto& members = out.clusters.clusters[c];
    out.maximal_vectors.push_back(members[uniform_index(rng, members.size())]);
  }
  return out;
}

LearningAgentResult LearningMechanism::pay(int agent, const RuleL& rule, std::uint64_t seed) const {
  LearningAgentResult r;
  r.agent = agent;
  std::vector<int> others;
  std::vector<const AnswerVector*> own;
  for (std::size_t k = 0; k < vectors_.size(); ++k) {
    if (vectors_[k].agent != agent) {
      others.push_back(static_cast<int>(k));
    } else if (vectors_[k].own) {
      own.insert(own.begin(), &vectors_[k].values);
    } else {
      own.push_back(&vectors_[k].values);
    }
  }
  if (others.empty() || own.empty()) return r;
  const ClusterSet cs = cluster_from_distances(distance_, others, delta0_);
  const InferredHierarchy h = infer_hierarchy(cs, vectors_);
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(agent)));
  std::vector<int> rep(cs.clusters.size());
  for (std::size_t c = 0; c < cs.clusters.size(); ++c) rep[c] = cs.clusters[c][uniform_index(rng, cs.clusters[c].size())];
  r.clusters = static_cast<int>(cs.clusters.size());
  for (std::size_t c = 0; c < cs.clusters.size(); ++c) {
    std::vector<const AnswerVector*> given;
    for (MethodId l : h.order.strictly_below(static_cast<MethodId>(c))) given.push_back(&vectors_[rep[l]].values);
    LearningTerm term;
    term.cluster = static_cast<int>(c);
    term.representative = rep[c];
    term.alpha = rule.alpha(h.depth[c]);
    term.mi = plug_in_mi(own, {&vectors_[rep[c]].values}, given, kind_);
    r.payment += term.alpha * term.mi;
    r.terms.push_back(term);
  }
  return r;
}

LearningResult learning_payment(const std::vector<SubmittedVector>& vectors, const RuleL& rule, FKind kind,
                                double delta0, std::uint64_t seed) {
  const LearningMechanism mech(vectors, kind, delta0);
  LearningResult out = mech.learn(seed);
  for (int agent : mech.agents()) out.agents.push_back(mech.pay(agent, rule, seed));
  return out;
}

double noise_floor(FKind kind, std::size_t kx, std::size_t ky, std::size_t tasks) {
  const double t = static_cast<double>(tasks);
  if (kind == FKind::kKl) return 5.0 * static_cast<double>((kx - 1) * (ky - 1)) / t;
  return 4.0 * std::sqrt(static_cast<double>(kx * ky) / t);
}

DeltaSuggestion suggest_delta0(const std::vector<SubmittedVector>& vectors, FKind kind) {
  validate_submissions(vectors);
  const auto d = pairwise_distances(vectors, kind);
  const std::size_t T = vectors[0].values.size();
  std::vector<std::size_t> alphabet;
  for (const auto& v : vectors) alphabet.push_back(static_cast<std::size_t>(*std::max_element(v.values.begin(), v.values.end())) + 1);
  DeltaSuggestion out;
  std::vector<double> mi;
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      const double v = std::isfinite(d[a][b]) ? 1.0 / d[a][b] : 0.0;
      if (v > noise_floor(kind, std::max<std::size_t>(alphabet[a], 2), std::max<std::size_t>(alphabet[b], 2), T)) {
        mi.push_back(v);
      } else {
        ++out.below_noise;
      }
    }
  if (mi.size() < 2) throw ValidationError("vectors", "need at least two informative pairs to place delta0");
  std::sort(mi.begin(), mi.end(), std::greater<>());
  std::size_t cut = 0;
  double best = -1.0;
  for (std::size_t k = 0; k + 1 < mi.size(); ++k) {
    const double gap = std::log(mi[k] / mi[k + 1]);
    if (gap > best) {
      best = gap;
      cut = k;
    }
  }
  out.delta0 = 1.0 / std::sqrt(mi[cut] * mi[cut + 1]);
  out.mi_above = mi[cut];
  out.mi_below = mi[cut + 1];
  return out;
}

GapReport exact_gap(const InformationStructure& s, FKind kind) {
  GapReport g;
  g.within_min = kInf;
  g.across_max = 0.0;
  const auto n = static_cast<MethodId>(s.num_methods());
  for (MethodId a = 0; a < n; ++a)
    for (MethodId b = a; b < n; ++b) {
      const double mi = mutual_information(joint_distribution(s, {{0, a}, {1, b}}), kind);
      if (a == b) {
        if (mi < g.within_min) {
          g.within_min = mi;
          g.weakest_within = a;
        }
      } else if (mi > g.across_max) {
        g.across_max = mi;
        g.across_a = a;
        g.across_b = b;
      }
    }
  g.holds = g.within_min > g.across_max;
  g.delta0 = g.across_max > 0.0 ? 1.0 / std::sqrt(g.within_min * g.across_max) : 2.0 / g.within_min;
  return g;
}

RecoveryReport compare_to_truth(const LearningResult& learned, const std::vector<SubmittedVector>& vectors,
                                const MethodPoset& truth) {
  RecoveryReport r;
  const auto& cl = learned.clusters.clusters;
  const auto& h = learned.hierarchy;
  const bool all_isolated = std::all_of(h.isolated.begin(), h.isolated.end(), [](bool b) { return b; });
  std::vector<int> considered;
  std::vector<MethodId> method_of(cl.size(), kNoEffort);
  for (std::size_t c = 0; c < cl.size(); ++c) {
    std::set<MethodId> labels;
    for (int v : cl[c]) labels.insert(vectors[v].truth);
    if (h.isolated[c] && !all_isolated) {
      if (*labels.begin() != kNoEffort)
        r.problems.push_back("informative vector " + std::to_string(cl[c][0]) + " left in an isolated cluster");
      continue;
    }
    considered.push_back(static_cast<int>(c));
    if (labels.size() != 1 || *labels.begin() == kNoEffort) {
      r.problems.push_back("cluster " + std::to_string(c) + " mixes vectors of different or no methods");
      continue;
    }
    method_of[c] = *labels.begin();
  }
  std::set<MethodId> seen;
  for (int c : considered)
    if (method_of[c] != kNoEffort && !seen.insert(method_of[c]).second)
      r.problems.push_back("method " + std::to_string(method_of[c]) + " split across several clusters");
  for (int a : considered)
    for (int b : considered) {
      if (a == b || method_of[a] == kNoEffort || method_of[b] == kNoEffort) continue;
      const bool learned_rel = h.order.dominates(a, b);
      const bool true_rel = truth.dominates(method_of[a], method_of[b]);
      if (learned_rel != true_rel)
        r.problems.push_back("order between clusters " + std::to_string(a) + " and " + std::to_string(b) +
                             (learned_rel ? " learned but false" : " missing"));
    }
  const std::vector<MethodId> top = truth.maximal();
  r.maximal_from_top = !learned.maximal_vectors.empty();
  for (int v : learned.maximal_vectors)
    if (!vectors[v].own || std::find(top.begin(), top.end(), vectors[v].truth) == top.end())
      r.maximal_from_top = false;
  if (!r.maximal_from_top) r.problems.push_back("emitted maximal vectors do not all come from top-method performers");
  r.exact = r.problems.empty();
  return r;
}

std::vector<SubmittedVector> truthful_submissions(const InformationStructure& s, const SignalTable& world,
                                                  const std::vector<MethodId>& performed) {
  std::vector<SubmittedVector> out;
  for (int i = 0; i < world.agents; ++i) {
    if (performed.at(i) == kNoEffort) continue;
    auto add = [&](MethodId m, bool own) {
      SubmittedVector v{i, own, s.methods[m].id, m, AnswerVector(world.tasks)};
      for (int t = 0; t < world.tasks; ++t) v.values[t] = world.at(t, i, m);
      out.push_back(std::move(v));
    };
    add(performed[i], true);
    for (MethodId m : s.poset.strictly_below(performed[i])) add(m, false);
  }
  return out;
}

}  // namespace hmip
