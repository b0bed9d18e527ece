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

#ifndef HMIP_LEARNING_HMIM_HPP_
#define HMIP_LEARNING_HMIM_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmip/multi_hmim.hpp"

namespace hmip {

// One answer vector as submitted. `label` is the agent's own name for the
// method and is ignored; `truth` is ground truth for evaluation only
// (kNoEffort for uninformative vectors) and is never read by the mechanism.
struct SubmittedVector {
  int agent = 0;
  bool own = false;
  std::string label;
  MethodId truth = kNoEffort;
  AnswerVector values;
};

// Checks one own vector per participating agent, equal lengths T >= 2, and
// non-negative entries.
void validate_submissions(const std::vector<SubmittedVector>& vectors);

// Symmetric matrix of 1 / plug-in MI^f; +inf where the estimate is 0.
std::vector<std::vector<double>> pairwise_distances(const std::vector<SubmittedVector>& vectors, FKind kind);

struct ClusterSet {
  // Member indices (into the submitted list) per cluster, each ascending;
  // clusters ordered by first member.
  std::vector<std::vector<int>> clusters;
  std::vector<int> cluster_of;  // -1 for vectors left out
  // False when a component joined vectors whose own distance is >= δ₀.
  std::vector<bool> clique;
};

// Connected components of the graph with an edge wherever distance < δ₀.
ClusterSet cluster_vectors(const std::vector<SubmittedVector>& vectors, FKind kind, double delta0);
// Same, from precomputed distances, using only the listed vectors.
ClusterSet cluster_from_distances(const std::vector<std::vector<double>>& distance, const std::vector<int>& include,
                                  double delta0);

struct OrderEvidence {
  int higher = 0;  // cluster ids
  int lower = 0;
  int agent = 0;
};

struct InferredHierarchy {
  MethodPoset order;  // over cluster ids
  std::vector<OrderEvidence> evidence;
  // An agent whose provided vector landed in her own vector's cluster says
  // nothing about the order; such pairs are counted and skipped.
  int self_evidence = 0;
  std::vector<int> maximal;
  std::vector<int> depth;
  // Singleton clusters with no order relation, e.g. a lone noise vector.
  std::vector<bool> isolated;
};

// Raised when the ordering evidence is cyclic; lists the agents whose
// reports close the cycle.
class HierarchyCycleError : public std::runtime_error {
 public:
  HierarchyCycleError(const std::string& what, std::vector<int> witnesses)
      : std::runtime_error(what), witnesses_(std::move(witnesses)) {}
  const std::vector<int>& witnesses() const { return witnesses_; }

 private:
  std::vector<int> witnesses_;
};

InferredHierarchy infer_hierarchy(const ClusterSet& clusters, const std::vector<SubmittedVector>& vectors);

// Rule L: coefficient per learned cluster from its depth in the hierarchy.
// Geometric: scale · base^depth. By depth: by_depth[depth], the last entry
// repeating for deeper clusters.
struct RuleL {
  enum class Kind { kGeometric, kByDepth };
  Kind kind = Kind::kGeometric;
  double scale = 1.0;
  double base = 10.0;
  std::vector<double> by_depth;

  double alpha(int depth) const;
};

struct LearningTerm {
  int cluster = 0;         // in the leave-one-out clustering
  int representative = 0;  // submitted-vector index
  double alpha = 0.0;
  double mi = 0.0;
};

struct LearningAgentResult {
  int agent = 0;
  double payment = 0.0;
  int clusters = 0;
  std::vector<LearningTerm> terms;
};

struct LearningResult {
  ClusterSet clusters;          // using everyone
  InferredHierarchy hierarchy;  // using everyone
  // One representative per maximal, non-isolated cluster (all maximal
  // clusters when every cluster is isolated).
  std::vector<int> maximal_vectors;
  std::vector<LearningAgentResult> agents;  // ascending agent id
  std::vector<std::string> warnings;
};

// Submissions plus their pairwise distances, computed once. pay() learns the
// structure without `agent` and pays her; it throws HierarchyCycleError only
// when the other agents' evidence is cyclic.
class LearningMechanism {
 public:
  LearningMechanism(std::vector<SubmittedVector> vectors, FKind kind, double delta0);

  const std::vector<SubmittedVector>& vectors() const { return vectors_; }
  const std::vector<std::vector<double>>& distances() const { return distance_; }
  std::vector<int> agents() const;

  LearningAgentResult pay(int agent, const RuleL& rule, std::uint64_t seed) const;
  // Full-population clustering, hierarchy and maximal vectors (no payments).
  LearningResult learn(std::uint64_t seed) const;

 private:
  std::vector<SubmittedVector> vectors_;
  FKind kind_;
  double delta0_;
  std::vector<std::vector<double>> distance_;
};

// Leave-one-out learning and plug-in payment Σ_m α_m MI^f(own vectors;
// rep_m | reps of clusters below m). Representatives are uniform draws with
// mix_seed(seed, agent); the full-population outputs use mix_seed(seed, -1).
LearningResult learning_payment(const std::vector<SubmittedVector>& vectors, const RuleL& rule, FKind kind,
                                double delta0, std::uint64_t seed);

struct DeltaSuggestion {
  double delta0 = 0.0;
  double mi_above = 0.0;  // smallest pairwise MI kept linked
  double mi_below = 0.0;  // largest pairwise MI left unlinked
  int below_noise = 0;    // pairs ignored as indistinguishable from 0
};

// Rough plug-in MI level of independent sequences: 10x the first-order bias
// (kx-1)(ky-1)/(2T) for KL, 4 sqrt(kx ky / T) for TVD.
double noise_floor(FKind kind, std::size_t kx, std::size_t ky, std::size_t tasks);

// Drops pairs under the noise floor, splits the remaining sorted pairwise
// MI values at their largest log-ratio gap, and returns the geometric
// midpoint as δ₀.
DeltaSuggestion suggest_delta0(const std::vector<SubmittedVector>& vectors, FKind kind);

// The δ₀-gap condition evaluated exactly from a declared structure: every
// same-method pair of distinct agents must beat every cross-method pair.
// Cross pairs include one agent's own vectors, which clustering also sees.
struct GapReport {
  bool holds = false;
  double within_min = 0.0;
  double across_max = 0.0;
  MethodId weakest_within = 0;
  MethodId across_a = 0;
  MethodId across_b = 0;
  double delta0 = 0.0;  // 1 / sqrt(within_min · across_max)
};
GapReport exact_gap(const InformationStructure& s, FKind kind);

// Ground-truth comparison used by tests and the acceptance run.
struct RecoveryReport {
  bool exact = false;
  bool maximal_from_top = false;
  std::vector<std::string> problems;
};
RecoveryReport compare_to_truth(const LearningResult& learned, const std::vector<SubmittedVector>& vectors,
                                const MethodPoset& truth);

// Honest submissions: each agent's own vector for performed[i] plus every
// lower level. Agents with kNoEffort submit nothing.
std::vector<SubmittedVector> truthful_submissions(const InformationStructure& s, const SignalTable& world,
                                                  const std::vector<MethodId>& performed);

}  // namespace hmip

#endif  // HMIP_LEARNING_HMIM_HPP_
