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

#ifndef HMIP_MULTI_HMIM_HPP_
#define HMIP_MULTI_HMIM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hmip/paradigm.hpp"

namespace hmip {

// Length-T answers; kEmpty marks a missing entry.
using AnswerVector = std::vector<Signal>;

// Full record of one Corr call. Task indices are 0-based positions in the
// vectors handed to the outermost call.
struct CorrAudit {
  bool success = false;
  double score = 0.0;
  // Conditional branch only: C, the drawn t_C*, and the slice D.
  bool conditioned = false;
  std::vector<int> c;
  int t_c_star = -1;
  std::vector<int> d;
  // Reward tasks and their draws, aligned.
  std::vector<int> b;
  std::vector<int> t1;
  std::vector<int> t2;
  std::vector<int> per_task;

  double mean_per_reward_task() const { return b.empty() ? 0.0 : score / static_cast<double>(b.size()); }
};

// Unconditional Corr(v1; v2). For each reward task t_B a fresh t1 is drawn
// uniformly among v1's non-empty entries and a fresh t2 != t1 among v2's.
CorrAudit corr(const AnswerVector& v1, const AnswerVector& v2, Rng& rng);
CorrAudit corr(const AnswerVector& v1, const AnswerVector& v2, std::uint64_t seed);

// Corr(v1; v2 | V): restricts to the tasks agreeing with a random t_C* on
// every conditioning vector, then runs the unconditional procedure.
CorrAudit corr_conditional(const AnswerVector& v1, const AnswerVector& v2, const std::vector<AnswerVector>& given,
                           Rng& rng);
CorrAudit corr_conditional(const AnswerVector& v1, const AnswerVector& v2, const std::vector<AnswerVector>& given,
                           std::uint64_t seed);

// Reports for one batch of tasks. claimed(i, t) is the method agent i says
// she performed on t (kNoEffort: no report). signal(i, t, m) may be kEmpty
// except for the claimed method.
class MultiReportSet {
 public:
  MultiReportSet(int agents, int tasks, int methods);

  int agents() const { return agents_; }
  int tasks() const { return tasks_; }
  int methods() const { return methods_; }

  bool assigned(int i, int t) const { return assigned_[idx(i, t)] != 0; }
  void set_assigned(int i, int t, bool on) { assigned_[idx(i, t)] = on ? 1 : 0; }
  MethodId claimed(int i, int t) const { return claimed_[idx(i, t)]; }
  void set_claimed(int i, int t, MethodId m) { claimed_[idx(i, t)] = m; }
  Signal signal(int i, int t, MethodId m) const { return signals_[idx(i, t) * methods_ + m]; }
  void set_signal(int i, int t, MethodId m, Signal s) { signals_[idx(i, t) * methods_ + m] = s; }

  int assigned_count(int i) const;

  // Throws ValidationError naming the first offending entry.
  void validate(const InformationStructure& s) const;

  friend bool operator==(const MultiReportSet&, const MultiReportSet&) = default;

 private:
  std::size_t idx(int i, int t) const { return static_cast<std::size_t>(i) * tasks_ + t; }
  int agents_;
  int tasks_;
  int methods_;
  std::vector<char> assigned_;
  std::vector<MethodId> claimed_;
  std::vector<Signal> signals_;
};

// Honest reports: agent i claims performed[i] on every task and reports
// every level below it. kNoEffort leaves the agent's rows empty but still
// assigned.
MultiReportSet truthful_reports(const InformationStructure& s, const SignalTable& world,
                                const std::vector<MethodId>& performed);

// Every agent gets `batch` distinct tasks drawn without replacement;
// batch <= 0 or >= tasks assigns everything. Returns the mask [agent][task].
std::vector<std::vector<bool>> assign_batches(int agents, int tasks, int batch, std::uint64_t seed);

struct LevelAudit {
  MethodId method = 0;
  // peer[t]: agent whose reports fill the peer and conditioning vectors at
  // task t, or -1 when nobody qualifies.
  std::vector<int> peer;
  CorrAudit corr;
  double payment = 0.0;  // 2 α_m · corr.score
};

struct AgentPayment {
  int agent = 0;
  double total = 0.0;
  std::vector<LevelAudit> levels;
};

struct MultiPaymentResult {
  std::vector<AgentPayment> agents;
};

// Own vector ψ̂_i^m: agent i's reported signal for m wherever present.
AnswerVector own_vector(const MultiReportSet& r, int agent, MethodId m);

// Pays Σ_m 2 α_m Corr(ψ̂_i^m; ψ̂_{-i}^m | {ψ̂_{-i}^{m'}}_{m' ≺ m}). For each
// (i, t, m) the peer is a uniformly random agent j != i with claimed method
// ⪰ m who reported m on t; the conditioning entries come from that same j.
// Agent i's draws use mix_seed(seed, i), so payments do not depend on the
// order in which agents are processed.
MultiPaymentResult multi_hmim_payment(const InformationStructure& s, const MultiReportSet& reports,
                                      const Coefficients& alpha, std::uint64_t seed);

// Exact expected payment per task and per unit α_m that a truthful performer
// of p earns at level m ⪯ p when every level has a truthful peer on every
// task. Algorithm 1 sums over the slice D, so a conditional level pays
//   2/T Σ_z Pr[z] (1 + (T−1) Pr[z] − (1 − Pr[z])^(T−1)) agree(z),
// with agree(z) = Σ_σ Pr[σ_i = σ_j = σ | z] − Pr[σ_i = σ | z] Pr[σ_j = σ | z],
// and an unconditional level pays 2 agree. kind is kTvd.
AoiTable multi_level_terms(const InformationStructure& s, int tasks);

struct CorrelationViolation {
  std::string assumption;  // "positive-correlation" or "conditional-independence"
  MethodId method = 0;
  MethodId performed = kNoEffort;  // conditional independence only
  std::vector<MethodId> given;     // conditioning methods of the peer
  std::vector<int> given_values;
  int sigma = 0;
  int sigma_other = -1;  // σ' for the second inequality / own other-signal state
  double lhs = 0.0;
  double rhs = 0.0;
  std::string describe(const InformationStructure& s) const;
};

struct CorrelationReport {
  std::vector<CorrelationViolation> positive_correlation;
  std::vector<CorrelationViolation> conditional_independence;
  int cells_checked = 0;
  bool ok() const { return positive_correlation.empty() && conditional_independence.empty(); }
};

// Exhaustive check of the positive-correlation inequalities, over every
// subset of strictly lower peer methods and every conditioning value with
// positive probability, plus the conditional-independence equalities for
// every performed method (tolerance 1e-12).
CorrelationReport check_positive_correlation(const InformationStructure& s, std::uint64_t cap = kDefaultStateCap);

}  // namespace hmip

#endif  // HMIP_MULTI_HMIM_HPP_
