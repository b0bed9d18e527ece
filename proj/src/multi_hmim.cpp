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

#include "hmip/multi_hmim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hmip {
namespace {

std::vector<int> non_empty(const AnswerVector& v) {
  std::vector<int> out;
  for (std::size_t t = 0; t < v.size(); ++t)
    if (v[t] != kEmpty) out.push_back(static_cast<int>(t));
  return out;
}

std::vector<MethodId> subset_of(const std::vector<MethodId>& items, unsigned mask) {
  std::vector<MethodId> out;
  for (std::size_t k = 0; k < items.size(); ++k)
    if (mask & (1u << k)) out.push_back(items[k]);
  return out;
}

}  // namespace

CorrAudit corr(const AnswerVector& v1, const AnswerVector& v2, Rng& rng) {
  if (v1.size() != v2.size()) throw std::invalid_argument("corr: answer vectors differ in length");
  CorrAudit audit;
  const std::vector<int> ne1 = non_empty(v1);
  const std::vector<int> ne2 = non_empty(v2);
  if (ne1.size() < 2 || ne2.size() < 2) return audit;
  for (std::size_t t = 0; t < v1.size(); ++t)
    if (v1[t] != kEmpty && v2[t] != kEmpty) audit.b.push_back(static_cast<int>(t));
  if (audit.b.empty()) return audit;

  for (int tb : audit.b) {
    const int t1 = ne1[uniform_index(rng, ne1.size())];
    int t2;
    const auto pos = std::lower_bound(ne2.begin(), ne2.end(), t1);
    if (pos != ne2.end() && *pos == t1) {
      std::size_t k = uniform_index(rng, ne2.size() - 1);
      if (k >= static_cast<std::size_t>(pos - ne2.begin())) ++k;
      t2 = ne2[k];
    } else {
      t2 = ne2[uniform_index(rng, ne2.size())];
    }
    const int value = static_cast<int>(v1[tb] == v2[tb]) - static_cast<int>(v1[t1] == v2[t2]);
    audit.t1.push_back(t1);
    audit.t2.push_back(t2);
    audit.per_task.push_back(value);
    audit.score += value;
  }
  audit.success = true;
  return audit;
}

CorrAudit corr(const AnswerVector& v1, const AnswerVector& v2, std::uint64_t seed) {
  Rng rng(seed);
  return corr(v1, v2, rng);
}

CorrAudit corr_conditional(const AnswerVector& v1, const AnswerVector& v2, const std::vector<AnswerVector>& given,
                           Rng& rng) {
  if (v1.size() != v2.size()) throw std::invalid_argument("corr_conditional: answer vectors differ in length");
  for (const auto& v : given)
    if (v.size() != v1.size()) throw std::invalid_argument("corr_conditional: conditioning vector length differs");
  // No conditioning vectors: the plain procedure, without spending a draw on t_C*.
  if (given.empty()) return corr(v1, v2, rng);

  std::vector<int> c;
  for (std::size_t t = 0; t < v1.size(); ++t)
    if (std::all_of(given.begin(), given.end(), [&](const AnswerVector& v) { return v[t] != kEmpty; }))
      c.push_back(static_cast<int>(t));
  if (c.empty()) return corr(v1, v2, rng);

  const int star = c[uniform_index(rng, c.size())];
  std::vector<int> d;
  for (std::size_t t = 0; t < v1.size(); ++t)
    if (std::all_of(given.begin(), given.end(), [&](const AnswerVector& v) { return v[t] == v[star]; }))
      d.push_back(static_cast<int>(t));
  AnswerVector r1(d.size()), r2(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    r1[k] = v1[d[k]];
    r2[k] = v2[d[k]];
  }
  CorrAudit audit = corr(r1, r2, rng);
  for (int& t : audit.b) t = d[t];
  for (int& t : audit.t1) t = d[t];
  for (int& t : audit.t2) t = d[t];
  audit.conditioned = true;
  audit.c = std::move(c);
  audit.t_c_star = star;
  audit.d = std::move(d);
  return audit;
}

CorrAudit corr_conditional(const AnswerVector& v1, const AnswerVector& v2, const std::vector<AnswerVector>& given,
                           std::uint64_t seed) {
  Rng rng(seed);
  return corr_conditional(v1, v2, given, rng);
}

MultiReportSet::MultiReportSet(int agents, int tasks, int methods)
    : agents_(agents), tasks_(tasks), methods_(methods) {
  if (agents < 0 || tasks < 0 || methods < 0) throw std::invalid_argument("MultiReportSet: negative dimension");
  const std::size_t cells = static_cast<std::size_t>(agents) * tasks;
  assigned_.assign(cells, 0);
  claimed_.assign(cells, kNoEffort);
  signals_.assign(cells * methods, kEmpty);
}

int MultiReportSet::assigned_count(int i) const {
  int n = 0;
  for (int t = 0; t < tasks_; ++t) n += assigned(i, t) ? 1 : 0;
  return n;
}

void MultiReportSet::validate(const InformationStructure& s) const {
  if (agents_ != s.n_agents) throw ValidationError("reports.agents", "agent count differs from the structure");
  if (methods_ != static_cast<int>(s.num_methods()))
    throw ValidationError("reports.methods", "method count differs from the structure");
  for (int i = 0; i < agents_; ++i)
    for (int t = 0; t < tasks_; ++t) {
      const std::string where = "reports[agent=" + std::to_string(i) + ",task=" + std::to_string(t) + "]";
      const MethodId c = claimed(i, t);
      if (c != kNoEffort && (c < 0 || c >= methods_)) throw ValidationError(where + ".method", "unknown method");
      if (!assigned(i, t) && c != kNoEffort) throw ValidationError(where, "report for an unassigned task");
      for (MethodId m = 0; m < methods_; ++m) {
        const Signal v = signal(i, t, m);
        if (v == kEmpty) continue;
        if (v < 0 || v >= static_cast<Signal>(s.methods[m].alphabet_size()))
          throw ValidationError(where + "." + s.methods[m].id, "signal outside the method alphabet");
        if (c == kNoEffort) throw ValidationError(where + "." + s.methods[m].id, "signal without a claimed method");
      }
      if (c != kNoEffort && signal(i, t, c) == kEmpty)
        throw ValidationError(where + "." + s.methods[c].id, "missing signal for the claimed method");
    }
}

MultiReportSet truthful_reports(const InformationStructure& s, const SignalTable& world,
                                const std::vector<MethodId>& performed) {
  if (static_cast<int>(performed.size()) != world.agents)
    throw std::invalid_argument("truthful_reports: one performed method per agent expected");
  MultiReportSet r(world.agents, world.tasks, world.methods);
  for (int i = 0; i < world.agents; ++i)
    for (int t = 0; t < world.tasks; ++t) {
      r.set_assigned(i, t, true);
      if (performed[i] == kNoEffort) continue;
      r.set_claimed(i, t, performed[i]);
      for (MethodId m : s.poset.down_set(performed[i])) r.set_signal(i, t, m, world.at(t, i, m));
    }
  return r;
}

std::vector<std::vector<bool>> assign_batches(int agents, int tasks, int batch, std::uint64_t seed) {
  std::vector<std::vector<bool>> mask(agents, std::vector<bool>(tasks, batch <= 0 || batch >= tasks));
  if (batch <= 0 || batch >= tasks) return mask;
  Rng rng(seed);
  std::vector<int> order(tasks);
  for (int i = 0; i < agents; ++i) {
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first `batch` slots are a uniform sample.
    for (int k = 0; k < batch; ++k) {
      const std::size_t j = k + uniform_index(rng, static_cast<std::size_t>(tasks - k));
      std::swap(order[k], order[j]);
      mask[i][order[k]] = true;
    }
  }
  return mask;
}

AnswerVector own_vector(const MultiReportSet& r, int agent, MethodId m) {
  AnswerVector v(r.tasks(), kEmpty);
  for (int t = 0; t < r.tasks(); ++t) v[t] = r.signal(agent, t, m);
  return v;
}

MultiPaymentResult multi_hmim_payment(const InformationStructure& s, const MultiReportSet& reports,
                                      const Coefficients& alpha, std::uint64_t seed) {
  validate_coefficients(s, alpha);
  reports.validate(s);
  for (int i = 0; i < reports.agents(); ++i)
    if (reports.assigned_count(i) < 2)
      throw ValidationError("reports.agents[" + std::to_string(i) + "]", "fewer than two assigned tasks");

  const int T = reports.tasks();
  MultiPaymentResult result;
  for (int i = 0; i < reports.agents(); ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    AgentPayment pay;
    pay.agent = i;
    for (std::size_t mi = 0; mi < s.num_methods(); ++mi) {
      const auto m = static_cast<MethodId>(mi);
      const std::vector<MethodId> lower = s.poset.strictly_below(m);
      LevelAudit level;
      level.method = m;
      level.peer.assign(T, -1);
      AnswerVector peer(T, kEmpty);
      std::vector<AnswerVector> given(lower.size(), AnswerVector(T, kEmpty));
      for (int t = 0; t < T; ++t) {
        auto eligible = [&](int j) {
          if (j == i) return false;
          const MethodId c = reports.claimed(j, t);
          return c != kNoEffort && s.poset.dominates_or_equal(c, m) && reports.signal(j, t, m) != kEmpty;
        };
        int count = 0;
        for (int j = 0; j < reports.agents(); ++j) count += eligible(j) ? 1 : 0;
        if (count == 0) continue;
        int pick = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(count)));
        int j = 0;
        for (;; ++j)
          if (eligible(j) && pick-- == 0) break;
        level.peer[t] = j;
        peer[t] = reports.signal(j, t, m);
        for (std::size_t k = 0; k < lower.size(); ++k) given[k][t] = reports.signal(j, t, lower[k]);
      }
      level.corr = corr_conditional(own_vector(reports, i, m), peer, given, rng);
      level.payment = 2.0 * alpha.alpha[m] * level.corr.score;
      pay.total += level.payment;
      pay.levels.push_back(std::move(level));
    }
    result.agents.push_back(std::move(pay));
  }
  return result;
}

std::string CorrelationViolation::describe(const InformationStructure& s) const {
  std::ostringstream out;
  out << assumption << ": method " << s.methods.at(method).id;
  if (performed != kNoEffort) out << ", performed " << s.methods.at(performed).id;
  out << ", sigma=" << sigma;
  if (sigma_other >= 0) out << ", other=" << sigma_other;
  if (!given.empty()) {
    out << ", given {";
    for (std::size_t k = 0; k < given.size(); ++k)
      out << (k ? ", " : "") << s.methods.at(given[k]).id << "=" << given_values[k];
    out << "}";
  }
  out << ": " << lhs << " vs " << rhs;
  return out.str();
}

CorrelationReport check_positive_correlation(const InformationStructure& s, std::uint64_t cap) {
  constexpr double kTol = 1e-12;
  constexpr double kMass = 1e-15;
  CorrelationReport report;

  // Positive correlation: own (agent 0) vs peer (agent 1) at level m, given
  // the peer's signals on a subset of strictly lower methods.
  for (std::size_t mi = 0; mi < s.num_methods(); ++mi) {
    const auto m = static_cast<MethodId>(mi);
    const std::vector<MethodId> lower = s.poset.strictly_below(m);
    for (unsigned mask = 0; mask < (1u << lower.size()); ++mask) {
      const std::vector<MethodId> sub = subset_of(lower, mask);
      std::vector<SignalVar> vars{{0, m}, {1, m}};
      for (MethodId l : sub) vars.push_back({1, l});
      std::vector<std::size_t> zg;
      for (std::size_t k = 2; k < vars.size(); ++k) zg.push_back(k);
      // (own m, peer m, peer given)
      const JointDistribution z = joint_distribution(s, vars, cap).grouped({{0}, {1}, zg});
      const std::size_t nx = z.sizes()[0], nz = z.sizes()[2];
      for (std::size_t zc = 0; zc < nz; ++zc) {
        double pz = 0.0;
        std::vector<double> px(nx, 0.0), py(nx, 0.0);
        for (std::size_t x = 0; x < nx; ++x)
          for (std::size_t y = 0; y < nx; ++y) {
            const double p = z.table()[(x * nx + y) * nz + zc];
            pz += p;
            px[x] += p;
            py[y] += p;
          }
        if (pz <= kMass) continue;
        std::vector<int> zvals(sub.size());
        {
          std::size_t rem = zc;
          for (std::size_t k = sub.size(); k-- > 0;) {
            const std::size_t base = s.methods[sub[k]].alphabet_size();
            zvals[k] = static_cast<int>(rem % base);
            rem /= base;
          }
        }
        for (std::size_t sigma = 0; sigma < nx; ++sigma) {
          const double prior = py[sigma] / pz;
          for (std::size_t other = 0; other < nx; ++other) {
            if (px[other] <= kMass) continue;
            ++report.cells_checked;
            const double cond = z.table()[(other * nx + sigma) * nz + zc] / px[other];
            const bool same = other == sigma;
            const bool holds = same ? cond > prior + kTol : cond < prior - kTol;
            if (holds) continue;
            CorrelationViolation v;
            v.assumption = "positive-correlation";
            v.method = m;
            v.given = sub;
            v.given_values = zvals;
            v.sigma = static_cast<int>(sigma);
            v.sigma_other = same ? -1 : static_cast<int>(other);
            v.lhs = cond;
            v.rhs = prior;
            report.positive_correlation.push_back(std::move(v));
          }
        }
      }
    }
  }

  // Conditional independence: given own Ψ^m (and peer conditioning), own
  // signals on the other performed levels carry nothing about peer Ψ^m.
  for (std::size_t pi = 0; pi < s.num_methods(); ++pi) {
    const auto performed = static_cast<MethodId>(pi);
    const std::vector<MethodId> own = s.poset.down_set(performed);
    if (own.size() < 2) continue;
    for (MethodId m : own) {
      std::vector<MethodId> others;
      for (MethodId o : own)
        if (o != m) others.push_back(o);
      const std::vector<MethodId> lower = s.poset.strictly_below(m);
      for (unsigned mask = 0; mask < (1u << lower.size()); ++mask) {
        const std::vector<MethodId> sub = subset_of(lower, mask);
        std::vector<SignalVar> vars{{0, m}};
        for (MethodId o : others) vars.push_back({0, o});
        vars.push_back({1, m});
        for (MethodId l : sub) vars.push_back({1, l});
        const JointDistribution j = joint_distribution(s, vars, cap);
        std::vector<std::size_t> og, zg;
        for (std::size_t k = 0; k < others.size(); ++k) og.push_back(1 + k);
        for (std::size_t k = 0; k < sub.size(); ++k) zg.push_back(2 + others.size() + k);
        // (own m, own others, peer m, peer given)
        const JointDistribution g = j.grouped({{0}, og, {1 + others.size()}, zg});
        const std::size_t nx = g.sizes()[0], no = g.sizes()[1], ny = g.sizes()[2], nz = g.sizes()[3];
        auto at = [&](std::size_t x, std::size_t o, std::size_t y, std::size_t zc) {
          return g.table()[((x * no + o) * ny + y) * nz + zc];
        };
        for (std::size_t zc = 0; zc < nz; ++zc)
          for (std::size_t x = 0; x < nx; ++x) {
            double pxz = 0.0;
            std::vector<double> pyxz(ny, 0.0);
            for (std::size_t o = 0; o < no; ++o)
              for (std::size_t y = 0; y < ny; ++y) {
                pxz += at(x, o, y, zc);
                pyxz[y] += at(x, o, y, zc);
              }
            if (pxz <= kMass) continue;
            for (std::size_t o = 0; o < no; ++o) {
              double pxoz = 0.0;
              for (std::size_t y = 0; y < ny; ++y) pxoz += at(x, o, y, zc);
              if (pxoz <= kMass) continue;
              for (std::size_t y = 0; y < ny; ++y) {
                ++report.cells_checked;
                const double lhs = at(x, o, y, zc) / pxoz;
                const double rhs = pyxz[y] / pxz;
                if (std::abs(lhs - rhs) <= kTol) continue;
                CorrelationViolation v;
                v.assumption = "conditional-independence";
                v.method = m;
                v.performed = performed;
                v.given = sub;
                std::size_t rem = zc;
                v.given_values.assign(sub.size(), 0);
                for (std::size_t k = sub.size(); k-- > 0;) {
                  const std::size_t base = s.methods[sub[k]].alphabet_size();
                  v.given_values[k] = static_cast<int>(rem % base);
                  rem /= base;
                }
                v.sigma = static_cast<int>(y);
                v.sigma_other = static_cast<int>(o);
                v.lhs = lhs;
                v.rhs = rhs;
                report.conditional_independence.push_back(std::move(v));
              }
            }
          }
      }
    }
  }
  return report;
}

AoiTable multi_level_terms(const InformationStructure& s, int tasks) {
  if (tasks < 2) throw ValidationError("tasks", "must be >= 2");
  InformationStructure scratch;
  const InformationStructure* st = &s;
  if (s.n_agents < 2) {
    scratch = s;
    scratch.n_agents = 2;
    st = &scratch;
  }
  const std::size_t nm = s.num_methods();
  const double T = tasks;
  std::vector<double> level(nm, 0.0);
  for (std::size_t m = 0; m < nm; ++m) {
    const auto id = static_cast<MethodId>(m);
    const auto below = s.poset.strictly_below(id);
    std::vector<SignalVar> vars = {{0, id}, {1, id}};
    for (MethodId b : below) vars.push_back({1, b});
    const JointDistribution j = joint_distribution(*st, vars);
    const std::size_t k = s.methods[m].alphabet_size();
    std::size_t nz = 1;
    for (MethodId b : below) nz *= s.methods[b].alphabet_size();
    // Layout: own (most significant), peer, then the conditioning block.
    for (std::size_t z = 0; z < nz; ++z) {
      double pz = 0.0;
      std::vector<double> own(k, 0.0), peer(k, 0.0);
      double same = 0.0;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
          const double p = j.table()[(a * k + b) * nz + z];
          pz += p;
          own[a] += p;
          peer[b] += p;
          if (a == b) same += p;
        }
      if (pz <= 0.0) continue;
      double agree = same / pz;
      for (std::size_t a = 0; a < k; ++a) agree -= (own[a] / pz) * (peer[a] / pz);
      const double weight = below.empty() ? T : 1.0 + (T - 1.0) * pz - std::pow(1.0 - pz, T - 1.0);
      level[m] += pz * weight * agree;
    }
    level[m] *= 2.0 / T;
  }
  AoiTable table;
  table.kind = FKind::kTvd;
  table.terms.assign(nm, std::vector<double>(nm, 0.0));
  for (std::size_t p = 0; p < nm; ++p)
    for (MethodId m : s.poset.down_set(static_cast<MethodId>(p))) table.terms[p][m] = level[m];
  return table;
}

}  // namespace hmip
