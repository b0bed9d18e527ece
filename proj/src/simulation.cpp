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

#include "hmip/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hmip {
namespace {

std::vector<MethodId> level(const InformationStructure& s, MethodId p) {
  return p == kNoEffort ? std::vector<MethodId>{} : s.poset.down_set(p);
}

std::size_t level_states(const InformationStructure& s, MethodId p) {
  std::size_t n = 1;
  for (MethodId m : level(s, p)) n *= s.methods[m].alphabet_size();
  return n;
}

std::vector<Signal> decode_level(const InformationStructure& s, MethodId p, std::size_t index) {
  const auto methods = level(s, p);
  std::vector<Signal> v(methods.size());
  for (std::size_t k = methods.size(); k-- > 0;) {
    const std::size_t n = s.methods[methods[k]].alphabet_size();
    v[k] = static_cast<Signal>(index % n);
    index /= n;
  }
  return v;
}

std::size_t encode_level(const InformationStructure& s, MethodId p, const std::vector<Signal>& v) {
  const auto methods = level(s, p);
  std::size_t index = 0;
  for (std::size_t k = 0; k < methods.size(); ++k) index = index * s.methods[methods[k]].alphabet_size() + v[k];
  return index;
}

std::vector<Signal> truthful_output(const InformationStructure& s, MethodId p, const std::vector<Signal>& received) {
  std::vector<Signal> out(s.num_methods(), kEmpty);
  const auto methods = level(s, p);
  for (std::size_t k = 0; k < methods.size(); ++k) out[methods[k]] = received[k];
  return out;
}

// The reported method of greatest depth (lowest index on ties), or kNoEffort.
MethodId claimed_method(const InformationStructure& s, const std::vector<Signal>& out) {
  MethodId best = kNoEffort;
  for (std::size_t m = 0; m < out.size(); ++m) {
    if (out[m] == kEmpty) continue;
    const auto id = static_cast<MethodId>(m);
    if (best == kNoEffort || s.poset.depth(id) > s.poset.depth(best)) best = id;
  }
  return best;
}

MethodId draw_effort(const InformationStructure& s, const Strategy& st, Rng& rng) {
  const std::size_t k = sample_discrete(rng, st.effort);
  return k == s.num_methods() ? kNoEffort : static_cast<MethodId>(k);
}

// Received tuple of agent i at task t over down_set(p).
std::vector<Signal> received(const InformationStructure& s, const SignalTable& w, int t, int i, MethodId p) {
  std::vector<Signal> v;
  for (MethodId m : level(s, p)) v.push_back(w.at(t, i, m));
  return v;
}

std::vector<Signal> apply_report(const InformationStructure& s, const Strategy& st, MethodId p,
                                 const std::vector<Signal>& got, Rng& rng) {
  if (p == kNoEffort) return std::vector<Signal>(s.num_methods(), kEmpty);
  const bool truthful = st.report.empty() || st.report[p].empty();
  // Always consume one draw so paired runs stay aligned.
  const double u = uniform_real(rng);
  if (truthful) return truthful_output(s, p, got);
  const auto& row = st.report[p][encode_level(s, p, got)];
  double acc = 0.0;
  std::size_t pick = row.size() - 1;
  for (std::size_t k = 0; k < row.size(); ++k) {
    acc += row[k];
    if (u < acc) {
      pick = k;
      break;
    }
  }
  while (row[pick] == 0.0 && pick > 0) --pick;
  return decode_report(s, pick);
}

Forecast perturb(Forecast f, double delta) {
  const std::size_t top = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
  const std::size_t next = (top + 1) % f.size();
  const double d = std::min(delta, f[top] - 0.01);
  if (d > 0.0) {
    f[top] -= d;
    f[next] += d;
  }
  return f;
}

std::vector<Forecast> forecasts_for(const InformationStructure& s, const Strategy& st, MethodId p,
                                    const std::vector<Signal>& got) {
  std::vector<Forecast> out;
  const auto methods = level(s, p);
  for (std::size_t m = 0; m < s.num_methods(); ++m) {
    const std::size_t k = s.methods[m].alphabet_size();
    switch (st.forecast) {
      case ForecastPolicy::kFixed:
        out.emplace_back(k, 1.0 / static_cast<double>(k));
        break;
      case ForecastPolicy::kHonest:
        out.push_back(posterior_forecast(s, methods, got, static_cast<MethodId>(m)));
        break;
      case ForecastPolicy::kPerturbed:
        out.push_back(perturb(posterior_forecast(s, methods, got, static_cast<MethodId>(m)), st.perturbation));
        break;
    }
  }
  return out;
}

std::string map_name(const std::vector<Signal>& table) {
  std::string out;
  for (Signal v : table) out += std::to_string(v);
  return out;
}

}  // namespace

std::string to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kMulti:
      return "multi";
    case MechanismKind::kLearning:
      return "learning";
    case MechanismKind::kSingle:
      return "single";
    case MechanismKind::kFlat:
      return "flat";
  }
  return "?";
}

MechanismKind mechanism_from_string(const std::string& name) {
  for (MechanismKind k : {MechanismKind::kMulti, MechanismKind::kLearning, MechanismKind::kSingle, MechanismKind::kFlat})
    if (to_string(k) == name) return k;
  throw ValidationError("mechanism", "unknown mechanism '" + name + "' (multi, learning, single, flat)");
}

std::size_t report_tuple_count(const InformationStructure& s) {
  std::size_t n = 1;
  for (const Method& m : s.methods) n *= m.alphabet_size() + 1;
  return n;
}

std::size_t encode_report(const InformationStructure& s, const std::vector<Signal>& tuple) {
  if (tuple.size() != s.num_methods()) throw std::invalid_argument("encode_report: one entry per method expected");
  std::size_t index = 0;
  for (std::size_t m = 0; m < tuple.size(); ++m) {
    const std::size_t k = s.methods[m].alphabet_size();
    const Signal v = tuple[m];
    if (v != kEmpty && (v < 0 || static_cast<std::size_t>(v) >= k))
      throw std::invalid_argument("encode_report: signal outside alphabet");
    index = index * (k + 1) + (v == kEmpty ? k : static_cast<std::size_t>(v));
  }
  return index;
}

std::vector<Signal> decode_report(const InformationStructure& s, std::size_t index) {
  std::vector<Signal> v(s.num_methods());
  for (std::size_t m = s.num_methods(); m-- > 0;) {
    const std::size_t k = s.methods[m].alphabet_size();
    const std::size_t d = index % (k + 1);
    v[m] = d == k ? kEmpty : static_cast<Signal>(d);
    index /= k + 1;
  }
  return v;
}

std::vector<std::vector<double>> deterministic_channel(
    const InformationStructure& s, MethodId performed,
    const std::function<std::vector<Signal>(const std::vector<Signal>&)>& out) {
  const std::size_t n = level_states(s, performed), width = report_tuple_count(s);
  std::vector<std::vector<double>> ch(n, std::vector<double>(width, 0.0));
  for (std::size_t k = 0; k < n; ++k) ch[k][encode_report(s, out(decode_level(s, performed, k)))] = 1.0;
  return ch;
}

Strategy truthful_strategy(const InformationStructure& s, MethodId performed) {
  Strategy st;
  st.effort.assign(s.num_methods() + 1, 0.0);
  st.effort[performed == kNoEffort ? s.num_methods() : static_cast<std::size_t>(performed)] = 1.0;
  return st;
}

Strategy mixed_effort_strategy(const InformationStructure& s, MethodId a, MethodId b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda", "must lie in [0, 1]");
  Strategy st;
  st.effort.assign(s.num_methods() + 1, 0.0);
  auto slot = [&](MethodId m) { return m == kNoEffort ? s.num_methods() : static_cast<std::size_t>(m); };
  st.effort[slot(a)] += lambda;
  st.effort[slot(b)] += 1.0 - lambda;
  return st;
}

void validate_strategy(const InformationStructure& s, const Strategy& st) {
  auto check_row = [](const std::vector<double>& row, const std::string& field) {
    double total = 0.0;
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(field, "probabilities must be finite and >= 0");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError(field, "probabilities must sum to 1");
  };
  if (st.effort.size() != s.num_methods() + 1)
    throw ValidationError("effort", "needs one entry per method plus no effort");
  check_row(st.effort, "effort");
  if (!st.report.empty() && st.report.size() != s.num_methods())
    throw ValidationError("report", "needs one channel slot per method");
  for (std::size_t p = 0; p < st.report.size(); ++p) {
    const auto& ch = st.report[p];
    if (ch.empty()) continue;
    const std::string field = "report[" + s.methods[p].id + "]";
    if (ch.size() != level_states(s, static_cast<MethodId>(p)))
      throw ValidationError(field, "needs one row per received tuple");
    for (const auto& row : ch) {
      if (row.size() != report_tuple_count(s)) throw ValidationError(field, "needs one column per report tuple");
      check_row(row, field);
    }
  }
  if (st.forecast == ForecastPolicy::kPerturbed && !(st.perturbation >= 0.0 && st.perturbation < 1.0))
    throw ValidationError("perturbation", "must lie in [0, 1)");
}

ReplicateTable simulate_replicates(const InformationStructure& s, const MechanismConfig& mech,
                                   const std::vector<Strategy>& profile, const SimulationConfig& sim) {
  if (sim.replicates < 1) throw ValidationError("replicates", "must be >= 1");
  if (sim.tasks < 2) throw ValidationError("tasks", "must be >= 2");
  if (static_cast<int>(profile.size()) != s.n_agents) throw ValidationError("profile", "needs one strategy per agent");
  for (const Strategy& st : profile) validate_strategy(s, st);
  if (mech.kind == MechanismKind::kMulti || mech.kind == MechanismKind::kSingle) validate_coefficients(s, mech.alpha);

  const int n = s.n_agents, T = sim.tasks;
  ReplicateTable out;
  out.payment.assign(sim.replicates, std::vector<double>(n, 0.0));
  out.cost.assign(sim.replicates, std::vector<double>(n, 0.0));
  for (int r = 0; r < sim.replicates; ++r) {
    const auto rr = static_cast<std::uint64_t>(r);
    const SignalTable world = sample_world(s, T, mix_seed(sim.seed, 3 * rr));
    const std::uint64_t agent_base = mix_seed(sim.seed, 3 * rr + 1), mech_seed = mix_seed(sim.seed, 3 * rr + 2);
    std::vector<Rng> rngs;
    for (int i = 0; i < n; ++i) rngs.emplace_back(mix_seed(agent_base, static_cast<std::uint64_t>(i)));
    auto& pay = out.payment[r];
    auto& cost = out.cost[r];

    switch (mech.kind) {
      case MechanismKind::kMulti: {
        const auto mask = assign_batches(n, T, mech.batch, mix_seed(mech_seed, 0));
        MultiReportSet reports(n, T, static_cast<int>(s.num_methods()));
        std::vector<int> assigned(n, 0);
        for (int i = 0; i < n; ++i)
          for (int t = 0; t < T; ++t) {
            if (!mask[i][t]) continue;
            ++assigned[i];
            reports.set_assigned(i, t, true);
            const MethodId p = draw_effort(s, profile[i], rngs[i]);
            cost[i] += s.costs.cost(i, p);
            const auto out_tuple = apply_report(s, profile[i], p, received(s, world, t, i, p), rngs[i]);
            const MethodId c = claimed_method(s, out_tuple);
            reports.set_claimed(i, t, c);
            if (c == kNoEffort) continue;
            for (std::size_t m = 0; m < out_tuple.size(); ++m)
              reports.set_signal(i, t, static_cast<MethodId>(m), out_tuple[m]);
          }
        const MultiPaymentResult res = multi_hmim_payment(s, reports, mech.alpha, mech_seed);
        for (int i = 0; i < n; ++i) {
          pay[i] = res.agents[i].total / assigned[i];
          cost[i] /= assigned[i];
        }
        break;
      }
      case MechanismKind::kLearning: {
        std::vector<SubmittedVector> vectors;
        for (int i = 0; i < n; ++i) {
          const MethodId p = draw_effort(s, profile[i], rngs[i]);
          cost[i] = s.costs.cost(i, p);
          if (p == kNoEffort) continue;
          std::vector<AnswerVector> cols(s.num_methods(), AnswerVector(T, kEmpty));
          for (int t = 0; t < T; ++t) {
            const auto o = apply_report(s, profile[i], p, received(s, world, t, i, p), rngs[i]);
            for (std::size_t m = 0; m < o.size(); ++m) cols[m][t] = o[m];
          }
          std::vector<Signal> present(s.num_methods(), kEmpty);
          for (std::size_t m = 0; m < cols.size(); ++m) {
            const auto empties = std::count(cols[m].begin(), cols[m].end(), kEmpty);
            if (empties != 0 && empties != T)
              throw ValidationError("profile[" + std::to_string(i) + "]",
                                    "learning needs each reported vector on every task");
            if (empties == 0) present[m] = 0;
          }
          const MethodId own = claimed_method(s, present);
          for (std::size_t m = 0; m < cols.size(); ++m)
            if (present[m] != kEmpty)
              vectors.push_back({i, static_cast<MethodId>(m) == own, s.methods[m].id, static_cast<MethodId>(m),
                                 std::move(cols[m])});
        }
        if (vectors.empty()) break;
        const double d0 = mech.delta0 > 0.0 ? mech.delta0 : suggest_delta0(vectors, mech.fkind).delta0;
        const LearningMechanism lm(vectors, mech.fkind, d0);
        for (int i : lm.agents()) pay[i] = lm.pay(i, mech.rule, mech_seed).payment;
        break;
      }
      case MechanismKind::kSingle: {
        const SingleConfig config{mech.alpha, mech.info_weight, mech.prediction_weight};
        for (int t = 0; t < T; ++t) {
          std::vector<SingleReport> reports(n);
          for (int i = 0; i < n; ++i) {
            const MethodId p = draw_effort(s, profile[i], rngs[i]);
            cost[i] += s.costs.cost(i, p);
            const auto got = received(s, world, t, i, p);
            const auto o = apply_report(s, profile[i], p, got, rngs[i]);
            SingleReport& rep = reports[i];
            rep.performed = claimed_method(s, o);
            rep.signals = o;
            for (std::size_t m = 0; m < o.size(); ++m) {
              const bool below =
                  rep.performed != kNoEffort && s.poset.dominates_or_equal(rep.performed, static_cast<MethodId>(m));
              if (below != (o[m] != kEmpty))
                throw ValidationError("profile[" + std::to_string(i) + "]",
                                      "single-task reports must cover exactly the claimed level");
            }
            rep.forecasts = forecasts_for(s, profile[i], p, got);
          }
          const auto res = single_hmim_payment(s, reports, config, mix_seed(mech_seed, static_cast<std::uint64_t>(t)));
          for (int i = 0; i < n; ++i) pay[i] += res[i].total;
        }
        for (int i = 0; i < n; ++i) {
          pay[i] /= T;
          cost[i] /= T;
        }
        break;
      }
      case MechanismKind::kFlat: {
        for (int i = 0; i < n; ++i) {
          for (int t = 0; t < T; ++t) cost[i] += s.costs.cost(i, draw_effort(s, profile[i], rngs[i]));
          cost[i] /= T;
          pay[i] = mech.flat_payment;
        }
        break;
      }
    }
  }
  return out;
}

std::vector<UtilityEstimate> simulate(const InformationStructure& s, const MechanismConfig& mech,
                                      const std::vector<Strategy>& profile, const SimulationConfig& sim) {
  const ReplicateTable table = simulate_replicates(s, mech, profile, sim);
  std::vector<UtilityEstimate> out(s.n_agents);
  const int R = sim.replicates;
  for (int i = 0; i < s.n_agents; ++i) {
    UtilityEstimate& e = out[i];
    e.replicates = R;
    double sum2 = 0.0;
    for (int r = 0; r < R; ++r) {
      const double u = table.payment[r][i] - table.cost[r][i];
      e.payment += table.payment[r][i] / R;
      e.cost += table.cost[r][i] / R;
      e.utility += u / R;
      sum2 += u * u;
    }
    e.stderr_utility = R > 1 ? std::sqrt(std::max(0.0, (sum2 - R * e.utility * e.utility) / (R - 1)) / R) : 0.0;
  }
  return out;
}

ScanResult deviation_scan(const InformationStructure& s, const MechanismConfig& mech,
                          const std::vector<Strategy>& baseline, int agent, const std::vector<Deviation>& library,
                          const SimulationConfig& sim) {
  if (library.empty()) throw ValidationError("library", "deviation library is empty");
  if (agent < 0 || agent >= s.n_agents) throw ValidationError("agent", "out of range");
  const ReplicateTable base = simulate_replicates(s, mech, baseline, sim);
  const int R = sim.replicates;
  ScanResult out;
  out.agent = agent;
  for (int r = 0; r < R; ++r) out.baseline_utility += (base.payment[r][agent] - base.cost[r][agent]) / R;
  for (const Deviation& dev : library) {
    auto profile = baseline;
    profile[agent] = dev.strategy;
    ReplicateTable t;
    try {
      t = simulate_replicates(s, mech, profile, sim);
    } catch (const ScoringError& e) {
      // Someone's score is unbounded under this deviation; no utility exists.
      out.notes.push_back(dev.name + ": mechanism undefined (" + e.what() + ")");
      continue;
    }
    DeviationResult row;
    row.name = dev.name;
    double sum2 = 0.0;
    for (int r = 0; r < R; ++r) {
      const double ud = t.payment[r][agent] - t.cost[r][agent];
      const double d = ud - (base.payment[r][agent] - base.cost[r][agent]);
      row.delta += d / R;
      row.deviation_utility += ud / R;
      sum2 += d * d;
    }
    row.stderr_delta = R > 1 ? std::sqrt(std::max(0.0, (sum2 - R * row.delta * row.delta) / (R - 1)) / R) : 0.0;
    row.flagged = row.delta > 1e-12 && row.delta > 3.0 * row.stderr_delta;
    out.violation = out.violation || row.flagged;
    out.rows.push_back(std::move(row));
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const DeviationResult& a, const DeviationResult& b) { return a.delta > b.delta; });
  return out;
}

void ScanResult::write_csv(std::ostream& out) const {
  out << "scan,agent,deviation,delta,stderr,deviation_utility,baseline_utility,flagged\n";
  out << std::setprecision(10);
  for (const auto& r : rows)
    out << name << ',' << agent << ",\"" << r.name << "\"," << r.delta << ',' << r.stderr_delta << ','
        << r.deviation_utility << ',' << baseline_utility << ',' << (r.flagged ? 1 : 0) << '\n';
}

std::vector<Deviation> standard_library(const InformationStructure& s, MethodId performed,
                                        const LibraryOptions& options) {
  std::vector<Deviation> lib;
  auto id = [&](MethodId m) { return m == kNoEffort ? std::string("none") : s.methods[m].id; };
  const auto methods = level(s, performed);

  if (options.report_maps && performed != kNoEffort) {
    // All k^k self-maps of each coordinate.
    std::vector<std::vector<std::vector<Signal>>> maps(methods.size());
    std::size_t total = 1;
    for (std::size_t c = 0; c < methods.size(); ++c) {
      const std::size_t k = s.methods[methods[c]].alphabet_size();
      std::size_t count = 1;
      for (std::size_t j = 0; j < k; ++j) count *= k;
      for (std::size_t code = 0; code < count; ++code) {
        std::vector<Signal> table(k);
        std::size_t x = code;
        for (std::size_t j = k; j-- > 0;) {
          table[j] = static_cast<Signal>(x % k);
          x /= k;
        }
        maps[c].push_back(std::move(table));
      }
      total *= count;
    }
    const bool combine = total <= 512;
    std::vector<std::size_t> pick(methods.size(), 0);
    auto identity_code = [&](std::size_t c) {
      const std::size_t k = s.methods[methods[c]].alphabet_size();
      std::size_t code = 0;
      for (std::size_t j = 0; j < k; ++j) code = code * k + j;
      return code;
    };
    for (std::size_t combo = 0; combo < total; ++combo) {
      std::size_t x = combo;
      int changed = 0;
      for (std::size_t c = methods.size(); c-- > 0;) {
        pick[c] = x % maps[c].size();
        x /= maps[c].size();
        if (pick[c] != identity_code(c)) ++changed;
      }
      if (changed == 0 || (!combine && changed > 1)) continue;
      std::string name = "report";
      for (std::size_t c = 0; c < methods.size(); ++c) name += " " + id(methods[c]) + "=" + map_name(maps[c][pick[c]]);
      Strategy st = truthful_strategy(s, performed);
      st.report.assign(s.num_methods(), {});
      st.report[performed] = deterministic_channel(s, performed, [&](const std::vector<Signal>& got) {
        std::vector<Signal> o(s.num_methods(), kEmpty);
        for (std::size_t c = 0; c < methods.size(); ++c) o[methods[c]] = maps[c][pick[c]][got[c]];
        return o;
      });
      lib.push_back({name, std::move(st)});
    }
  }

  std::vector<MethodId> others;
  for (std::size_t m = 0; m < s.num_methods(); ++m)
    if (static_cast<MethodId>(m) != performed) others.push_back(static_cast<MethodId>(m));
  if (performed != kNoEffort) others.push_back(kNoEffort);

  if (options.effort_changes)
    for (MethodId m : others) lib.push_back({"effort " + id(m), truthful_strategy(s, m)});
  for (double lambda : options.lambdas)
    for (MethodId m : others) {
      std::ostringstream name;
      name << "mix " << lambda << " " << id(performed) << "/" << id(m);
      lib.push_back({name.str(), mixed_effort_strategy(s, performed, m, lambda)});
    }

  if (options.substitution && performed != kNoEffort)
    for (std::size_t u = 0; u < s.num_methods(); ++u) {
      const auto up = static_cast<MethodId>(u);
      if (!s.poset.dominates(up, performed) || s.methods[u].alphabet_size() != s.methods[performed].alphabet_size())
        continue;
      Strategy st = truthful_strategy(s, performed);
      st.report.assign(s.num_methods(), {});
      const auto pos = static_cast<std::size_t>(std::find(methods.begin(), methods.end(), performed) - methods.begin());
      st.report[performed] = deterministic_channel(s, performed, [&](const std::vector<Signal>& got) {
        std::vector<Signal> o = truthful_output(s, performed, got);
        for (MethodId m : s.poset.down_set(up))
          if (o[m] == kEmpty) o[m] = got[pos] < static_cast<Signal>(s.methods[m].alphabet_size()) ? got[pos] : 0;
        return o;
      });
      lib.push_back({"claim " + id(up) + " with " + id(performed) + " signal", std::move(st)});
    }

  for (double delta : options.forecast_perturbations) {
    Strategy st = truthful_strategy(s, performed);
    st.forecast = ForecastPolicy::kPerturbed;
    st.perturbation = delta;
    std::ostringstream name;
    name << "forecast perturbed " << delta;
    lib.push_back({name.str(), std::move(st)});
  }
  if (!options.forecast_perturbations.empty()) {
    Strategy st = truthful_strategy(s, performed);
    st.forecast = ForecastPolicy::kFixed;
    lib.push_back({"forecast uniform", std::move(st)});
  }
  return lib;
}

}  // namespace hmip
