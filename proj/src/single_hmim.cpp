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

#include "hmip/single_hmim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmip {
namespace {

constexpr double kTieTol = 1e-12;

// Pr[a | own values on `methods`] (unnormalized) and its total.
std::vector<double> attribute_weights(const InformationStructure& s, const std::vector<MethodId>& methods,
                                      const std::vector<Signal>& values) {
  std::vector<double> w(s.attributes.size());
  for (std::size_t a = 0; a < w.size(); ++a) {
    double p = s.attributes.probs[a];
    for (std::size_t k = 0; k < methods.size() && p > 0.0; ++k) p *= s.methods[methods[k]].channel[a][values[k]];
    w[a] = p;
  }
  return w;
}

Forecast peer_signal(const InformationStructure& s, const std::vector<double>& posterior, MethodId target) {
  const Method& m = s.methods[target];
  Forecast f(m.alphabet_size(), 0.0);
  for (std::size_t a = 0; a < posterior.size(); ++a)
    for (std::size_t y = 0; y < f.size(); ++y) f[y] += posterior[a] * m.channel[a][y];
  return f;
}

std::vector<MethodId> level_methods(const InformationStructure& s, MethodId performed) {
  return performed == kNoEffort ? std::vector<MethodId>{} : s.poset.down_set(performed);
}

std::size_t tuple_count(const InformationStructure& s, const std::vector<MethodId>& methods) {
  std::size_t n = 1;
  for (MethodId m : methods) n *= s.methods[m].alphabet_size();
  return n;
}

std::vector<Signal> decode_tuple(const InformationStructure& s, const std::vector<MethodId>& methods,
                                 std::size_t index) {
  std::vector<Signal> v(methods.size());
  for (std::size_t k = methods.size(); k-- > 0;) {
    const std::size_t n = s.methods[methods[k]].alphabet_size();
    v[k] = static_cast<Signal>(index % n);
    index /= n;
  }
  return v;
}

// Everything the exact evaluation needs about one received tuple.
struct TupleInfo {
  double prob = 0.0;
  std::vector<double> attr;          // Pr[a | tuple]
  std::vector<double> given_attr;    // Pr[tuple | a]
  std::vector<Forecast> posterior;   // per method
};

std::vector<TupleInfo> tuple_table(const InformationStructure& s, MethodId performed) {
  const auto methods = level_methods(s, performed);
  const std::size_t n = tuple_count(s, methods);
  std::vector<TupleInfo> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    TupleInfo& t = out[k];
    const auto values = decode_tuple(s, methods, k);
    t.attr = attribute_weights(s, methods, values);
    t.given_attr.resize(t.attr.size());
    for (std::size_t a = 0; a < t.attr.size(); ++a) {
      double l = 1.0;
      for (std::size_t j = 0; j < methods.size(); ++j) l *= s.methods[methods[j]].channel[a][values[j]];
      t.given_attr[a] = l;
    }
    for (double w : t.attr) t.prob += w;
    if (t.prob <= 0.0) continue;
    for (double& w : t.attr) w /= t.prob;
    for (std::size_t m = 0; m < s.num_methods(); ++m)
      t.posterior.push_back(peer_signal(s, t.attr, static_cast<MethodId>(m)));
  }
  return out;
}

void check_forecast(const InformationStructure& s, const Forecast& f, std::size_t m, const std::string& field) {
  if (f.size() != s.methods[m].alphabet_size()) throw ValidationError(field, "forecast size must match the alphabet");
  double total = 0.0;
  for (double v : f) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(field, "forecast entries must be finite and >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError(field, "forecast must sum to 1");
}

bool same_forecast(const Forecast& a, const Forecast& b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-15) return false;
  return true;
}

std::vector<Forecast> forecast_grid(std::size_t k, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  if (n < 1 || k < 1) throw std::invalid_argument("forecast_grid: bad step");
  std::vector<Forecast> out;
  std::vector<int> c(k, 0);
  // Compositions of n into k parts.
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == k) {
      c[pos] = left;
      Forecast f(k);
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) total += f[j] = std::clamp(static_cast<double>(c[j]) / n, 0.01, 0.99);
      for (double& v : f) v /= total;
      out.push_back(std::move(f));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// Expected score that is −∞ instead of an error when q misses p's support.
double expected_or_minus_inf(const Forecast& p, const Forecast& q, ScoringRule rule) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] > 0.0 && q[x] <= 0.0) return -INFINITY;
  return expected_score(p, q, rule);
}

std::string tuple_string(const InformationStructure& s, MethodId performed, std::size_t index) {
  const auto methods = level_methods(s, performed);
  const auto v = decode_tuple(s, methods, index);
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    out += s.methods[methods[k]].alphabet[v[k]];
  }
  return out + ")";
}

}  // namespace

void validate_single_config(const InformationStructure& s, const SingleConfig& c) {
  validate_coefficients(s, c.alpha);
  if (!(c.info_weight > 0.0) || !std::isfinite(c.info_weight))
    throw ValidationError("info_weight", "must be finite and > 0");
  if (!(c.prediction_weight > 0.0) || !std::isfinite(c.prediction_weight))
    throw ValidationError("prediction_weight", "must be finite and > 0");
}

void validate_single_reports(const InformationStructure& s, const std::vector<SingleReport>& reports) {
  if (static_cast<int>(reports.size()) != s.n_agents)
    throw ValidationError("reports", "need one report per agent");
  const std::size_t nm = s.num_methods();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const SingleReport& r = reports[i];
    const std::string who = "reports[" + std::to_string(i) + "]";
    if (r.performed != kNoEffort && (r.performed < 0 || static_cast<std::size_t>(r.performed) >= nm))
      throw ValidationError(who + ".performed", "unknown method");
    if (r.signals.size() != nm) throw ValidationError(who + ".signals", "need one entry per method");
    if (r.forecasts.size() != nm) throw ValidationError(who + ".forecasts", "need one entry per method");
    for (std::size_t m = 0; m < nm; ++m) {
      const bool below = r.performed != kNoEffort && s.poset.dominates_or_equal(r.performed, static_cast<MethodId>(m));
      const Signal v = r.signals[m];
      if (below && v == kEmpty) throw ValidationError(who + ".signals", "missing signal of " + s.methods[m].id);
      if (!below && v != kEmpty)
        throw ValidationError(who + ".signals", "signal of " + s.methods[m].id + " not below the performed method");
      if (v != kEmpty && (v < 0 || static_cast<std::size_t>(v) >= s.methods[m].alphabet_size()))
        throw ValidationError(who + ".signals", "signal outside the alphabet of " + s.methods[m].id);
      if (!r.forecasts[m].empty()) check_forecast(s, r.forecasts[m], m, who + ".forecasts[" + std::to_string(m) + "]");
    }
    if (r.performed != kNoEffort && r.forecasts[r.performed].empty())
      throw ValidationError(who + ".forecasts", "forecast of the performed method is mandatory");
  }
}

Forecast posterior_forecast(const InformationStructure& s, const std::vector<MethodId>& received,
                            const std::vector<Signal>& values, MethodId target) {
  if (received.size() != values.size()) throw std::invalid_argument("posterior_forecast: size mismatch");
  if (target < 0 || static_cast<std::size_t>(target) >= s.num_methods())
    throw std::invalid_argument("posterior_forecast: unknown target method");
  for (std::size_t k = 0; k < received.size(); ++k) {
    if (received[k] < 0 || static_cast<std::size_t>(received[k]) >= s.num_methods())
      throw std::invalid_argument("posterior_forecast: unknown method");
    if (values[k] < 0 || static_cast<std::size_t>(values[k]) >= s.methods[received[k]].alphabet_size())
      throw std::invalid_argument("posterior_forecast: signal outside alphabet");
  }
  auto w = attribute_weights(s, received, values);
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) throw ValidationError("signals", "signal combination has probability 0");
  for (double& v : w) v /= total;
  return peer_signal(s, w, target);
}

SingleReport truthful_single_report(const InformationStructure& s, MethodId performed,
                                    const std::vector<Signal>& own) {
  SingleReport r;
  r.performed = performed;
  r.signals.assign(s.num_methods(), kEmpty);
  const auto methods = level_methods(s, performed);
  std::vector<Signal> values;
  for (MethodId m : methods) {
    r.signals[m] = own.at(m);
    values.push_back(own.at(m));
  }
  for (std::size_t m = 0; m < s.num_methods(); ++m)
    r.forecasts.push_back(posterior_forecast(s, methods, values, static_cast<MethodId>(m)));
  return r;
}

PredictionAudit prediction_score(const InformationStructure& s, const std::vector<SingleReport>& reports, int agent,
                                 const SingleConfig& config, Rng& rng) {
  const std::size_t nm = s.num_methods();
  PredictionAudit out;
  out.reference.assign(nm, -1);
  const SingleReport& me = reports.at(agent);
  for (std::size_t m = 0; m < nm; ++m) {
    if (me.forecasts[m].empty()) continue;
    std::vector<int> eligible;
    for (std::size_t j = 0; j < reports.size(); ++j) {
      const SingleReport& r = reports[j];
      if (static_cast<int>(j) == agent || r.performed == kNoEffort) continue;
      if (s.poset.dominates_or_equal(r.performed, static_cast<MethodId>(m)) && r.signals[m] != kEmpty)
        eligible.push_back(static_cast<int>(j));
    }
    if (eligible.empty()) continue;
    const int j = eligible[uniform_index(rng, eligible.size())];
    out.reference[m] = j;
    out.score += config.alpha.alpha[m] * score(reports[j].signals[m], me.forecasts[m], config.rule);
  }
  return out;
}

InformationAudit information_score(const InformationStructure& s, const std::vector<SingleReport>& reports, int agent,
                                   const SingleConfig& config, Rng& rng) {
  InformationAudit out;
  const SingleReport& me = reports.at(agent);
  std::vector<int> same;
  for (std::size_t j = 0; j < reports.size(); ++j)
    if (static_cast<int>(j) != agent && reports[j].performed == me.performed && reports[j].signals == me.signals)
      same.push_back(static_cast<int>(j));
  if (same.empty()) return out;
  out.reference = same[uniform_index(rng, same.size())];
  const SingleReport& ref = reports[out.reference];
  for (std::size_t m = 0; m < s.num_methods(); ++m) {
    if (me.forecasts[m].empty() || ref.forecasts[m].empty()) continue;
    const Forecast& pj = ref.forecasts[m];
    out.score -= config.alpha.alpha[m] *
                 (expected_score(pj, pj, config.rule) - expected_score(pj, me.forecasts[m], config.rule));
  }
  return out;
}

std::vector<SinglePayment> single_hmim_payment(const InformationStructure& s, const std::vector<SingleReport>& reports,
                                               const SingleConfig& config, std::uint64_t seed) {
  if (s.n_agents < 2) throw ValidationError("n_agents", "payments need at least two agents");
  validate_single_config(s, config);
  validate_single_reports(s, reports);
  std::vector<SinglePayment> out;
  for (int i = 0; i < s.n_agents; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    SinglePayment p;
    p.agent = i;
    p.info_audit = information_score(s, reports, i, config, rng);
    p.prediction_audit = prediction_score(s, reports, i, config, rng);
    p.information = p.info_audit.score;
    p.prediction = p.prediction_audit.score;
    p.total = config.info_weight * p.information + config.prediction_weight * p.prediction;
    out.push_back(std::move(p));
  }
  return out;
}

double single_aoi(const InformationStructure& s, const SingleConfig& config, MethodId performed) {
  validate_coefficients(s, config.alpha);
  double total = 0.0;
  for (const TupleInfo& t : tuple_table(s, performed)) {
    if (t.prob <= 0.0) continue;
    for (std::size_t m = 0; m < s.num_methods(); ++m)
      total += t.prob * config.alpha.alpha[m] * expected_score(t.posterior[m], t.posterior[m], config.rule);
  }
  return total;
}

PrudentChoice prudent_single_method(const InformationStructure& s, const SingleConfig& config, int agent) {
  if (agent < 0 || agent >= s.n_agents) throw std::out_of_range("prudent_single_method: agent index out of range");
  const double base = single_aoi(s, config, kNoEffort);
  PrudentChoice best{kNoEffort, base, base};
  double best_cost = 0.0;
  for (std::size_t m = 0; m < s.num_methods(); ++m) {
    const auto id = static_cast<MethodId>(m);
    const double aoi = single_aoi(s, config, id);
    const double cost = s.costs.cost(agent, id);
    const double u = aoi - cost;
    const double scale = std::max({1.0, std::abs(u), std::abs(best.utility)});
    const bool better = u > best.utility + kTieTol * scale;
    const bool tie = !better && std::abs(u - best.utility) <= kTieTol * scale;
    if (better || (tie && cost < best_cost)) {
      best = PrudentChoice{id, u, aoi};
      best_cost = cost;
    }
  }
  return best;
}

SingleStrategy truthful_single_strategy(const InformationStructure& s, MethodId performed) {
  SingleStrategy st;
  st.performed = performed;
  const auto table = tuple_table(s, performed);
  for (std::size_t k = 0; k < table.size(); ++k) {
    st.report.push_back(static_cast<int>(k));
    if (table[k].prob > 0.0) {
      st.forecasts.push_back(table[k].posterior);
    } else {
      // Never received; any valid forecast will do.
      std::vector<Forecast> uniform;
      for (const Method& m : s.methods)
        uniform.emplace_back(m.alphabet_size(), 1.0 / static_cast<double>(m.alphabet_size()));
      st.forecasts.push_back(std::move(uniform));
    }
  }
  return st;
}

namespace {

// Shared pieces of the exact evaluation for one deviator level.
struct ExactContext {
  std::vector<TupleInfo> table;
  std::vector<char> predicted;  // m ∈ M_{-i}
  int matching_peers = 0;       // peers at the deviator's level
};

ExactContext exact_context(const InformationStructure& s, MethodId performed, const std::vector<MethodId>& peers) {
  ExactContext c;
  c.table = tuple_table(s, performed);
  c.predicted.assign(s.num_methods(), 0);
  for (MethodId p : peers) {
    if (p != kNoEffort && (p < 0 || static_cast<std::size_t>(p) >= s.num_methods()))
      throw ValidationError("peers", "unknown method");
    if (p == performed) ++c.matching_peers;
    if (p == kNoEffort) continue;
    for (MethodId m : s.poset.down_set(p)) c.predicted[m] = 1;
  }
  return c;
}

double match_probability(const ExactContext& c, const TupleInfo& received, std::size_t reported) {
  const TupleInfo& r = c.table[reported];
  if (c.matching_peers == 0 || r.prob <= 0.0) return 0.0;
  double p = 0.0;
  for (std::size_t a = 0; a < received.attr.size(); ++a)
    p += received.attr[a] * (1.0 - std::pow(1.0 - r.given_attr[a], c.matching_peers));
  return p;
}

// Expected payment contribution of method m for one received tuple.
double cell_value(const SingleConfig& config, const ExactContext& c,
                  const TupleInfo& received, std::size_t reported, double match, std::size_t m, const Forecast& q) {
  if (q.empty() || config.alpha.alpha[m] == 0.0) return 0.0;
  double v = 0.0;
  if (c.predicted[m])
    v += config.prediction_weight * config.alpha.alpha[m] *
         expected_or_minus_inf(received.posterior[m], q, config.rule);
  if (match > 0.0) {
    const Forecast& pj = c.table[reported].posterior[m];
    v -= config.info_weight * match * config.alpha.alpha[m] *
         (expected_score(pj, pj, config.rule) - expected_or_minus_inf(pj, q, config.rule));
  }
  return v;
}

}  // namespace

double expected_single_payment(const InformationStructure& s, const SingleConfig& config,
                               const SingleStrategy& strategy, const std::vector<MethodId>& peers) {
  validate_single_config(s, config);
  const ExactContext c = exact_context(s, strategy.performed, peers);
  if (strategy.report.size() != c.table.size() || strategy.forecasts.size() != c.table.size())
    throw ValidationError("strategy", "needs one entry per received tuple");
  double total = 0.0;
  for (std::size_t k = 0; k < c.table.size(); ++k) {
    const TupleInfo& t = c.table[k];
    if (t.prob <= 0.0) continue;
    const int r = strategy.report[k];
    if (r < 0 || static_cast<std::size_t>(r) >= c.table.size())
      throw ValidationError("strategy.report", "reported tuple out of range");
    if (strategy.forecasts[k].size() != s.num_methods())
      throw ValidationError("strategy.forecasts", "needs one entry per method");
    if (strategy.performed != kNoEffort && strategy.forecasts[k][strategy.performed].empty())
      throw ValidationError("strategy.forecasts", "forecast of the performed method is mandatory");
    const double match = match_probability(c, t, static_cast<std::size_t>(r));
    for (std::size_t m = 0; m < s.num_methods(); ++m) {
      const Forecast& q = strategy.forecasts[k][m];
      if (!q.empty()) check_forecast(s, q, m, "strategy.forecasts");
      total += t.prob * cell_value(config, c, t, static_cast<std::size_t>(r), match, m, q);
    }
  }
  return total;
}

StrictnessReport single_strictness_search(const InformationStructure& s, const SingleConfig& config,
                                          MethodId performed, const std::vector<MethodId>& peers, double step) {
  validate_single_config(s, config);
  if (!(step > 0.0) || step > 0.5) throw ValidationError("step", "must lie in (0, 0.5]");
  const ExactContext c = exact_context(s, performed, peers);
  std::vector<std::vector<Forecast>> grids;
  for (const Method& m : s.methods) grids.push_back(forecast_grid(m.alphabet_size(), step));

  StrictnessReport rep;
  rep.truthful_unique = true;
  double worst_margin = INFINITY;
  for (std::size_t k = 0; k < c.table.size(); ++k) {
    const TupleInfo& t = c.table[k];
    if (t.prob <= 0.0) continue;
    double truthful = 0.0;
    for (std::size_t m = 0; m < s.num_methods(); ++m)
      truthful += cell_value(config, c, t, k, match_probability(c, t, k), m, t.posterior[m]);
    rep.truthful_value += t.prob * truthful;

    double best_dev = -INFINITY;
    std::string best_desc;
    for (std::size_t r = 0; r < c.table.size(); ++r) {
      const double match = match_probability(c, t, r);
      // Per method: best over all candidates, and best over candidates that
      // differ from the truthful forecast.
      double sum_best = 0.0;
      double best_swap = -INFINITY;  // largest (best_other − best_any) gain
      std::vector<Forecast> chosen(s.num_methods());
      for (std::size_t m = 0; m < s.num_methods(); ++m) {
        std::vector<Forecast> cands = grids[m];
        cands.push_back(t.posterior[m]);
        if (c.table[r].prob > 0.0) cands.push_back(c.table[r].posterior[m]);
        double any = -INFINITY, other = -INFINITY;
        for (const Forecast& q : cands) {
          ++rep.candidates;
          const double v = cell_value(config, c, t, r, match, m, q);
          if (v > any) {
            any = v;
            chosen[m] = q;
          }
          if (!same_forecast(q, t.posterior[m])) other = std::max(other, v);
        }
        sum_best += any;
        best_swap = std::max(best_swap, other - any);
      }
      // A deviation must change the report or at least one forecast.
      bool all_truthful = r == k;
      for (std::size_t m = 0; m < s.num_methods() && all_truthful; ++m)
        all_truthful = same_forecast(chosen[m], t.posterior[m]);
      const double dev = all_truthful ? sum_best + best_swap : sum_best;
      if (dev > best_dev) {
        best_dev = dev;
        best_desc = "received " + tuple_string(s, performed, k) + " reported " + tuple_string(s, performed, r);
      }
    }
    const double margin = t.prob * (truthful - best_dev);
    if (margin < worst_margin) {
      worst_margin = margin;
      rep.worst = best_desc;
    }
    if (!(truthful - best_dev > kTieTol * std::max(1.0, std::abs(truthful)))) rep.truthful_unique = false;
  }
  rep.margin = worst_margin;
  rep.best_deviation = rep.truthful_value - worst_margin;
  return rep;
}

std::vector<RelevanceViolation> check_stochastic_relevance(const InformationStructure& s) {
  std::vector<RelevanceViolation> out;
  for (std::size_t p = 0; p < s.num_methods(); ++p) {
    const auto table = tuple_table(s, static_cast<MethodId>(p));
    for (std::size_t a = 0; a < table.size(); ++a) {
      if (table[a].prob <= 0.0) continue;
      for (std::size_t b = a + 1; b < table.size(); ++b) {
        if (table[b].prob <= 0.0) continue;
        double diff = 0.0;
        for (std::size_t m = 0; m < s.num_methods(); ++m)
          for (std::size_t y = 0; y < table[a].posterior[m].size(); ++y)
            diff = std::max(diff, std::abs(table[a].posterior[m][y] - table[b].posterior[m][y]));
        if (diff <= kTieTol) out.push_back({static_cast<MethodId>(p), static_cast<int>(a), static_cast<int>(b)});
      }
    }
  }
  return out;
}

}  // namespace hmip
