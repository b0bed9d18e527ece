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

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hmip/coefficient_solver.hpp"
#include "hmip/joint_distribution.hpp"
#include "hmip/properties.hpp"
#include "hmip/scenario.hpp"

namespace hmip::cli {
namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Scenario load(const CommandOptions& o) {
  if (o.format != "csv" && o.format != "json") throw ValidationError("format", "expected csv or json");
  Scenario sc = o.scenario ? load_scenario(*o.scenario) : peer_grading_scenario();
  if (o.seed) sc.simulation.seed = *o.seed;
  if (o.replicates) {
    if (*o.replicates < 1) throw ValidationError("replicates", "must be >= 1");
    sc.simulation.replicates = *o.replicates;
  }
  if (o.tasks) {
    if (*o.tasks < 2) throw ValidationError("tasks", "must be >= 2");
    sc.simulation.tasks = *o.tasks;
  }
  return sc;
}

void write_file(const CommandOptions& o, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string method_name(const InformationStructure& s, MethodId m) {
  return m == kNoEffort ? std::string("none") : s.methods[m].id;
}

std::string joined(const InformationStructure& s, const std::vector<MethodId>& ms) {
  std::string out;
  for (MethodId m : ms) out += (out.empty() ? "" : "+") + s.methods[m].id;
  return out;
}

std::vector<int> representatives(const InformationStructure& s) {
  std::vector<int> out;
  for (const CostClass& c : cost_classes(s)) out.push_back(c.agents.front());
  return out;
}

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v) out.push_back(x < 0 ? x : x + 1);
  return out;
}

}  // namespace

int cmd_mi_table(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  const InformationStructure s = build_structure(sc.structure);
  const std::size_t M = s.num_methods();
  if (M > 10) throw ValidationError("structure.methods", "mi-table enumerates peer subsets; at most 10 methods");

  std::ostringstream table, pairs;
  ojson j;
  j["table"] = ojson::array();
  j["pairs"] = ojson::array();
  table << "f,performed";
  for (const Method& m : s.methods) table << ',' << m.id;
  table << ",total\n";
  pairs << "f,own,peer,mi\n";
  for (FKind kind : {FKind::kKl, FKind::kTvd}) {
    for (std::size_t p = 0; p < M; ++p) {
      const auto terms = information_terms(s, kind, static_cast<MethodId>(p));
      double total = 0.0;
      table << to_string(kind) << ',' << s.methods[p].id;
      ojson row{{"f", to_string(kind)}, {"performed", s.methods[p].id}};
      for (std::size_t m = 0; m < M; ++m) {
        table << ',' << fmt(terms[m]);
        row["terms"][s.methods[m].id] = terms[m];
        total += terms[m];
      }
      table << ',' << fmt(total) << '\n';
      row["total"] = total;
      j["table"].push_back(row);
      if (kind == FKind::kKl) {
        log << s.methods[p].id << ":";
        for (double t : terms) log << ' ' << fmt(t);
        log << " | " << fmt(total) << '\n';
      }
    }
    // MI between an own down-set and every non-empty set of peer methods.
    for (std::size_t p = 0; p < M; ++p) {
      const auto own = s.poset.down_set(static_cast<MethodId>(p));
      std::vector<SignalVar> vars;
      std::vector<std::size_t> x;
      for (MethodId m : own) {
        x.push_back(vars.size());
        vars.push_back({0, m});
      }
      const std::size_t first_peer = vars.size();
      for (std::size_t m = 0; m < M; ++m) vars.push_back({1, static_cast<MethodId>(m)});
      const JointDistribution joint = joint_distribution(s, vars);
      for (std::size_t mask = 1; mask < (std::size_t{1} << M); ++mask) {
        std::vector<std::size_t> y;
        std::vector<MethodId> peer;
        for (std::size_t m = 0; m < M; ++m)
          if (mask & (std::size_t{1} << m)) {
            y.push_back(first_peer + m);
            peer.push_back(static_cast<MethodId>(m));
          }
        const double mi = grouped_mutual_information(joint, x, y, {}, kind);
        pairs << to_string(kind) << ',' << joined(s, own) << ',' << joined(s, peer) << ',' << fmt(mi) << '\n';
        j["pairs"].push_back({{"f", to_string(kind)}, {"own", joined(s, own)}, {"peer", joined(s, peer)}, {"mi", mi}});
      }
    }
  }
  if (o.format == "json") {
    write_file(o, "mi_table.json", j.dump(2) + "\n");
  } else {
    write_file(o, "mi_table.csv", table.str());
    write_file(o, "mi_pairs.csv", pairs.str());
  }
  return kExitOk;
}

int cmd_coeff_solve(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  const InformationStructure s = build_structure(sc.structure);
  const FKind kind = sc.mechanism.fkind;
  const CoefficientSolution sol = solve_potent_coefficients(s, kind, sc.mechanism.epsilon, sc.mechanism.margin);

  ojson j;
  j["f"] = to_string(kind);
  j["margin"] = sc.mechanism.margin;
  j["epsilon"] = sc.mechanism.epsilon;
  j["feasible"] = sol.feasible;
  std::ostringstream coef, agents;
  coef << "method,alpha,alpha_min,alpha_max,aoi\n";
  agents << "agent,class,method,utility,aoi\n";
  int code = kExitOk;
  if (!sol.feasible) {
    j["infeasibility"] = sol.infeasibility;
    log << "infeasible: " << sol.infeasibility << '\n';
    code = kExitFailure;
  } else {
    const AoiTable table = build_aoi_table(s, kind);
    for (std::size_t m = 0; m < s.num_methods(); ++m) {
      const double aoi = table.aoi(sol.alpha, static_cast<MethodId>(m));
      coef << s.methods[m].id << ',' << fmt(sol.alpha.alpha[m]) << ',' << fmt(sol.alpha_min[m]) << ','
           << fmt(sol.alpha_max[m]) << ',' << fmt(aoi) << '\n';
      j["methods"].push_back({{"id", s.methods[m].id},
                              {"alpha", sol.alpha.alpha[m]},
                              {"alpha_min", sol.alpha_min[m]},
                              {"alpha_max", sol.alpha_max[m]},
                              {"aoi", aoi}});
    }
    for (std::size_t i = 0; i < sol.agent_choices.size(); ++i) {
      const PrudentChoice& c = sol.agent_choices[i];
      agents << i << ',' << s.agent_class[i] << ',' << method_name(s, c.method) << ',' << fmt(c.utility) << ','
             << fmt(c.aoi) << '\n';
      j["agents"].push_back({{"agent", i},
                             {"class", s.agent_class[i]},
                             {"method", method_name(s, c.method)},
                             {"utility", c.utility},
                             {"aoi", c.aoi}});
    }
    j["cost"] = sol.cost;
    j["realized_cost"] = sol.realized_cost;
    j["choices_match"] = sol.choices_match;
    log << "alpha";
    for (double a : sol.alpha.alpha) log << ' ' << fmt(a);
    log << "\ncost " << fmt(sol.cost) << " realized " << fmt(sol.realized_cost) << '\n';
  }
  std::ostringstream sweep;
  if (o.sweep) {
    sweep << "margin,feasible,cost,realized_cost";
    for (const Method& m : s.methods) sweep << ",alpha_" << m.id;
    sweep << '\n';
    double previous = 0.0;
    bool monotone = true, first = true;
    for (double margin : {1e-1, 1e-2, 1e-3, 1e-4, 0.0}) {
      const CoefficientSolution r = solve_potent_coefficients(s, kind, sc.mechanism.epsilon, margin);
      sweep << fmt(margin) << ',' << (r.feasible ? 1 : 0) << ',' << fmt(r.cost) << ',' << fmt(r.realized_cost);
      for (std::size_t m = 0; m < s.num_methods(); ++m) sweep << ',' << (r.feasible ? fmt(r.alpha.alpha[m]) : "");
      sweep << '\n';
      j["sweep"].push_back({{"margin", margin}, {"feasible", r.feasible}, {"cost", r.cost}});
      if (r.feasible) {
        if (!first && r.cost > previous + 1e-9) monotone = false;
        previous = r.cost;
        first = false;
      }
    }
    j["sweep_monotone"] = monotone;
    log << "sweep cost non-increasing as margin shrinks: " << (monotone ? "yes" : "no") << '\n';
  }
  if (o.format == "json") {
    write_file(o, "coefficients.json", j.dump(2) + "\n");
  } else {
    write_file(o, "coefficients.csv", sol.feasible ? coef.str() : "infeasible," + sol.infeasibility + "\n");
    if (sol.feasible) write_file(o, "prudent_agents.csv", agents.str());
    if (o.sweep) write_file(o, "margin_sweep.csv", sweep.str());
  }
  return code;
}

int cmd_simulate(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  const InformationStructure s = build_structure(sc.structure);
  const MechanismConfig mech = scenario_mechanism(sc, s);
  const auto profile = scenario_profile(sc, s);
  std::vector<Strategy> strategies;
  for (MethodId p : profile) strategies.push_back(truthful_strategy(s, p));
  const SimulationConfig sim{sc.simulation.tasks, sc.simulation.replicates, sc.simulation.seed};
  const auto est = simulate(s, mech, strategies, sim);

  std::ostringstream csv;
  ojson j = ojson::array();
  csv << "agent,class,method,payment,cost,utility,stderr\n";
  for (int i = 0; i < s.n_agents; ++i) {
    const UtilityEstimate& e = est[i];
    csv << i << ',' << s.agent_class[i] << ',' << method_name(s, profile[i]) << ',' << fmt(e.payment) << ','
        << fmt(e.cost) << ',' << fmt(e.utility) << ',' << fmt(e.stderr_utility) << '\n';
    j.push_back({{"agent", i},
                 {"class", s.agent_class[i]},
                 {"method", method_name(s, profile[i])},
                 {"payment", e.payment},
                 {"cost", e.cost},
                 {"utility", e.utility},
                 {"stderr", e.stderr_utility}});
    log << "agent " << i << ' ' << method_name(s, profile[i]) << " utility " << fmt(e.utility) << " ± "
        << fmt(e.stderr_utility) << '\n';
  }
  if (o.format == "json") {
    write_file(o, "utilities.json", j.dump(2) + "\n");
  } else {
    write_file(o, "utilities.csv", csv.str());
  }
  return kExitOk;
}

int cmd_scan(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  const InformationStructure s = build_structure(sc.structure);
  std::vector<ScanResult> scans;
  std::vector<std::string> notes;
  bool violation = false;
  if (o.scan) {
    NamedScanOptions opts;
    opts.tasks = sc.simulation.tasks;
    opts.replicates = sc.simulation.replicates;
    opts.learning_tasks = o.learning_tasks;
    opts.learning_replicates = o.learning_replicates;
    opts.seed = sc.simulation.seed;
    NamedScanReport rep = run_named_scan(*o.scan, s, opts);
    scans = std::move(rep.scans);
    notes = std::move(rep.notes);
    violation = !rep.passed;
    log << rep.name << ": " << (rep.passed ? "passed" : "FAILED") << '\n';
  } else {
    const MechanismConfig mech = scenario_mechanism(sc, s);
    const auto profile = scenario_profile(sc, s);
    std::vector<Strategy> baseline;
    for (MethodId p : profile) baseline.push_back(truthful_strategy(s, p));
    const SimulationConfig sim{sc.simulation.tasks, sc.simulation.replicates, sc.simulation.seed};
    const auto agents = sc.simulation.scan_agents.empty() ? representatives(s) : sc.simulation.scan_agents;
    for (int agent : agents) {
      ScanResult r =
          deviation_scan(s, mech, baseline, agent, standard_library(s, profile[agent], sc.simulation.library), sim);
      r.name = to_string(mech.kind) + " agent " + std::to_string(agent) + " " + method_name(s, profile[agent]);
      violation = violation || r.violation;
      scans.push_back(std::move(r));
    }
    log << to_string(mech.kind) << " scan: " << (violation ? "violation flagged" : "no flags") << '\n';
  }
  for (const ScanResult& r : scans) {
    int flagged = 0;
    for (const auto& row : r.rows) flagged += row.flagged ? 1 : 0;
    log << "  " << r.name << ": " << r.rows.size() << " deviations, " << flagged << " flagged";
    if (!r.rows.empty()) log << ", best delta " << fmt(r.rows.front().delta) << " ± " << fmt(r.rows.front().stderr_delta);
    if (!r.notes.empty()) log << ", " << r.notes.size() << " undefined";
    log << '\n';
    for (const std::string& n : r.notes) notes.push_back(r.name + ": " + n);
  }
  for (const std::string& n : notes) log << "  note: " << n << '\n';

  if (o.format == "json") {
    ojson j;
    j["violation"] = violation;
    j["notes"] = notes;
    for (const ScanResult& r : scans) {
      ojson js{{"name", r.name}, {"agent", r.agent}, {"baseline_utility", r.baseline_utility}};
      js["rows"] = ojson::array();
      for (const auto& row : r.rows)
        js["rows"].push_back({{"deviation", row.name},
                              {"delta", row.delta},
                              {"stderr", row.stderr_delta},
                              {"deviation_utility", row.deviation_utility},
                              {"flagged", row.flagged}});
      j["scans"].push_back(js);
    }
    write_file(o, "scan.json", j.dump(2) + "\n");
  } else {
    std::string csv;
    for (std::size_t k = 0; k < scans.size(); ++k) {
      std::ostringstream one;
      scans[k].write_csv(one);
      std::string body = one.str();
      if (k > 0) body = body.substr(body.find('\n') + 1);
      csv += body;
    }
    std::string text;
    for (const std::string& n : notes) text += n + "\n";
    write_file(o, "scan.csv", csv);
    write_file(o, "scan_notes.txt", text);
  }
  return violation ? kExitViolation : kExitOk;
}

int cmd_learn(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  const InformationStructure s = build_structure(sc.structure);
  const FKind kind = sc.mechanism.fkind;
  std::vector<SubmittedVector> vectors;
  bool simulated = false;
  if (o.reports) {
    std::ifstream in(*o.reports);
    if (!in) throw ValidationError("reports", "cannot open '" + *o.reports + "'");
    vectors = read_learning_vectors(in);
  } else {
    simulated = true;
    const auto profile = sc.mechanism.kind == MechanismKind::kLearning
                             ? scenario_profile(sc, s)
                             : learning_potent_setup(s, sc.mechanism.rule).profile;
    const SignalTable world = sample_world(s, sc.simulation.tasks, mix_seed(sc.simulation.seed, 1));
    vectors = truthful_submissions(s, world, profile);
    std::size_t k = 2;
    for (const Method& m : s.methods) k = std::max(k, m.alphabet_size());
    for (int n = 0; n < o.noise_agents; ++n) {
      Rng rng(mix_seed(sc.simulation.seed, 100 + static_cast<std::uint64_t>(n)));
      SubmittedVector v{s.n_agents + n, true, "noise", kNoEffort, AnswerVector(sc.simulation.tasks)};
      for (Signal& x : v.values) x = static_cast<Signal>(uniform_index(rng, k));
      vectors.push_back(std::move(v));
    }
  }
  const double d0 = sc.mechanism.delta0 > 0.0 ? sc.mechanism.delta0 : suggest_delta0(vectors, kind).delta0;
  const LearningMechanism lm(vectors, kind, d0);
  const LearningResult res = lm.learn(sc.simulation.seed);
  log << "delta0 " << fmt(d0) << ", " << res.clusters.clusters.size() << " clusters\n";

  // Clusters are named by the most common label among their vectors.
  std::vector<std::string> cname(res.clusters.clusters.size());
  for (std::size_t c = 0; c < cname.size(); ++c) {
    std::map<std::string, int> count;
    for (int v : res.clusters.clusters[c]) ++count[vectors[v].label];
    std::string best;
    int top = -1;
    for (const auto& [label, n] : count)
      if (n > top) {
        top = n;
        best = label;
      }
    cname[c] = "c" + std::to_string(c) + ":" + best;
  }
  std::ostringstream clusters, hierarchy;
  clusters << "vector,agent,label,own,cluster\n";
  for (std::size_t v = 0; v < vectors.size(); ++v) {
    const int c = res.clusters.cluster_of[v];
    clusters << v << ',' << vectors[v].agent << ',' << vectors[v].label << ',' << (vectors[v].own ? 1 : 0) << ','
             << (c < 0 ? std::string() : cname[c]) << '\n';
  }
  hierarchy << "higher,lower\n";
  for (const auto& [hi, lo] : res.hierarchy.order.closure_edges()) {
    hierarchy << cname[hi] << ',' << cname[lo] << '\n';
    log << "  " << cname[hi] << " > " << cname[lo] << '\n';
  }
  std::vector<SubmittedVector> maximal;
  for (int v : res.maximal_vectors) maximal.push_back(vectors[v]);
  std::ostringstream maxcsv;
  write_learning_vectors(maximal, maxcsv);
  log << "maximal vectors: " << maximal.size() << '\n';
  for (const std::string& w : res.warnings) log << "  warning: " << w << '\n';

  ojson j;
  j["delta0"] = d0;
  j["hierarchy"] = ojson::array();
  for (const auto& [hi, lo] : res.hierarchy.order.closure_edges()) j["hierarchy"].push_back({cname[hi], cname[lo]});
  j["maximal_vectors"] = res.maximal_vectors;
  j["warnings"] = res.warnings;
  if (simulated) {
    const RecoveryReport rec = compare_to_truth(res, vectors, s.poset);
    j["recovery_exact"] = rec.exact;
    j["maximal_from_top"] = rec.maximal_from_top;
    j["problems"] = rec.problems;
    log << "recovery " << (rec.exact ? "exact" : "not exact") << ", maximal vectors from top performers "
        << (rec.maximal_from_top ? "yes" : "no") << '\n';
    for (const std::string& p : rec.problems) log << "  problem: " << p << '\n';
  }
  if (o.format == "json") {
    write_file(o, "learn.json", j.dump(2) + "\n");
  } else {
    write_file(o, "clusters.csv", clusters.str());
    write_file(o, "hierarchy.csv", hierarchy.str());
    write_file(o, "maximal_vectors.csv", maxcsv.str());
  }
  return kExitOk;
}

int cmd_pay(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  const InformationStructure s = build_structure(sc.structure);
  if (!o.reports) throw ValidationError("reports", "pay needs --reports");
  std::ifstream in(*o.reports);
  if (!in) throw ValidationError("reports", "cannot open '" + *o.reports + "'");
  const std::uint64_t seed = sc.simulation.seed;
  std::ostringstream csv;
  ojson j = ojson::array();

  switch (sc.mechanism.kind) {
    case MechanismKind::kMulti: {
      const MultiReportSet reports = read_multi_reports(s, in);
      const Coefficients alpha = scenario_alpha(sc, s);
      const MultiPaymentResult res = multi_hmim_payment(s, reports, alpha, seed);
      csv << "agent,total";
      for (const Method& m : s.methods) csv << ',' << m.id;
      csv << '\n';
      for (const AgentPayment& a : res.agents) {
        std::vector<double> per(s.num_methods(), 0.0);
        ojson ja{{"agent", a.agent}, {"total", a.total}};
        ja["levels"] = ojson::array();
        for (const LevelAudit& l : a.levels) {
          per[l.method] = l.payment;
          const CorrAudit& c = l.corr;
          ja["levels"].push_back({{"method", s.methods[l.method].id},
                                  {"payment", l.payment},
                                  {"peer", l.peer},
                                  {"success", c.success},
                                  {"score", c.score},
                                  {"conditioned", c.conditioned},
                                  {"C", one_based(c.c)},
                                  {"t_c_star", c.t_c_star < 0 ? -1 : c.t_c_star + 1},
                                  {"D", one_based(c.d)},
                                  {"B", one_based(c.b)},
                                  {"t1", one_based(c.t1)},
                                  {"t2", one_based(c.t2)},
                                  {"per_task", c.per_task}});
        }
        csv << a.agent << ',' << fmt(a.total);
        for (double p : per) csv << ',' << fmt(p);
        csv << '\n';
        j.push_back(ja);
        log << "agent " << a.agent << " pays " << fmt(a.total) << '\n';
      }
      break;
    }
    case MechanismKind::kLearning: {
      const auto vectors = read_learning_vectors(in);
      const double d0 =
          sc.mechanism.delta0 > 0.0 ? sc.mechanism.delta0 : suggest_delta0(vectors, sc.mechanism.fkind).delta0;
      const LearningMechanism lm(vectors, sc.mechanism.fkind, d0);
      csv << "agent,payment,clusters\n";
      for (int i : lm.agents()) {
        const LearningAgentResult r = lm.pay(i, sc.mechanism.rule, seed);
        csv << i << ',' << fmt(r.payment) << ',' << r.clusters << '\n';
        ojson ja{{"agent", i}, {"payment", r.payment}, {"clusters", r.clusters}};
        for (const LearningTerm& t : r.terms)
          ja["terms"].push_back({{"cluster", t.cluster}, {"representative", t.representative}, {"alpha", t.alpha},
                                 {"mi", t.mi}});
        j.push_back(ja);
        log << "agent " << i << " pays " << fmt(r.payment) << '\n';
      }
      break;
    }
    case MechanismKind::kSingle: {
      const auto reports = read_single_reports(s, in);
      const SingleConfig config{scenario_alpha(sc, s), sc.mechanism.info_weight, sc.mechanism.prediction_weight};
      const auto res = single_hmim_payment(s, reports, config, seed);
      csv << "agent,information,prediction,total\n";
      for (const SinglePayment& p : res) {
        csv << p.agent << ',' << fmt(p.information) << ',' << fmt(p.prediction) << ',' << fmt(p.total) << '\n';
        j.push_back({{"agent", p.agent}, {"information", p.information}, {"prediction", p.prediction},
                     {"total", p.total}});
        log << "agent " << p.agent << " pays " << fmt(p.total) << '\n';
      }
      break;
    }
    case MechanismKind::kFlat:
      throw ValidationError("mechanism.kind", "flat has no report-based payment");
  }
  write_file(o, "audit.json", j.dump(2) + "\n");
  if (o.format == "csv") write_file(o, "payments.csv", csv.str());
  return kExitOk;
}

int cmd_verify(const CommandOptions& o, std::ostream& log) {
  const Scenario sc = load(o);
  if (o.instances < 1) throw ValidationError("instances", "must be >= 1");
  const auto results = run_property_suite(sc.simulation.seed, o.instances);
  std::ostringstream csv;
  ojson j = ojson::array();
  csv << "property,instances,failures,worst,example\n";
  bool ok = true;
  for (const PropertyResult& r : results) {
    csv << r.name << ',' << r.instances << ',' << r.failures << ',' << fmt(r.worst) << ',' << r.example << '\n';
    j.push_back({{"property", r.name}, {"instances", r.instances}, {"failures", r.failures}, {"worst", r.worst},
                 {"example", r.example}});
    log << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.instances << " instances, " << r.failures
        << " failures)\n";
    ok = ok && r.passed();
  }
  if (o.format == "json") {
    write_file(o, "properties.json", j.dump(2) + "\n");
  } else {
    write_file(o, "properties.csv", csv.str());
  }
  return ok ? kExitOk : kExitViolation;
}

int run_command(const std::string& name, const CommandOptions& o, std::ostream& log, std::ostream& err) {
  try {
    if (name == "mi-table") return cmd_mi_table(o, log);
    if (name == "coeff-solve") return cmd_coeff_solve(o, log);
    if (name == "simulate") return cmd_simulate(o, log);
    if (name == "scan") return cmd_scan(o, log);
    if (name == "learn") return cmd_learn(o, log);
    if (name == "pay") return cmd_pay(o, log);
    if (name == "verify") return cmd_verify(o, log);
    throw ValidationError("command", "unknown command '" + name + "'");
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ScoringError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace hmip::cli
