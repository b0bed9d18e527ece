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

#include "hmip/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hmip {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::string kEmptyToken = "\xE2\x88\x85";  // ∅

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!known) throw ValidationError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ValidationError(join(path, key), "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError(path, "expected true or false");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected an array");
  return j;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t k = 0; k < array(j, path).size(); ++k) out.push_back(number(j[k], at(path, k)));
  return out;
}

std::vector<std::string> texts(const json& j, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < array(j, path).size(); ++k) out.push_back(text(j[k], at(path, k)));
  return out;
}

StructureConfig parse_structure(const json& j, const std::string& path) {
  check_keys(j, path, {"attributes", "methods", "edges", "agent_classes"});
  StructureConfig c;
  const json& attrs = array(require(j, path, "attributes"), join(path, "attributes"));
  for (std::size_t k = 0; k < attrs.size(); ++k) {
    const std::string p = at(join(path, "attributes"), k);
    check_keys(attrs[k], p, {"name", "prob"});
    c.attribute_names.push_back(text(require(attrs[k], p, "name"), join(p, "name")));
    c.attribute_probs.push_back(number(require(attrs[k], p, "prob"), join(p, "prob")));
  }
  const json& methods = array(require(j, path, "methods"), join(path, "methods"));
  for (std::size_t k = 0; k < methods.size(); ++k) {
    const std::string p = at(join(path, "methods"), k);
    check_keys(methods[k], p, {"id", "alphabet", "channel"});
    MethodConfig m;
    m.id = text(require(methods[k], p, "id"), join(p, "id"));
    m.alphabet = texts(require(methods[k], p, "alphabet"), join(p, "alphabet"));
    const json& rows = array(require(methods[k], p, "channel"), join(p, "channel"));
    for (std::size_t r = 0; r < rows.size(); ++r) m.channel.push_back(numbers(rows[r], at(join(p, "channel"), r)));
    c.methods.push_back(std::move(m));
  }
  const json& edges = array(require(j, path, "edges"), join(path, "edges"));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto pair = texts(edges[k], at(join(path, "edges"), k));
    if (pair.size() != 2) throw ValidationError(at(join(path, "edges"), k), "expected [higher, lower]");
    c.edges.emplace_back(pair[0], pair[1]);
  }
  const json& classes = array(require(j, path, "agent_classes"), join(path, "agent_classes"));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const std::string p = at(join(path, "agent_classes"), k);
    check_keys(classes[k], p, {"name", "count", "costs"});
    AgentClassConfig a;
    a.name = text(require(classes[k], p, "name"), join(p, "name"));
    a.count = integer(require(classes[k], p, "count"), join(p, "count"));
    a.costs = numbers(require(classes[k], p, "costs"), join(p, "costs"));
    c.agent_classes.push_back(std::move(a));
  }
  return c;
}

RuleL parse_rule(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "scale", "base", "by_depth"});
  RuleL r;
  const std::string kind = text(require(j, path, "kind"), join(path, "kind"));
  if (kind == "by_depth") {
    r.kind = RuleL::Kind::kByDepth;
    r.by_depth = numbers(require(j, path, "by_depth"), join(path, "by_depth"));
    if (r.by_depth.empty()) throw ValidationError(join(path, "by_depth"), "needs at least one coefficient");
  } else if (kind == "geometric") {
    r.kind = RuleL::Kind::kGeometric;
    if (j.contains("scale")) r.scale = number(j["scale"], join(path, "scale"));
    if (j.contains("base")) r.base = number(j["base"], join(path, "base"));
  } else {
    throw ValidationError(join(path, "kind"), "expected by_depth or geometric");
  }
  return r;
}

MechanismSpec parse_mechanism(const json& j, const std::string& path) {
  check_keys(j, path,
             {"kind", "alpha", "f", "delta0", "rule", "info_weight", "prediction_weight", "margin", "epsilon", "batch",
              "flat_payment"});
  MechanismSpec m;
  if (j.contains("kind")) {
    const std::string name = text(j["kind"], join(path, "kind"));
    try {
      m.kind = mechanism_from_string(name);
    } catch (const ValidationError&) {
      throw ValidationError(join(path, "kind"), "unknown mechanism '" + name + "' (multi, learning, single, flat)");
    }
  }
  if (j.contains("f")) {
    const std::string name = text(j["f"], join(path, "f"));
    try {
      m.fkind = fkind_from_string(name);
    } catch (const ValidationError&) {
      throw ValidationError(join(path, "f"), "unknown f-divergence '" + name + "' (kl or tvd)");
    }
  }
  if (j.contains("alpha")) m.alpha = numbers(j["alpha"], join(path, "alpha"));
  if (j.contains("delta0")) m.delta0 = number(j["delta0"], join(path, "delta0"));
  if (j.contains("rule")) m.rule = parse_rule(j["rule"], join(path, "rule"));
  if (j.contains("info_weight")) m.info_weight = number(j["info_weight"], join(path, "info_weight"));
  if (j.contains("prediction_weight"))
    m.prediction_weight = number(j["prediction_weight"], join(path, "prediction_weight"));
  if (j.contains("margin")) m.margin = number(j["margin"], join(path, "margin"));
  if (j.contains("epsilon")) m.epsilon = number(j["epsilon"], join(path, "epsilon"));
  if (j.contains("batch")) m.batch = integer(j["batch"], join(path, "batch"));
  if (j.contains("flat_payment")) m.flat_payment = number(j["flat_payment"], join(path, "flat_payment"));
  for (double a : m.alpha)
    if (!(a >= 0.0)) throw ValidationError(join(path, "alpha"), "coefficients must be >= 0");
  if (!(m.info_weight > 0.0)) throw ValidationError(join(path, "info_weight"), "must be > 0");
  if (!(m.prediction_weight > 0.0)) throw ValidationError(join(path, "prediction_weight"), "must be > 0");
  if (!(m.margin >= 0.0)) throw ValidationError(join(path, "margin"), "must be >= 0");
  if (!(m.epsilon > 0.0)) throw ValidationError(join(path, "epsilon"), "must be > 0");
  if (m.batch < 0) throw ValidationError(join(path, "batch"), "must be >= 0");
  return m;
}

SimulationSpec parse_simulation(const json& j, const std::string& path) {
  check_keys(j, path, {"tasks", "replicates", "seed", "profile", "library", "scan_agents"});
  SimulationSpec sim;
  if (j.contains("tasks")) sim.tasks = integer(j["tasks"], join(path, "tasks"));
  if (j.contains("replicates")) sim.replicates = integer(j["replicates"], join(path, "replicates"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ValidationError(join(path, "seed"), "expected a non-negative integer");
    sim.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("profile")) sim.profile = texts(j["profile"], join(path, "profile"));
  if (j.contains("library")) {
    const json& l = j["library"];
    const std::string p = join(path, "library");
    check_keys(l, p, {"report_maps", "effort_changes", "lambdas", "substitution", "forecast_perturbations"});
    if (l.contains("report_maps")) sim.library.report_maps = boolean(l["report_maps"], join(p, "report_maps"));
    if (l.contains("effort_changes"))
      sim.library.effort_changes = boolean(l["effort_changes"], join(p, "effort_changes"));
    if (l.contains("lambdas")) sim.library.lambdas = numbers(l["lambdas"], join(p, "lambdas"));
    if (l.contains("substitution")) sim.library.substitution = boolean(l["substitution"], join(p, "substitution"));
    if (l.contains("forecast_perturbations"))
      sim.library.forecast_perturbations = numbers(l["forecast_perturbations"], join(p, "forecast_perturbations"));
    for (double x : sim.library.lambdas)
      if (!(x > 0.0 && x < 1.0)) throw ValidationError(join(p, "lambdas"), "each lambda must lie in (0, 1)");
  }
  if (j.contains("scan_agents")) {
    const std::string p = join(path, "scan_agents");
    for (std::size_t k = 0; k < array(j["scan_agents"], p).size(); ++k)
      sim.scan_agents.push_back(integer(j["scan_agents"][k], at(p, k)));
  }
  if (sim.tasks < 2) throw ValidationError(join(path, "tasks"), "must be >= 2");
  if (sim.replicates < 1) throw ValidationError(join(path, "replicates"), "must be >= 1");
  return sim;
}

std::string line_column(std::string_view textv, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < textv.size(); ++k) {
    if (textv[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + " column " + std::to_string(col);
}

ojson rule_json(const RuleL& r) {
  ojson j;
  if (r.kind == RuleL::Kind::kByDepth) {
    j["kind"] = "by_depth";
    j["by_depth"] = r.by_depth;
  } else {
    j["kind"] = "geometric";
    j["scale"] = r.scale;
    j["base"] = r.base;
  }
  return j;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Lines with '\r' stripped; blank lines skipped. Numbers are 1-based.
std::vector<std::pair<int, std::vector<std::string>>> read_csv(std::istream& in) {
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.find('"') != std::string::npos)
      throw ValidationError("line " + std::to_string(number), "quoted cells are not supported");
    rows.emplace_back(number, split(line));
  }
  if (rows.empty()) throw ValidationError("reports", "empty file");
  return rows;
}

std::string where(int line) { return "reports line " + std::to_string(line); }

int parse_int(const std::string& cell, int line, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(where(line), what + " '" + cell + "' is not an integer");
}

double parse_double(const std::string& cell, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(where(line), "'" + cell + "' is not a number");
}

bool is_empty_cell(const std::string& cell) { return cell.empty() || cell == kEmptyToken; }

Signal parse_label(const InformationStructure& s, MethodId m, const std::string& cell, int line) {
  if (is_empty_cell(cell)) return kEmpty;
  const auto& a = s.methods[m].alphabet;
  const auto it = std::find(a.begin(), a.end(), cell);
  if (it == a.end())
    throw ValidationError(where(line), "'" + cell + "' is not a signal of " + s.methods[m].id);
  return static_cast<Signal>(it - a.begin());
}

// Method columns of a header, by position; unknown ids are rejected.
std::vector<MethodId> method_columns(const InformationStructure& s, const std::vector<std::string>& header,
                                     std::size_t first, std::size_t last, int line) {
  std::vector<MethodId> cols;
  std::set<MethodId> seen;
  for (std::size_t k = first; k < last; ++k) {
    MethodId m;
    try {
      m = s.method_index(header[k]);
    } catch (const std::exception&) {
      throw ValidationError(where(line), "unknown method column '" + header[k] + "'");
    }
    if (!seen.insert(m).second) throw ValidationError(where(line), "duplicate column '" + header[k] + "'");
    cols.push_back(m);
  }
  return cols;
}

// The non-empty method every other non-empty method lies below.
MethodId claimed_top(const InformationStructure& s, const std::vector<Signal>& signals, int line) {
  MethodId top = kNoEffort;
  for (std::size_t m = 0; m < signals.size(); ++m) {
    if (signals[m] == kEmpty) continue;
    const auto id = static_cast<MethodId>(m);
    if (top == kNoEffort || s.poset.dominates(id, top)) top = id;
  }
  for (std::size_t m = 0; m < signals.size(); ++m)
    if (signals[m] != kEmpty && !s.poset.dominates_or_equal(top, static_cast<MethodId>(m)))
      throw ValidationError(where(line), "reported methods have no common top");
  return top;
}

}  // namespace

Scenario parse_scenario(std::string_view textv) {
  json j;
  try {
    j = json::parse(textv.begin(), textv.end());
  } catch (const json::parse_error& e) {
    throw ValidationError("scenario", line_column(textv, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON");
  }
  check_keys(j, "", {"name", "structure", "mechanism", "simulation"});
  Scenario sc;
  if (j.contains("name")) sc.name = text(j["name"], "name");
  sc.structure = parse_structure(require(j, "", "structure"), "structure");
  if (j.contains("mechanism")) sc.mechanism = parse_mechanism(j["mechanism"], "mechanism");
  if (j.contains("simulation")) sc.simulation = parse_simulation(j["simulation"], "simulation");

  InformationStructure s;
  try {
    s = build_structure(sc.structure);
  } catch (const ValidationError& e) {
    throw ValidationError("structure." + e.field(), e.what());
  }
  if (!sc.mechanism.alpha.empty() && sc.mechanism.alpha.size() != s.num_methods())
    throw ValidationError("mechanism.alpha", "needs one coefficient per method");
  if (!sc.simulation.profile.empty()) {
    if (sc.simulation.profile.size() != static_cast<std::size_t>(s.n_agents))
      throw ValidationError("simulation.profile", "needs one entry per agent");
    for (std::size_t k = 0; k < sc.simulation.profile.size(); ++k)
      if (sc.simulation.profile[k] != "none") {
        try {
          s.method_index(sc.simulation.profile[k]);
        } catch (const std::exception&) {
          throw ValidationError(at("simulation.profile", k), "unknown method '" + sc.simulation.profile[k] + "'");
        }
      }
  }
  for (std::size_t k = 0; k < sc.simulation.scan_agents.size(); ++k)
    if (sc.simulation.scan_agents[k] < 0 || sc.simulation.scan_agents[k] >= s.n_agents)
      throw ValidationError(at("simulation.scan_agents", k), "agent out of range");
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& sc) {
  ojson j;
  j["name"] = sc.name;
  ojson st;
  st["attributes"] = ojson::array();
  for (std::size_t k = 0; k < sc.structure.attribute_names.size(); ++k)
    st["attributes"].push_back({{"name", sc.structure.attribute_names[k]}, {"prob", sc.structure.attribute_probs[k]}});
  st["methods"] = ojson::array();
  for (const MethodConfig& m : sc.structure.methods)
    st["methods"].push_back({{"id", m.id}, {"alphabet", m.alphabet}, {"channel", m.channel}});
  st["edges"] = ojson::array();
  for (const auto& [hi, lo] : sc.structure.edges) st["edges"].push_back({hi, lo});
  st["agent_classes"] = ojson::array();
  for (const AgentClassConfig& a : sc.structure.agent_classes)
    st["agent_classes"].push_back({{"name", a.name}, {"count", a.count}, {"costs", a.costs}});
  j["structure"] = st;

  const MechanismSpec& m = sc.mechanism;
  ojson mj;
  mj["kind"] = to_string(m.kind);
  mj["alpha"] = m.alpha;
  mj["f"] = to_string(m.fkind);
  mj["delta0"] = m.delta0;
  mj["rule"] = rule_json(m.rule);
  mj["info_weight"] = m.info_weight;
  mj["prediction_weight"] = m.prediction_weight;
  mj["margin"] = m.margin;
  mj["epsilon"] = m.epsilon;
  mj["batch"] = m.batch;
  mj["flat_payment"] = m.flat_payment;
  j["mechanism"] = mj;

  const SimulationSpec& sim = sc.simulation;
  ojson sj;
  sj["tasks"] = sim.tasks;
  sj["replicates"] = sim.replicates;
  sj["seed"] = sim.seed;
  sj["profile"] = sim.profile;
  sj["library"] = {{"report_maps", sim.library.report_maps},
                   {"effort_changes", sim.library.effort_changes},
                   {"lambdas", sim.library.lambdas},
                   {"substitution", sim.library.substitution},
                   {"forecast_perturbations", sim.library.forecast_perturbations}};
  sj["scan_agents"] = sim.scan_agents;
  j["simulation"] = sj;
  return j.dump(2) + "\n";
}

Scenario peer_grading_scenario() {
  Scenario sc;
  sc.name = "peer_grading";
  sc.structure = peer_grading_config();
  return sc;
}

Coefficients scenario_alpha(const Scenario& sc, const InformationStructure& s) {
  if (!sc.mechanism.alpha.empty()) {
    Coefficients c{sc.mechanism.alpha};
    validate_coefficients(s, c);
    return c;
  }
  switch (sc.mechanism.kind) {
    case MechanismKind::kMulti:
      return multi_potent_setup(s, sc.simulation.tasks).alpha;
    case MechanismKind::kSingle:
      return single_potent_setup(s).alpha;
    case MechanismKind::kLearning:
      return learning_potent_setup(s, sc.mechanism.rule).alpha;
    case MechanismKind::kFlat:
      break;
  }
  return Coefficients{std::vector<double>(s.num_methods(), 1.0)};
}

std::vector<MethodId> scenario_profile(const Scenario& sc, const InformationStructure& s) {
  std::vector<MethodId> out;
  if (!sc.simulation.profile.empty()) {
    for (const std::string& id : sc.simulation.profile) out.push_back(id == "none" ? kNoEffort : s.method_index(id));
    return out;
  }
  if (sc.mechanism.kind == MechanismKind::kFlat) return std::vector<MethodId>(s.n_agents, kNoEffort);
  const Coefficients alpha = scenario_alpha(sc, s);
  AoiTable table;
  switch (sc.mechanism.kind) {
    case MechanismKind::kMulti:
      table = multi_level_terms(s, sc.simulation.tasks);
      break;
    case MechanismKind::kSingle:
      table = single_aoi_table(s);
      break;
    default:
      table = build_aoi_table(s, FKind::kKl);
      break;
  }
  for (int i = 0; i < s.n_agents; ++i) out.push_back(prudent_method(table, s, alpha, i).method);
  return out;
}

MechanismConfig scenario_mechanism(const Scenario& sc, const InformationStructure& s) {
  MechanismConfig m;
  m.kind = sc.mechanism.kind;
  m.alpha = scenario_alpha(sc, s);
  m.fkind = sc.mechanism.fkind;
  m.delta0 = sc.mechanism.delta0;
  m.rule = sc.mechanism.rule;
  m.info_weight = sc.mechanism.info_weight;
  m.prediction_weight = sc.mechanism.prediction_weight;
  m.batch = sc.mechanism.batch;
  m.flat_payment = sc.mechanism.flat_payment;
  return m;
}

MultiReportSet read_multi_reports(const InformationStructure& s, std::istream& in) {
  const auto rows = read_csv(in);
  const auto& [hline, header] = rows.front();
  if (header.size() < 3 || header[0] != "agent" || header[1] != "task")
    throw ValidationError(where(hline), "header must start with agent,task");
  const auto cols = method_columns(s, header, 2, header.size(), hline);

  struct Row {
    int agent, task;
    std::vector<Signal> signals;
    int line;
  };
  std::vector<Row> parsed;
  int tasks = 0;
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& [line, cells] = rows[k];
    if (cells.size() != header.size())
      throw ValidationError(where(line), "expected " + std::to_string(header.size()) + " cells");
    Row r{parse_int(cells[0], line, "agent"), parse_int(cells[1], line, "task"),
          std::vector<Signal>(s.num_methods(), kEmpty), line};
    if (r.agent < 0 || r.agent >= s.n_agents) throw ValidationError(where(line), "agent out of range");
    if (r.task < 1) throw ValidationError(where(line), "tasks are numbered from 1");
    --r.task;
    if (!seen.insert({r.agent, r.task}).second) throw ValidationError(where(line), "duplicate (agent, task)");
    for (std::size_t c = 0; c < cols.size(); ++c) r.signals[cols[c]] = parse_label(s, cols[c], cells[c + 2], line);
    tasks = std::max(tasks, r.task + 1);
    parsed.push_back(std::move(r));
  }
  MultiReportSet out(s.n_agents, tasks, static_cast<int>(s.num_methods()));
  for (const Row& r : parsed) {
    out.set_assigned(r.agent, r.task, true);
    out.set_claimed(r.agent, r.task, claimed_top(s, r.signals, r.line));
    for (std::size_t m = 0; m < r.signals.size(); ++m) out.set_signal(r.agent, r.task, static_cast<MethodId>(m), r.signals[m]);
  }
  out.validate(s);
  return out;
}

void write_multi_reports(const InformationStructure& s, const MultiReportSet& r, std::ostream& out) {
  out << "agent,task";
  for (const Method& m : s.methods) out << ',' << m.id;
  out << '\n';
  for (int i = 0; i < r.agents(); ++i)
    for (int t = 0; t < r.tasks(); ++t) {
      if (!r.assigned(i, t)) continue;
      out << i << ',' << t + 1;
      for (std::size_t m = 0; m < s.num_methods(); ++m) {
        const Signal v = r.signal(i, t, static_cast<MethodId>(m));
        out << ',' << (v == kEmpty ? kEmptyToken : s.methods[m].alphabet[v]);
      }
      out << '\n';
    }
}

std::vector<SubmittedVector> read_learning_vectors(std::istream& in) {
  const auto rows = read_csv(in);
  const auto& [hline, header] = rows.front();
  if (header.size() < 5 || header[0] != "agent" || header[1] != "label" || header[2] != "own")
    throw ValidationError(where(hline), "header must be agent,label,own,t1..tT with T >= 2");
  std::vector<SubmittedVector> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& [line, cells] = rows[k];
    if (cells.size() != header.size())
      throw ValidationError(where(line), "expected " + std::to_string(header.size()) + " cells");
    SubmittedVector v;
    v.agent = parse_int(cells[0], line, "agent");
    v.label = cells[1];
    const int own = parse_int(cells[2], line, "own");
    if (own != 0 && own != 1) throw ValidationError(where(line), "own must be 0 or 1");
    v.own = own == 1;
    for (std::size_t c = 3; c < cells.size(); ++c) {
      if (is_empty_cell(cells[c])) {
        v.values.push_back(kEmpty);
        continue;
      }
      const int x = parse_int(cells[c], line, "symbol");
      if (x < 0) throw ValidationError(where(line), "symbols must be >= 0");
      v.values.push_back(static_cast<Signal>(x));
    }
    out.push_back(std::move(v));
  }
  validate_submissions(out);
  return out;
}

void write_learning_vectors(const std::vector<SubmittedVector>& vectors, std::ostream& out) {
  const std::size_t T = vectors.empty() ? 0 : vectors.front().values.size();
  out << "agent,label,own";
  for (std::size_t t = 0; t < T; ++t) out << ",t" << t + 1;
  out << '\n';
  for (const SubmittedVector& v : vectors) {
    out << v.agent << ',' << v.label << ',' << (v.own ? 1 : 0);
    for (Signal x : v.values) {
      out << ',';
      if (x == kEmpty) {
        out << kEmptyToken;
      } else {
        out << x;
      }
    }
    out << '\n';
  }
}

std::vector<SingleReport> read_single_reports(const InformationStructure& s, std::istream& in) {
  const auto rows = read_csv(in);
  const auto& [hline, header] = rows.front();
  if (header.empty() || header[0] != "agent") throw ValidationError(where(hline), "header must start with agent");
  // Signal columns, then forecast columns named <method>:<label>.
  std::size_t first_forecast = 1;
  while (first_forecast < header.size() && header[first_forecast].find(':') == std::string::npos) ++first_forecast;
  const auto cols = method_columns(s, header, 1, first_forecast, hline);
  std::vector<std::pair<MethodId, Signal>> fcols;
  for (std::size_t k = first_forecast; k < header.size(); ++k) {
    const auto colon = header[k].find(':');
    if (colon == std::string::npos) throw ValidationError(where(hline), "signal columns must precede forecasts");
    MethodId m;
    try {
      m = s.method_index(header[k].substr(0, colon));
    } catch (const std::exception&) {
      throw ValidationError(where(hline), "unknown method in column '" + header[k] + "'");
    }
    fcols.emplace_back(m, parse_label(s, m, header[k].substr(colon + 1), hline));
  }
  std::vector<SingleReport> out(s.n_agents);
  std::vector<bool> seen(s.n_agents, false);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& [line, cells] = rows[k];
    if (cells.size() != header.size())
      throw ValidationError(where(line), "expected " + std::to_string(header.size()) + " cells");
    const int agent = parse_int(cells[0], line, "agent");
    if (agent < 0 || agent >= s.n_agents) throw ValidationError(where(line), "agent out of range");
    if (seen[agent]) throw ValidationError(where(line), "duplicate agent");
    seen[agent] = true;
    SingleReport& r = out[agent];
    r.signals.assign(s.num_methods(), kEmpty);
    for (std::size_t c = 0; c < cols.size(); ++c) r.signals[cols[c]] = parse_label(s, cols[c], cells[c + 1], line);
    r.performed = claimed_top(s, r.signals, line);
    r.forecasts.assign(s.num_methods(), {});
    std::vector<int> filled(s.num_methods(), 0), total(s.num_methods(), 0);
    for (std::size_t c = 0; c < fcols.size(); ++c) {
      const auto [m, sym] = fcols[c];
      ++total[m];
      const std::string& cell = cells[first_forecast + c];
      if (cell.empty()) continue;
      ++filled[m];
      if (r.forecasts[m].empty()) r.forecasts[m].assign(s.methods[m].alphabet_size(), 0.0);
      r.forecasts[m][sym] = parse_double(cell, line);
    }
    for (std::size_t m = 0; m < s.num_methods(); ++m) {
      if (filled[m] != 0 && (filled[m] != total[m] || total[m] != static_cast<int>(s.methods[m].alphabet_size())))
        throw ValidationError(where(line), "forecast for " + s.methods[m].id + " must give every signal");
    }
  }
  for (int i = 0; i < s.n_agents; ++i)
    if (!seen[i]) throw ValidationError("reports", "no row for agent " + std::to_string(i));
  validate_single_reports(s, out);
  return out;
}

}  // namespace hmip
