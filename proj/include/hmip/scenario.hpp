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

#ifndef HMIP_SCENARIO_HPP_
#define HMIP_SCENARIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hmip/simulation.hpp"
#include "hmip/theorem_scans.hpp"

namespace hmip {

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kMulti;
  std::vector<double> alpha;  // empty: potent coefficients are solved for
  FKind fkind = FKind::kKl;
  double delta0 = 0.0;  // learning; <= 0 suggests one per run
  RuleL rule = default_learning_rule();
  double info_weight = 1.0;
  double prediction_weight = 1.0;
  double margin = 1e-3;   // coefficient solver
  double epsilon = 1e-6;  // coefficient solver
  int batch = 0;
  double flat_payment = 1.0;
};

struct SimulationSpec {
  int tasks = 200;
  int replicates = 100;
  std::uint64_t seed = 1;
  // Per agent, a method id or "none"; empty means the prudent profile.
  std::vector<std::string> profile;
  LibraryOptions library;
  // Deviating agents for `scan`; empty means the first agent of each cost class.
  std::vector<int> scan_agents;
};

struct Scenario {
  std::string name;
  StructureConfig structure;
  MechanismSpec mechanism;
  SimulationSpec simulation;
};

// Unknown keys and wrongly typed values throw ValidationError naming the
// JSON path; malformed JSON reports its line and column.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
// Pretty-printed, every field explicit, stable across runs.
std::string serialize_scenario(const Scenario& scenario);

Scenario peer_grading_scenario();

// Coefficients the scenario's mechanism runs with: explicit alpha if given,
// otherwise the potent setup for that mechanism (rule by depth for learning).
Coefficients scenario_alpha(const Scenario& sc, const InformationStructure& s);
// Explicit profile, or the prudent one under scenario_alpha.
std::vector<MethodId> scenario_profile(const Scenario& sc, const InformationStructure& s);
MechanismConfig scenario_mechanism(const Scenario& sc, const InformationStructure& s);

// Report files. Cells hold alphabet labels; "∅" or an empty cell is an
// empty entry. Lines are "a,b,c" without quoting.
//
// Multi: header agent,task,<method ids>; one row per assigned (agent, task),
// tasks numbered from 1.
// The claimed method on a row is its deepest non-empty method.
MultiReportSet read_multi_reports(const InformationStructure& s, std::istream& in);
void write_multi_reports(const InformationStructure& s, const MultiReportSet& r, std::ostream& out);
// Learning: header agent,label,own,t1..tT; symbols are integer codes.
std::vector<SubmittedVector> read_learning_vectors(std::istream& in);
void write_learning_vectors(const std::vector<SubmittedVector>& v, std::ostream& out);
// Single: header agent,<method ids>,<method>:<label> forecast columns; one
// row per agent. A blank forecast group means no forecast for that method.
std::vector<SingleReport> read_single_reports(const InformationStructure& s, std::istream& in);

}  // namespace hmip

#endif  // HMIP_SCENARIO_HPP_
