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

#ifndef HMIP_THEOREM_SCANS_HPP_
#define HMIP_THEOREM_SCANS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hmip/coefficient_solver.hpp"
#include "hmip/simulation.hpp"

namespace hmip {

// Coefficients and the prudent pure-effort profile they induce.
struct PotentSetup {
  Coefficients alpha;
  std::vector<MethodId> profile;
  bool potent = false;
};

// Potent α for Multi-HMIM against its exact per-task payment
// (multi_level_terms at `tasks`), margin 1e-2.
PotentSetup multi_potent_setup(const InformationStructure& s, int tasks);
// Rule L coefficients by true depth and the prudent KL profile they induce.
PotentSetup learning_potent_setup(const InformationStructure& s, const RuleL& rule);
// Potent α for Single-HMIM against AOI_single measured from the uninformed
// value, margin 1e-2.
PotentSetup single_potent_setup(const InformationStructure& s);
// AOI_single(p) − AOI_single(uninformed), split per method, as a solver table.
AoiTable single_aoi_table(const InformationStructure& s);

// (ε, 12, 450) by depth: potent for Learning-based Multi-HMIM on peer
// grading, with low-cost agents on m_q and high-cost agents on m_w.
RuleL default_learning_rule();

struct NamedScanOptions {
  int tasks = 200;
  int replicates = 200;
  int learning_tasks = 2000;
  int learning_replicates = 20;
  std::uint64_t seed = 1;
};

struct NamedScanReport {
  std::string name;
  bool passed = false;
  std::vector<ScanResult> scans;
  std::vector<std::string> notes;
};

// truthful_multi, dominant_truthful_learning, strict_truthful_single,
// potent_hmip, mixed_effort_dominated.
const std::vector<std::string>& named_scan_names();
NamedScanReport run_named_scan(const std::string& name, const InformationStructure& s,
                               const NamedScanOptions& options = {});

}  // namespace hmip

#endif  // HMIP_THEOREM_SCANS_HPP_
