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

// hmiplab: scenario-driven front end for the mechanisms and scans.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using hmip::cli::CommandOptions;
  CLI::App app{"hmiplab: hierarchical mutual-information peer prediction lab"};
  app.require_subcommand(1);
  CommandOptions o;
  std::string scenario;
  std::uint64_t seed = 0;
  int replicates = 0;
  int tasks = 0;
  std::string reports;
  std::string scan;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Scenario JSON file (default: built-in peer grading)");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--out-dir", o.out_dir, "Directory for output files")->default_val(".");
    sub->add_option("--replicates", replicates, "Override simulation replicates");
    sub->add_option("--tasks", tasks, "Override tasks per agent");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->default_val("csv");
  };

  auto* mi = app.add_subcommand("mi-table", "Exact Shannon and TVD MI tables");
  common(mi);
  auto* coeff = app.add_subcommand("coeff-solve", "Solve for potent coefficients");
  common(coeff);
  coeff->add_flag("--sweep", o.sweep, "Also re-solve at margins 1e-1 .. 0");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo utilities of the scenario profile");
  common(sim);
  auto* sc = app.add_subcommand("scan", "Deviation scan; exit 3 on a flagged deviation");
  common(sc);
  sc->add_option("--name", scan, "Named scan (truthful_multi, dominant_truthful_learning, ...)");
  sc->add_option("--learning-tasks", o.learning_tasks, "Tasks per learning replicate")->default_val(2000);
  sc->add_option("--learning-replicates", o.learning_replicates, "Learning replicates")->default_val(20);
  auto* learn = app.add_subcommand("learn", "Learn the hierarchy from answer vectors");
  common(learn);
  learn->add_option("--reports", reports, "Answer-vector CSV (default: simulate truthful agents)");
  learn->add_option("--noise-agents", o.noise_agents, "Uniform-noise agents added to simulated vectors")
      ->default_val(0);
  auto* pay = app.add_subcommand("pay", "Pay a reports file with the scenario's mechanism");
  common(pay);
  pay->add_option("--reports", reports, "Reports CSV")->required();
  auto* verify = app.add_subcommand("verify", "Run the randomized property suites");
  common(verify);
  verify->add_option("--instances", o.instances, "Instances per property")->default_val(200);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hmip::cli::kExitValidation;
  }
  CLI::App* chosen = app.get_subcommands().front();
  auto given = [&](const char* flag) { return chosen->count(flag) > 0; };
  if (given("--scenario")) o.scenario = scenario;
  if (given("--seed")) o.seed = seed;
  if (given("--replicates")) o.replicates = replicates;
  if (given("--tasks")) o.tasks = tasks;
  if (!reports.empty()) o.reports = reports;
  if (!scan.empty()) o.scan = scan;
  return hmip::cli::run_command(chosen->get_name(), o, std::cout, std::cerr);
}
