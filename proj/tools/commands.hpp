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

#ifndef HMIP_TOOLS_COMMANDS_HPP_
#define HMIP_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hmip::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // infeasible solve, failed recovery, I/O
inline constexpr int kExitValidation = 2;
inline constexpr int kExitViolation = 3;  // scan flag or failed property

struct CommandOptions {
  std::optional<std::string> scenario;  // unset: built-in peer-grading scenario
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::optional<int> tasks;
  std::string out_dir = ".";
  std::string format = "csv";  // csv or json

  std::optional<std::string> reports;  // pay, learn
  std::optional<std::string> scan;     // named scan
  bool sweep = false;                  // coeff-solve margin sweep
  int noise_agents = 0;                // learn
  int learning_tasks = 2000;           // named learning scan
  int learning_replicates = 20;
  int instances = 200;  // verify
};

// Each command writes its files under out_dir and a short summary to `log`.
// Exceptions propagate; run_command maps them to exit codes.
int cmd_mi_table(const CommandOptions& o, std::ostream& log);
int cmd_coeff_solve(const CommandOptions& o, std::ostream& log);
int cmd_simulate(const CommandOptions& o, std::ostream& log);
int cmd_scan(const CommandOptions& o, std::ostream& log);
int cmd_learn(const CommandOptions& o, std::ostream& log);
int cmd_pay(const CommandOptions& o, std::ostream& log);
int cmd_verify(const CommandOptions& o, std::ostream& log);

// Dispatches by command name; ValidationError → 2 with the message on `err`.
int run_command(const std::string& name, const CommandOptions& o, std::ostream& log, std::ostream& err);

}  // namespace hmip::cli

#endif  // HMIP_TOOLS_COMMANDS_HPP_
