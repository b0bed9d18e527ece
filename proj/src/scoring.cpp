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

#include "hmip/scoring.hpp"

#include <cmath>
#include <stdexcept>

namespace hmip {

double log_score(Signal x, std::span<const double> q) {
  if (x < 0 || static_cast<std::size_t>(x) >= q.size())
    throw std::out_of_range("log_score: outcome outside forecast alphabet");
  if (q[x] <= 0.0)
    throw ScoringError("log score of outcome " + std::to_string(x) + " forecast with probability 0");
  return std::log(q[x]);
}

double score(Signal x, std::span<const double> q, ScoringRule rule) {
  switch (rule) {
    case ScoringRule::kLog:
      return log_score(x, q);
  }
  throw std::logic_error("score: unknown rule");
}

double expected_score(std::span<const double> p, std::span<const double> q, ScoringRule rule) {
  if (p.size() != q.size()) throw std::invalid_argument("expected_score: alphabet mismatch");
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    total += p[x] * score(static_cast<Signal>(x), q, rule);
  }
  return total;
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

}  // namespace hmip
