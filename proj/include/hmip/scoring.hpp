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

#ifndef HMIP_SCORING_HPP_
#define HMIP_SCORING_HPP_

#include <span>

#include "hmip/info_metrics.hpp"

namespace hmip {

enum class ScoringRule { kLog };

// L(x, q) = ln q(x). Throws ScoringError when q(x) = 0.
double log_score(Signal x, std::span<const double> q);

// PS(x, q) for the chosen rule.
double score(Signal x, std::span<const double> q, ScoringRule rule = ScoringRule::kLog);

// E_{x~p} PS(x, q). Outcomes with p(x) = 0 are skipped; an outcome with
// p(x) > 0 and q(x) = 0 throws ScoringError.
double expected_score(std::span<const double> p, std::span<const double> q,
                      ScoringRule rule = ScoringRule::kLog);

// Shannon entropy in nats.
double entropy(std::span<const double> p);

}  // namespace hmip

#endif  // HMIP_SCORING_HPP_
