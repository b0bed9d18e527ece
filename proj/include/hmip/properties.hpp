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

#ifndef HMIP_PROPERTIES_HPP_
#define HMIP_PROPERTIES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hmip/information_structure.hpp"

namespace hmip {

// Randomized checks of the identities the mechanisms rely on. Each property
// draws `instances` random cases from its own seed stream.
struct PropertyResult {
  std::string name{};
  int instances = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation seen (0 when none)
  std::string example{};  // first failing case, if any

  bool passed() const { return failures == 0; }
};

// MI^f(M(X); Y) <= MI^f(X; Y) for random joints and channels (KL and TVD).
PropertyResult check_data_processing(std::uint64_t seed, int instances = 200);
// MI^f is convex in the channel P(Y|X) for a fixed input distribution.
PropertyResult check_mi_convexity(std::uint64_t seed, int instances = 200);
// MI^f(X;Y) = MI^f(Y;X) >= 0, and 0 for product joints.
PropertyResult check_mi_symmetry(std::uint64_t seed, int instances = 200);
// The log score is proper, and a posterior built from a garbled signal never
// scores better in expectation than one built from the signal itself.
PropertyResult check_scoring_monotonicity(std::uint64_t seed, int instances = 200);
// Single-HMIM information scores are <= 0, and 0 exactly when the shared
// forecasts coincide.
PropertyResult check_single_information_sign(std::uint64_t seed, int instances = 200);
// AOI (KL and TVD) and AOI_single never decrease along the method poset.
PropertyResult check_aoi_monotonicity(std::uint64_t seed, int instances = 200);

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int instances = 200);

// A random structure: 2-4 attributes, 2-3 methods with 2-3 signals each, a
// random poset (higher index may dominate lower), two agents with unit costs.
InformationStructure random_structure(Rng& rng);

}  // namespace hmip

#endif  // HMIP_PROPERTIES_HPP_
