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

#ifndef HMIP_COMMON_HPP_
#define HMIP_COMMON_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmip {

// Signals are small integer codes into a per-method alphabet.
using Signal = int;
inline constexpr Signal kEmpty = -1;

// Index of a method inside an InformationStructure.
using MethodId = int;
inline constexpr MethodId kNoEffort = -1;

using Rng = std::mt19937_64;

// Raised when a structure, scenario, or report set fails validation. `field`
// names the offending entry (e.g. "methods[1].channel[3]").
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Raised when an exact computation would enumerate more states than allowed.
class StateSpaceError : public std::runtime_error {
 public:
  StateSpaceError(std::uint64_t requested, std::uint64_t cap)
      : std::runtime_error("joint state space of " + std::to_string(requested) +
                           " states exceeds cap of " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::uint64_t requested() const { return requested_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

// Raised when a scoring rule is evaluated on an outcome the forecast rules
// out (log score of a zero-probability event).
class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Uniform index in [0, n) from a 64-bit engine. Lemire's multiply-shift with
// rejection, so draws are identical on every standard library.
std::size_t uniform_index(Rng& rng, std::size_t n);

// Uniform real in [0, 1) built from the top 53 bits of one draw.
double uniform_real(Rng& rng);

// Index drawn from a discrete distribution by inversion.
std::size_t sample_discrete(Rng& rng, const std::vector<double>& probs);

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hmip

#endif  // HMIP_COMMON_HPP_
