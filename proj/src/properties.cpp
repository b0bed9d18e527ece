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

#include "hmip/properties.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmip/info_metrics.hpp"
#include "hmip/paradigm.hpp"
#include "hmip/scoring.hpp"
#include "hmip/single_hmim.hpp"

namespace hmip {
namespace {

constexpr double kTol = 1e-10;

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
  std::vector<double> p(k);
  double total = 0.0;
  for (double& v : p) total += v = -std::log(1.0 - uniform_real(rng));
  for (double& v : p) v /= total;
  return p;
}

std::size_t random_size(Rng& rng, std::size_t lo, std::size_t hi) { return lo + uniform_index(rng, hi - lo + 1); }

JointDistribution random_joint(Rng& rng, std::size_t kx, std::size_t ky) {
  return JointDistribution({"X", "Y"}, {kx, ky}, random_simplex(rng, kx * ky));
}

// Joint of (X, Y) from an input distribution and a channel rows[x][y].
JointDistribution joint_from_channel(const std::vector<double>& px, const std::vector<std::vector<double>>& w) {
  std::vector<double> t;
  for (std::size_t x = 0; x < px.size(); ++x)
    for (double v : w[x]) t.push_back(px[x] * v);
  return JointDistribution({"X", "Y"}, {px.size(), w[0].size()}, std::move(t));
}

std::vector<std::vector<double>> random_channel(Rng& rng, std::size_t kin, std::size_t kout) {
  std::vector<std::vector<double>> w(kin);
  for (auto& row : w) row = random_simplex(rng, kout);
  return w;
}

const FKind kKinds[] = {FKind::kKl, FKind::kTvd};

void record(PropertyResult& r, double violation, const std::string& what) {
  if (violation <= kTol) return;
  ++r.failures;
  if (r.example.empty()) r.example = what;
  r.worst = std::max(r.worst, violation);
}

}  // namespace

InformationStructure random_structure(Rng& rng) {
  StructureConfig c;
  const std::size_t na = random_size(rng, 2, 4);
  for (std::size_t a = 0; a < na; ++a) c.attribute_names.push_back("a" + std::to_string(a));
  c.attribute_probs = random_simplex(rng, na);
  const std::size_t nm = random_size(rng, 2, 3);
  for (std::size_t m = 0; m < nm; ++m) {
    const std::size_t k = random_size(rng, 2, 3);
    std::vector<std::string> alphabet;
    for (std::size_t s = 0; s < k; ++s) alphabet.push_back("s" + std::to_string(s));
    c.methods.push_back({"m" + std::to_string(m), alphabet, random_channel(rng, na, k)});
  }
  for (std::size_t hi = 1; hi < nm; ++hi)
    for (std::size_t lo = 0; lo < hi; ++lo)
      if (uniform_real(rng) < 0.6) c.edges.push_back({c.methods[hi].id, c.methods[lo].id});
  c.agent_classes.push_back({"any", 2, std::vector<double>(nm, 1.0)});
  return build_structure(c);
}

PropertyResult check_data_processing(std::uint64_t seed, int instances) {
  PropertyResult r{"data-processing"};
  Rng rng(seed);
  for (int k = 0; k < instances; ++k, ++r.instances) {
    const std::size_t kx = random_size(rng, 2, 4), ky = random_size(rng, 2, 4), kz = random_size(rng, 1, 4);
    const JointDistribution j = random_joint(rng, kx, ky);
    const auto garble = random_channel(rng, kx, kz);
    const JointDistribution g = j.through_channel({0}, garble, "Z").marginal({1, 0});
    for (FKind f : kKinds) {
      const double before = mutual_information(j, f), after = mutual_information(g, f);
      record(r, after - before, to_string(f) + ": garbled " + std::to_string(after) + " > " + std::to_string(before));
    }
  }
  return r;
}

PropertyResult check_mi_convexity(std::uint64_t seed, int instances) {
  PropertyResult r{"mi-convexity"};
  Rng rng(seed);
  for (int k = 0; k < instances; ++k, ++r.instances) {
    const std::size_t kx = random_size(rng, 2, 4), ky = random_size(rng, 2, 4);
    const auto px = random_simplex(rng, kx);
    const auto w1 = random_channel(rng, kx, ky), w2 = random_channel(rng, kx, ky);
    const double lambda = uniform_real(rng);
    auto mix = w1;
    for (std::size_t x = 0; x < kx; ++x)
      for (std::size_t y = 0; y < ky; ++y) mix[x][y] = lambda * w1[x][y] + (1.0 - lambda) * w2[x][y];
    for (FKind f : kKinds) {
      const double lhs = mutual_information(joint_from_channel(px, mix), f);
      const double rhs = lambda * mutual_information(joint_from_channel(px, w1), f) +
                         (1.0 - lambda) * mutual_information(joint_from_channel(px, w2), f);
      record(r, lhs - rhs, to_string(f) + ": mixture " + std::to_string(lhs) + " > " + std::to_string(rhs));
    }
  }
  return r;
}

PropertyResult check_mi_symmetry(std::uint64_t seed, int instances) {
  PropertyResult r{"mi-symmetry"};
  Rng rng(seed);
  for (int k = 0; k < instances; ++k, ++r.instances) {
    const std::size_t kx = random_size(rng, 2, 4), ky = random_size(rng, 2, 4);
    const JointDistribution j = random_joint(rng, kx, ky);
    const JointDistribution swapped = j.marginal({1, 0});
    const auto px = random_simplex(rng, kx), py = random_simplex(rng, ky);
    std::vector<double> prod;
    for (double a : px)
      for (double b : py) prod.push_back(a * b);
    const JointDistribution indep({"X", "Y"}, {kx, ky}, prod);
    for (FKind f : kKinds) {
      const double a = mutual_information(j, f), b = mutual_information(swapped, f);
      record(r, std::abs(a - b), to_string(f) + ": asymmetric " + std::to_string(a) + " vs " + std::to_string(b));
      record(r, -a, to_string(f) + ": negative " + std::to_string(a));
      record(r, std::abs(mutual_information(indep, f)), to_string(f) + ": product joint has MI");
    }
  }
  return r;
}

PropertyResult check_scoring_monotonicity(std::uint64_t seed, int instances) {
  PropertyResult r{"scoring-monotonicity"};
  Rng rng(seed);
  for (int k = 0; k < instances; ++k, ++r.instances) {
    const std::size_t ks = random_size(rng, 2, 4), ky = random_size(rng, 2, 4), kz = random_size(rng, 1, 4);
    const JointDistribution j = random_joint(rng, ks, ky);  // (signal, outcome)
    // Properness at a random belief.
    const auto p = random_simplex(rng, ky), q = random_simplex(rng, ky);
    record(r, expected_score(p, q) - expected_score(p, p), "log score not proper");
    // E[S(Y, Pr[Y|S])] >= E[S(Y, Pr[Y|M(S)])].
    const JointDistribution g = j.through_channel({0}, random_channel(rng, ks, kz), "Z").marginal({1, 0});
    auto value = [](const JointDistribution& d) {
      const std::size_t nx = d.sizes()[0], ny = d.sizes()[1];
      double v = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        double mass = 0.0;
        for (std::size_t y = 0; y < ny; ++y) mass += d.table()[x * ny + y];
        for (std::size_t y = 0; y < ny; ++y) {
          const double c = d.table()[x * ny + y];
          if (c > 0.0) v += c * std::log(c / mass);
        }
      }
      return v;
    };
    record(r, value(g) - value(j), "garbled posterior scored higher");
  }
  return r;
}

PropertyResult check_single_information_sign(std::uint64_t seed, int instances) {
  PropertyResult r{"single-information-nonpositive"};
  Rng rng(seed);
  for (int k = 0; k < instances; ++k, ++r.instances) {
    const InformationStructure s = random_structure(rng);
    SingleConfig c{Coefficients{random_simplex(rng, s.num_methods())}};
    for (double& a : c.alpha.alpha) a *= 10.0;
    const MethodId performed = static_cast<MethodId>(uniform_index(rng, s.num_methods()));
    std::vector<Signal> own(s.num_methods());
    for (std::size_t m = 0; m < own.size(); ++m)
      own[m] = static_cast<Signal>(uniform_index(rng, s.methods[m].alphabet_size()));
    std::vector<SingleReport> reports(2, truthful_single_report(s, performed, own));
    const bool equal = uniform_real(rng) < 0.25;
    if (!equal)
      for (std::size_t m = 0; m < s.num_methods(); ++m) reports[0].forecasts[m] = random_simplex(rng, s.methods[m].alphabet_size());
    Rng draw(k);
    const double v = information_score(s, reports, 0, c, draw).score;
    record(r, v, "positive information score " + std::to_string(v));
    if (equal) record(r, std::abs(v), "equal forecasts scored " + std::to_string(v));
    else if (v > -1e-14) record(r, 1.0, "distinct forecasts scored 0");
  }
  return r;
}

PropertyResult check_aoi_monotonicity(std::uint64_t seed, int instances) {
  PropertyResult r{"aoi-monotonicity"};
  Rng rng(seed);
  for (int k = 0; k < instances; ++k, ++r.instances) {
    const InformationStructure s = random_structure(rng);
    Coefficients alpha{random_simplex(rng, s.num_methods())};
    const SingleConfig single{alpha};
    for (FKind f : kKinds) {
      const AoiTable table = build_aoi_table(s, f);
      for (auto [hi, lo] : s.poset.closure_edges())
        record(r, table.aoi(alpha, lo) - table.aoi(alpha, hi),
               to_string(f) + " AOI drops from " + s.methods[lo].id + " to " + s.methods[hi].id);
    }
    for (auto [hi, lo] : s.poset.closure_edges())
      record(r, single_aoi(s, single, lo) - single_aoi(s, single, hi), "AOI_single drops along the poset");
    for (std::size_t m = 0; m < s.num_methods(); ++m)
      record(r, single_aoi(s, single, kNoEffort) - single_aoi(s, single, static_cast<MethodId>(m)),
             "AOI_single below the uninformed value");
  }
  return r;
}

std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int instances) {
  return {check_data_processing(mix_seed(seed, 1), instances),   check_mi_convexity(mix_seed(seed, 2), instances),
          check_mi_symmetry(mix_seed(seed, 3), instances),       check_scoring_monotonicity(mix_seed(seed, 4), instances),
          check_single_information_sign(mix_seed(seed, 5), instances), check_aoi_monotonicity(mix_seed(seed, 6), instances)};
}

}  // namespace hmip
