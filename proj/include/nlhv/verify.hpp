// Copyright 2026 The nlhvlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLHV_VERIFY_HPP
#define NLHV_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nlhv/inequality.hpp"
#include "nlhv/models.hpp"

namespace nlhv {

struct VerifyOptions {
  std::uint64_t seed = 20260818;
  std::uint64_t samples = 200000;  // events per Monte Carlo estimate
  int nodes = 256;                 // rotation-average resolution
  int grid = 19;                   // angles for the bound-satisfaction scan
  int malus_pairs = 4;             // random (u, a) pairs per coupling
  std::uint64_t sphere_samples = 1000000;
  int lemma_trials = 25;           // random triples per coordinate plane
  double inject_bias = 0.0;        // corrupt Alice's outcomes (self test)
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass = false;
};

// Runs the whole consistency battery: geometric identities, the
// rotation-average lemma, station marginals, closed-form agreement, the
// derivation chain, bound satisfaction for the hidden-variable models,
// the singlet violation curve, quadrature convergence, estimator
// identities, and stream determinism.
VerifyReport run_verification(const VerifyOptions& options);

// Self-test fixture: flips Alice's outcome with probability p, which
// breaks the cosine marginal while leaving Bob's station untouched.
class BiasedAliceModel final : public MeasurementModel {
 public:
  BiasedAliceModel(const MeasurementModel& inner, double p) : inner_(inner), p_(p) {}

  OutcomePair sample_event(const UnitVec& a, const UnitVec& b, RngStream& rng) const override {
    OutcomePair ev = inner_.sample_event(a, b, rng);
    if (rng.uniform01() < p_) ev.a_out = -ev.a_out;
    return ev;
  }

  double correlation(const UnitVec& a, const UnitVec& b) const override {
    return (1.0 - 2.0 * p_) * inner_.correlation(a, b);
  }

  std::string name() const override { return "biased-alice(" + inner_.name() + ")"; }

 private:
  const MeasurementModel& inner_;
  double p_;
};

}  // namespace nlhv

#endif  // NLHV_VERIFY_HPP
