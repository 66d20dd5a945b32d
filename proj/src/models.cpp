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

#include "nlhv/models.hpp"

#include <stdexcept>

namespace nlhv {

SourceDistribution SourceDistribution::singular_uniform() {
  return SourceDistribution(SourceKind::SingularUniform, UnitVec());
}

SourceDistribution SourceDistribution::singular_fixed_axis(const UnitVec& axis) {
  return SourceDistribution(SourceKind::SingularFixedAxis, axis);
}

SourceDistribution SourceDistribution::product_uniform() {
  return SourceDistribution(SourceKind::ProductUniform, UnitVec());
}

const UnitVec& SourceDistribution::axis() const {
  if (kind_ != SourceKind::SingularFixedAxis) {
    throw std::logic_error("only the fixed-axis source has an axis");
  }
  return axis_;
}

PolarizationPair SourceDistribution::sample(RngStream& rng) const {
  switch (kind_) {
    case SourceKind::SingularUniform: {
      const UnitVec u = sample_unit_vec(rng);
      return {u, -u};
    }
    case SourceKind::SingularFixedAxis:
      return {axis_, -axis_};
    default: {
      const UnitVec u = sample_unit_vec(rng);
      const UnitVec v = sample_unit_vec(rng);
      return {u, v};
    }
  }
}

double SourceDistribution::mean_abs_sum(const UnitVec& a, const UnitVec& b) const {
  switch (kind_) {
    case SourceKind::SingularUniform:
      // v = -u, so |u.a + v.b| = |u.(a - b)|; uniformly E|u.c| = |c|/2.
      return 0.5 * norm(a - b);
    case SourceKind::SingularFixedAxis:
      return std::abs(dot(axis_, a - b));
    default:
      // u.a and v.b are independent uniforms on [-1, 1]: E|X + Y| = 2/3.
      return 2.0 / 3.0;
  }
}

double SourceDistribution::mean_abs_diff(const UnitVec& a, const UnitVec& b) const {
  switch (kind_) {
    case SourceKind::SingularUniform:
      return 0.5 * norm(a + b);
    case SourceKind::SingularFixedAxis:
      return std::abs(dot(axis_, a + b));
    default:
      return 2.0 / 3.0;
  }
}

double SourceDistribution::mean_product(const UnitVec& a, const UnitVec& b) const {
  switch (kind_) {
    case SourceKind::SingularUniform:
      // E[(u.a)(u.b)] = a.b / 3 over the uniform sphere.
      return -dot(a, b) / 3.0;
    case SourceKind::SingularFixedAxis:
      return -dot(axis_, a) * dot(axis_, b);
    default:
      return 0.0;
  }
}

std::string SourceDistribution::name() const {
  switch (kind_) {
    case SourceKind::SingularUniform:
      return "singular-uniform";
    case SourceKind::SingularFixedAxis:
      return "singular-fixed-axis";
    default:
      return "product-uniform";
  }
}

std::string coupling_name(CouplingKind c) {
  switch (c) {
    case CouplingKind::AntiComonotone:
      return "anti-comonotone";
    case CouplingKind::Comonotone:
      return "comonotone";
    default:
      return "independent";
  }
}

void MeasurementModel::tally(const UnitVec& a, const UnitVec& b, std::uint64_t n, RngStream& rng,
                             std::uint64_t& n_same, std::uint64_t& n_diff) const {
  for (std::uint64_t i = 0; i < n; ++i) {
    const OutcomePair ev = sample_event(a, b, rng);
    if (ev.a_out == ev.b_out) {
      ++n_same;
    } else {
      ++n_diff;
    }
  }
}

void QuantumSinglet::tally(const UnitVec& a, const UnitVec& b, std::uint64_t n, RngStream& rng,
                           std::uint64_t& n_same, std::uint64_t& n_diff) const {
  std::uint64_t same = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const OutcomePair ev = sample_one(a, b, rng);
    same += ev.a_out == ev.b_out;
  }
  n_same += same;
  n_diff += n - same;
}

double NlhvModel::correlation(const UnitVec& a, const UnitVec& b) const {
  switch (coupling_) {
    case CouplingKind::AntiComonotone:
      return source_.mean_abs_sum(a, b) - 1.0;
    case CouplingKind::Comonotone:
      return 1.0 - source_.mean_abs_diff(a, b);
    default:
      return source_.mean_product(a, b);
  }
}

std::optional<double> NlhvModel::rotation_invariant_correlation(double alpha) const {
  switch (source_.kind()) {
    case SourceKind::SingularUniform:
      return closed_form_E(*this, alpha);
    case SourceKind::ProductUniform:
      // Constant in the settings: E|X+Y| = E|X-Y| = 2/3 for independent
      // uniforms, and the product moment vanishes.
      switch (coupling_) {
        case CouplingKind::AntiComonotone:
          return -1.0 / 3.0;
        case CouplingKind::Comonotone:
          return 1.0 / 3.0;
        default:
          return 0.0;
      }
    default:
      return std::nullopt;
  }
}

std::string NlhvModel::name() const {
  return "nlhv:" + source_.name() + ":" + coupling_name(coupling_);
}

void NlhvModel::tally(const UnitVec& a, const UnitVec& b, std::uint64_t n, RngStream& rng,
                      std::uint64_t& n_same, std::uint64_t& n_diff) const {
  std::uint64_t same = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const OutcomePair ev = sample_one(a, b, rng);
    same += ev.a_out == ev.b_out;
  }
  n_same += same;
  n_diff += n - same;
}

double qm_joint_prob(const UnitVec& a, const UnitVec& b, int a_outcome, int b_outcome) {
  if ((a_outcome != 1 && a_outcome != -1) || (b_outcome != 1 && b_outcome != -1)) {
    throw std::invalid_argument("outcomes must be +1 or -1");
  }
  return 0.25 * (1.0 - a_outcome * b_outcome * dot(a, b));
}

double closed_form_E(const NlhvModel& model, double alpha) {
  if (model.source().kind() != SourceKind::SingularUniform) {
    throw std::invalid_argument("closed form requires the uniform singular source");
  }
  switch (model.coupling()) {
    case CouplingKind::AntiComonotone:
      return std::abs(std::sin(alpha / 2.0)) - 1.0;
    case CouplingKind::Comonotone:
      return 1.0 - std::abs(std::cos(alpha / 2.0));
    default:
      return -std::cos(alpha) / 3.0;
  }
}

namespace {

MarginalEstimate outcome_mean(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                              std::uint64_t samples, RngStream& rng, bool alice) {
  if (samples == 0) throw std::invalid_argument("empty sample");
  std::int64_t sum = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const OutcomePair ev = model.sample_event(a, b, rng);
    sum += alice ? ev.a_out : ev.b_out;
  }
  const double mean = static_cast<double>(sum) / static_cast<double>(samples);
  const double var = std::max(0.0, 1.0 - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace

MarginalEstimate outcome_mean_a(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                                std::uint64_t samples, RngStream& rng) {
  return outcome_mean(model, a, b, samples, rng, true);
}

MarginalEstimate outcome_mean_b(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                                std::uint64_t samples, RngStream& rng) {
  return outcome_mean(model, a, b, samples, rng, false);
}

MarginalEstimate malus_marginal_check(const NlhvModel& model, const UnitVec& a, const UnitVec& u,
                                      std::uint64_t samples, RngStream& rng) {
  if (samples < 10000) throw std::invalid_argument("marginal check needs at least 1e4 samples");
  const NlhvModel conditioned(SourceDistribution::singular_fixed_axis(u), model.coupling());
  return outcome_mean_a(conditioned, a, a, samples, rng);
}

MarginalEstimate malus_marginal_check_b(const NlhvModel& model, const UnitVec& b, const UnitVec& v,
                                        std::uint64_t samples, RngStream& rng) {
  if (samples < 10000) throw std::invalid_argument("marginal check needs at least 1e4 samples");
  // The fixed-axis source delivers v = -axis to Bob.
  const NlhvModel conditioned(SourceDistribution::singular_fixed_axis(-v), model.coupling());
  return outcome_mean_b(conditioned, b, b, samples, rng);
}

}  // namespace nlhv
