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

#ifndef NLHV_MODELS_HPP
#define NLHV_MODELS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "nlhv/geom.hpp"
#include "nlhv/rng.hpp"

namespace nlhv {

// One emitted pair: Alice's photon carries polarization u, Bob's carries v.
struct PolarizationPair {
  UnitVec u;
  UnitVec v;
};

enum class SourceKind { SingularUniform, SingularFixedAxis, ProductUniform };

// Distribution F(u, v) of the pair polarizations. The "singular" sources
// put all mass on v = -u; the product source draws u and v independently.
class SourceDistribution {
 public:
  static SourceDistribution singular_uniform();
  static SourceDistribution singular_fixed_axis(const UnitVec& axis);
  static SourceDistribution product_uniform();

  SourceKind kind() const { return kind_; }
  const UnitVec& axis() const;
  bool is_singular() const { return kind_ != SourceKind::ProductUniform; }
  bool is_rotation_invariant() const { return kind_ != SourceKind::SingularFixedAxis; }

  PolarizationPair sample(RngStream& rng) const;

  // Exact first moments over F, used by the closed correlation formulas:
  //   mean_abs_sum  = E |u.a + v.b|
  //   mean_abs_diff = E |u.a - v.b|
  //   mean_product  = E [(u.a)(v.b)]
  double mean_abs_sum(const UnitVec& a, const UnitVec& b) const;
  double mean_abs_diff(const UnitVec& a, const UnitVec& b) const;
  double mean_product(const UnitVec& a, const UnitVec& b) const;

  std::string name() const;

 private:
  SourceDistribution(SourceKind kind, const UnitVec& axis) : kind_(kind), axis_(axis) {}

  SourceKind kind_;
  UnitVec axis_;  // only meaningful for SingularFixedAxis
};

enum class CouplingKind { AntiComonotone, Comonotone, Independent };

std::string coupling_name(CouplingKind c);

struct OutcomePair {
  int a_out;  // +1 or -1
  int b_out;
};

// Common interface for event-level simulation. Implementations draw from
// the caller's stream with a fixed number of uniforms per event, so a
// given (seed, stream) always yields the same outcome sequence.
class MeasurementModel {
 public:
  virtual ~MeasurementModel() = default;

  virtual OutcomePair sample_event(const UnitVec& a, const UnitVec& b, RngStream& rng) const = 0;

  // Exact correlation E[a_out * b_out] at fixed settings.
  virtual double correlation(const UnitVec& a, const UnitVec& b) const = 0;

  // Exact rotation-averaged correlation at separation alpha, when the
  // model admits one in closed form (it is then plane-independent).
  virtual std::optional<double> rotation_invariant_correlation(double alpha) const {
    (void)alpha;
    return std::nullopt;
  }

  virtual std::string name() const = 0;

  // Tallies n events into same/diff counts. The default loops
  // sample_event; subclasses override with the identical loop on their
  // concrete sampler so the per-event work inlines. Partial tallies
  // combine by addition.
  virtual void tally(const UnitVec& a, const UnitVec& b, std::uint64_t n, RngStream& rng,
                     std::uint64_t& n_same, std::uint64_t& n_diff) const;
};

// Singlet-state predictions: joint law (1 - A B a.b)/4, correlation -a.b.
class QuantumSinglet final : public MeasurementModel {
 public:
  OutcomePair sample_event(const UnitVec& a, const UnitVec& b, RngStream& rng) const override {
    return sample_one(a, b, rng);
  }
  double correlation(const UnitVec& a, const UnitVec& b) const override { return -dot(a, b); }
  std::optional<double> rotation_invariant_correlation(double alpha) const override {
    return -std::cos(alpha);
  }
  std::string name() const override { return "qm"; }
  void tally(const UnitVec& a, const UnitVec& b, std::uint64_t n, RngStream& rng,
             std::uint64_t& n_same, std::uint64_t& n_diff) const override;

 private:
  OutcomePair sample_one(const UnitVec& a, const UnitVec& b, RngStream& rng) const {
    const int a_out = rng.uniform01() < 0.5 ? +1 : -1;
    const double p_b_plus = 0.5 * (1.0 - a_out * dot(a, b));
    const int b_out = rng.uniform01() < p_b_plus ? +1 : -1;
    return {a_out, b_out};
  }
};

// Hidden-variable model: a source distribution over (u, v) plus a shared
// threshold variable xi that couples the two stations.
//
// Per event: draw (u, v), then xi uniform in [0,1); with
// p_A = (1 + u.a)/2 and p_B = (1 + v.b)/2,
//   a_out = sgn(p_A - xi)
//   b_out = sgn(p_B - xi')   where xi' is 1 - xi   (anti-comonotone)
//                                  or  xi          (comonotone)
//                                  or  independent uniform.
// sgn(0) := +1. Both stations then reproduce the cosine marginals
// E[a_out | u] = u.a and E[b_out | v] = v.b exactly, for any coupling.
class NlhvModel final : public MeasurementModel {
 public:
  NlhvModel(const SourceDistribution& source, CouplingKind coupling)
      : source_(source), coupling_(coupling) {}

  const SourceDistribution& source() const { return source_; }
  CouplingKind coupling() const { return coupling_; }

  OutcomePair sample_event(const UnitVec& a, const UnitVec& b, RngStream& rng) const override {
    return sample_one(a, b, rng);
  }

  // Averaging the per-pair conditional correlation over F:
  //   anti-comonotone: E|u.a + v.b| - 1
  //   comonotone:      1 - E|u.a - v.b|
  //   independent:     E[(u.a)(v.b)]
  double correlation(const UnitVec& a, const UnitVec& b) const override;

  std::optional<double> rotation_invariant_correlation(double alpha) const override;

  std::string name() const override;

  void tally(const UnitVec& a, const UnitVec& b, std::uint64_t n, RngStream& rng,
             std::uint64_t& n_same, std::uint64_t& n_diff) const override;

 private:
  OutcomePair sample_one(const UnitVec& a, const UnitVec& b, RngStream& rng) const {
    const PolarizationPair pair = source_.sample(rng);
    const double p_a = 0.5 * (1.0 + dot(pair.u, a));
    const double p_b = 0.5 * (1.0 + dot(pair.v, b));
    const double xi = rng.uniform01();
    const int a_out = p_a - xi >= 0.0 ? +1 : -1;
    double xi_b;
    switch (coupling_) {
      case CouplingKind::AntiComonotone:
        xi_b = 1.0 - xi;
        break;
      case CouplingKind::Comonotone:
        xi_b = xi;
        break;
      default:
        xi_b = rng.uniform01();
        break;
    }
    const int b_out = p_b - xi_b >= 0.0 ? +1 : -1;
    return {a_out, b_out};
  }

  SourceDistribution source_;
  CouplingKind coupling_;
};

// Singlet joint probability P(a_out = A, b_out = B) = (1 - A B a.b)/4.
double qm_joint_prob(const UnitVec& a, const UnitVec& b, int a_outcome, int b_outcome);

// Rotation-averaged correlation E(alpha) for the uniform singular source:
//   anti-comonotone: sin(alpha/2) - 1
//   comonotone:      1 - cos(alpha/2)
//   independent:     -cos(alpha)/3
double closed_form_E(const NlhvModel& model, double alpha);

struct MarginalEstimate {
  double mean;
  double std_error;
};

// Empirical mean of one station's outcome under any model at fixed
// settings; std_error is sqrt((1 - mean^2)/samples).
MarginalEstimate outcome_mean_a(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                                std::uint64_t samples, RngStream& rng);
MarginalEstimate outcome_mean_b(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                                std::uint64_t samples, RngStream& rng);

// Conditions the source on a delivered polarization u (resp. v) and
// checks the cosine marginal: the returned mean should match u.a
// (resp. v.b) within a few std errors. Requires samples >= 1e4.
MarginalEstimate malus_marginal_check(const NlhvModel& model, const UnitVec& a, const UnitVec& u,
                                      std::uint64_t samples, RngStream& rng);
MarginalEstimate malus_marginal_check_b(const NlhvModel& model, const UnitVec& b, const UnitVec& v,
                                        std::uint64_t samples, RngStream& rng);

}  // namespace nlhv

#endif  // NLHV_MODELS_HPP
