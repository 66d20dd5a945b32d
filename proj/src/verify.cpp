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

#include "nlhv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "nlhv/stats.hpp"

namespace nlhv {

namespace {

constexpr CouplingKind kCouplings[] = {CouplingKind::AntiComonotone, CouplingKind::Comonotone,
                                       CouplingKind::Independent};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// min over the sphere of |projection to xy| + |projection to xz| is 1,
// attained on the coordinate axes.
CheckResult check_projection_floor(const VerifyOptions& o) {
  RngStream rng(o.seed, 100);
  const Plane xy = Plane::xy();
  const Plane xz = Plane::xz();
  double min_sum = 2.0;
  for (std::uint64_t i = 0; i < o.sphere_samples; ++i) {
    const UnitVec u = sample_unit_vec(rng);
    min_sum = std::min(min_sum, project_to_plane(u, xy).magnitude +
                                    project_to_plane(u, xz).magnitude);
  }
  CheckResult r;
  r.name = "projection-floor";
  r.observed = min_sum;
  r.threshold = 1.0 - 1e-12;
  r.pass = min_sum >= r.threshold;
  r.detail = "min(|u_xy| + |u_xz|) = " + fmt(min_sum) + " over " +
             std::to_string(o.sphere_samples) + " directions";
  return r;
}

// |a - b| = 2|sin(alpha/2)| for unit vectors alpha apart.
CheckResult check_chord_identity(const VerifyOptions& o) {
  RngStream rng(o.seed, 101);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const UnitVec n = sample_unit_vec(rng);
    const Plane p = Plane::from_normal(n);
    const double alpha = rng.uniform(0.0, 2.0 * M_PI);
    const double sigma = rng.uniform(0.0, 2.0 * M_PI);
    const SettingPair s = settings_in_plane(p, alpha, sigma);
    worst = std::max(worst, std::abs(norm(s.a - s.b) - 2.0 * std::abs(std::sin(alpha / 2.0))));
  }
  CheckResult r;
  r.name = "chord-identity";
  r.observed = worst;
  r.threshold = 1e-12;
  r.pass = worst <= r.threshold;
  r.detail = "max deviation " + fmt(worst) + " over 10000 random planes";
  return r;
}

CheckResult check_rotation_average_lemma(const VerifyOptions& o) {
  RngStream rng(o.seed, 102);
  const int nodes = std::max(64, o.nodes);
  double worst = 0.0;
  const Plane planes[] = {Plane::xy(), Plane::xz(), Plane::yz()};
  for (const Plane& p : planes) {
    for (int t = 0; t < o.lemma_trials; ++t) {
      const SettingPair s =
          settings_in_plane(p, rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI));
      const UnitVec u = sample_unit_vec(rng);
      const LemmaCheck lc = verify_rotation_average_lemma(s.a, s.b, u, nodes);
      worst = std::max(worst, std::abs(lc.lhs - lc.rhs));
    }
  }
  CheckResult r;
  r.name = "rotation-average-lemma";
  r.observed = worst;
  const double scale = std::max(1.0, (1024.0 / nodes) * (1024.0 / nodes));
  r.threshold = 1e-6 * scale;
  r.pass = worst <= r.threshold;
  r.detail = "max |average - closed form| = " + fmt(worst) + " at " + std::to_string(nodes) +
             " scan nodes";
  return r;
}

// Every coupling reproduces the cosine marginal at both stations.
CheckResult check_malus_marginals(const VerifyOptions& o) {
  RngStream geom_rng(o.seed, 103);
  double worst = 0.0;
  for (const CouplingKind coupling : kCouplings) {
    for (int i = 0; i < o.malus_pairs; ++i) {
      const UnitVec u = sample_unit_vec(geom_rng);
      const UnitVec a = sample_unit_vec(geom_rng);
      {
        RngStream rng(o.seed, 110 + i);
        const NlhvModel inner(SourceDistribution::singular_fixed_axis(u), coupling);
        const BiasedAliceModel biased(inner, o.inject_bias);
        const MeasurementModel& model =
            o.inject_bias > 0.0 ? static_cast<const MeasurementModel&>(biased) : inner;
        const MarginalEstimate est = outcome_mean_a(model, a, a, o.samples, rng);
        worst = std::max(worst, std::abs(est.mean - dot(u, a)) / std::max(est.std_error, 1e-15));
      }
      {
        // Same directions reused as Bob's delivered polarization/setting.
        RngStream rng(o.seed, 120 + i);
        const NlhvModel inner(SourceDistribution::singular_fixed_axis(-u), coupling);
        const MarginalEstimate est = outcome_mean_b(inner, a, a, o.samples, rng);
        worst = std::max(worst, std::abs(est.mean - dot(u, a)) / std::max(est.std_error, 1e-15));
      }
    }
  }
  CheckResult r;
  r.name = "malus-marginal";
  r.observed = worst;
  r.threshold = 3.0;
  r.pass = worst <= r.threshold;
  r.detail = "worst |mean - u.a| in std errors: " + fmt(worst) +
             (o.inject_bias > 0.0 ? " (bias " + fmt(o.inject_bias) + " injected)" : "");
  return r;
}

CheckResult check_closed_form_agreement(const VerifyOptions& o) {
  const double alphas[] = {0.0, M_PI / 6, M_PI / 2, 2 * M_PI / 3, 5 * M_PI / 6, M_PI};
  const Plane plane = Plane::xy();
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (const CouplingKind coupling : kCouplings) {
    const NlhvModel model(SourceDistribution::singular_uniform(), coupling);
    for (const double alpha : alphas) {
      MonteCarloAverage mc;
      mc.nodes = 16;
      mc.samples_per_node = std::max<std::uint64_t>(10000, o.samples / 16);
      mc.seed = o.seed + 7;
      mc.stream_base = stream;
      stream += mc.nodes;
      const PlaneAveragedCorrelation e = plane_averaged_correlation(model, plane, alpha, mc);
      const double diff = std::abs(e.value - closed_form_E(model, alpha));
      worst = std::max(worst, diff / std::max(e.std_error, 1e-15));
    }
  }
  CheckResult r;
  r.name = "closed-form-agreement";
  r.observed = worst;
  r.threshold = 3.0;
  r.pass = worst <= r.threshold;
  r.detail = "worst Monte Carlo vs closed form deviation: " + fmt(worst) + " sigma";
  return r;
}

CheckResult check_derivation_chain(const VerifyOptions& o) {
  const std::uint64_t samples = std::max<std::uint64_t>(100000, o.samples);
  const Plane plane = Plane::xy();
  double min_slack = 1e300;
  bool all = true;
  std::string failing;
  const auto run = [&](const NlhvModel& model) {
    const ChainRecord rec = verify_derivation_chain(model, M_PI / 2, plane, samples, o.seed + 9);
    for (const ChainStep& s : rec.steps) {
      min_slack = std::min(min_slack, s.rhs + 3.0 * s.sigma - s.lhs);
      if (!s.holds) {
        all = false;
        if (!failing.empty()) failing += ", ";
        failing += rec.model + "/" + s.name;
      }
    }
  };
  for (const CouplingKind coupling : kCouplings) {
    run(NlhvModel(SourceDistribution::singular_uniform(), coupling));
  }
  run(NlhvModel(SourceDistribution::product_uniform(), CouplingKind::AntiComonotone));
  CheckResult r;
  r.name = "derivation-chain";
  r.observed = min_slack;
  r.threshold = 0.0;
  r.pass = all;
  r.detail = all ? "every step holds; smallest slack (with 3 sigma) = " + fmt(min_slack)
                 : "failing steps: " + failing;
  return r;
}

CheckResult check_bound_exact(const VerifyOptions& o) {
  double min_margin = 1e300;
  const Plane xy = Plane::xy();
  const Plane xz = Plane::xz();
  for (const CouplingKind coupling : kCouplings) {
    const NlhvModel model(SourceDistribution::singular_uniform(), coupling);
    for (int i = 0; i < o.grid; ++i) {
      const double alpha = M_PI * i / (o.grid - 1);
      const InequalityReport rep =
          evaluate_inequality(model, alpha, xy, xz, ClosedFormAverage{});
      min_margin = std::min(min_margin, rep.margin);
    }
  }
  CheckResult r;
  r.name = "bound-exact";
  r.observed = min_margin;
  r.threshold = -1e-12;
  r.pass = min_margin >= r.threshold;
  r.detail = "min closed-form margin over couplings and " + std::to_string(o.grid) +
             " angles: " + fmt(min_margin);
  return r;
}

CheckResult check_bound_monte_carlo(const VerifyOptions& o) {
  const double alphas[] = {M_PI / 3, 0.648, 2.0};
  const Plane xy = Plane::xy();
  const Plane xz = Plane::xz();
  double worst = -1e300;  // max of (-margin - 3 sigma); compliance keeps it <= 0
  std::uint64_t stream = 0;
  for (const CouplingKind coupling : kCouplings) {
    const NlhvModel model(SourceDistribution::singular_uniform(), coupling);
    for (const double alpha : alphas) {
      MonteCarloAverage mc;
      mc.nodes = 8;
      mc.samples_per_node = std::max<std::uint64_t>(10000, o.samples / 8);
      mc.seed = o.seed + 11;
      mc.stream_base = stream;
      stream += 4 * mc.nodes;
      const InequalityReport rep = evaluate_inequality(model, alpha, xy, xz, mc);
      worst = std::max(worst, -rep.margin - 3.0 * rep.lhs_std_error);
    }
  }
  CheckResult r;
  r.name = "bound-monte-carlo";
  r.observed = worst;
  r.threshold = 0.0;
  r.pass = worst <= r.threshold;
  r.detail = "max simulated bound excess (minus 3 sigma): " + fmt(worst);
  return r;
}

CheckResult check_quantum_violation(const VerifyOptions& o) {
  const double threshold_alpha = violation_threshold();
  const MaxViolation mv = max_violation_angle();
  const double expect_threshold = 2.0 * std::asin(1.0 / M_PI);
  const double expect_peak = 2.0 * std::asin(1.0 / (2.0 * M_PI));
  const double expect_margin = 1.0 / (M_PI * M_PI);
  double worst = std::abs(threshold_alpha - expect_threshold);
  worst = std::max(worst, std::abs(mv.alpha - expect_peak));
  worst = std::max(worst, std::abs(mv.margin - expect_margin));
  bool sign_ok = true;
  const QuantumSinglet qm;
  for (int i = 1; i < o.grid; ++i) {
    const double alpha = M_PI * i / (o.grid - 1);
    const InequalityReport rep =
        evaluate_inequality(qm, alpha, Plane::xy(), Plane::xz(), ClosedFormAverage{});
    if (rep.violated != (alpha < threshold_alpha)) sign_ok = false;
  }
  CheckResult r;
  r.name = "quantum-violation";
  r.observed = worst;
  r.threshold = 1e-9;
  r.pass = worst <= r.threshold && sign_ok;
  r.detail = "threshold/peak/margin deviations <= " + fmt(worst) +
             (sign_ok ? "; violation region matches the threshold" : "; REGION MISMATCH");
  return r;
}

CheckResult check_quadrature_convergence(const VerifyOptions& o) {
  const Plane xy = Plane::xy();
  const Plane tilted = Plane::from_normal(UnitVec::normalized({1.0, 2.0, 2.0}));
  const double alpha = M_PI / 3;
  double worst = 0.0;
  const auto probe = [&](const MeasurementModel& model) {
    const int n = std::max(8, o.nodes);
    const double e1 = plane_averaged_correlation(model, xy, alpha, QuadratureAverage{n}).value;
    const double e2 =
        plane_averaged_correlation(model, xy, alpha, QuadratureAverage{2 * n}).value;
    const double e3 = plane_averaged_correlation(model, tilted, alpha, QuadratureAverage{n}).value;
    worst = std::max(worst, std::abs(e2 - e1));
    worst = std::max(worst, std::abs(e3 - e1));  // plane independence
  };
  probe(QuantumSinglet());
  for (const CouplingKind coupling : kCouplings) {
    probe(NlhvModel(SourceDistribution::singular_uniform(), coupling));
  }
  CheckResult r;
  r.name = "quadrature-convergence";
  r.observed = worst;
  r.threshold = 1e-9;
  r.pass = worst <= r.threshold;
  r.detail = "max node-doubling / plane-change shift for rotation-invariant models: " + fmt(worst);
  return r;
}

CheckResult check_estimator_identities(const VerifyOptions& o) {
  RngStream rng(o.seed, 104);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n_same = 1 + static_cast<std::uint64_t>(rng.uniform01() * 1e6);
    const std::uint64_t n_diff = 1 + static_cast<std::uint64_t>(rng.uniform01() * 1e6);
    const CorrelationEstimate est = estimate_correlation(CountData{n_same, n_diff});
    worst = std::max(worst, std::abs(est.std_error - stderr_poisson_propagation(n_same, n_diff)));
    worst = std::max(worst, std::abs(est.value - (2.0 * est.sample_mean - 1.0)));
  }
  const CorrelationEstimate balanced = estimate_correlation(CountData{50, 50});
  worst = std::max(worst, std::abs(balanced.std_error - 0.1));
  worst = std::max(worst, std::abs(balanced.value));
  worst = std::max(worst, std::abs(static_cast<double>(required_pairs(0.0, 0.1)) - 100.0));
  CheckResult r;
  r.name = "estimator-identities";
  r.observed = worst;
  r.threshold = 1e-12;
  r.pass = worst <= r.threshold;
  r.detail = "max identity violation: " + fmt(worst);
  return r;
}

CheckResult check_determinism(const VerifyOptions& o) {
  const NlhvModel model(SourceDistribution::singular_uniform(), CouplingKind::AntiComonotone);
  const SettingPair s = settings_in_plane(Plane::xy(), M_PI / 3, 0.4);
  const auto tally_once = [&](std::uint64_t stream) {
    RngStream rng(o.seed, stream);
    std::uint64_t same = 0, diff = 0;
    model.tally(s.a, s.b, 20000, rng, same, diff);
    return same;
  };
  const bool repeatable = tally_once(105) == tally_once(105);
  const bool streams_differ = tally_once(105) != tally_once(106);
  CheckResult r;
  r.name = "determinism";
  r.observed = repeatable && streams_differ ? 1.0 : 0.0;
  r.threshold = 1.0;
  r.pass = repeatable && streams_differ;
  r.detail = std::string(repeatable ? "identical streams repeat" : "STREAM NOT REPEATABLE") +
             std::string(streams_differ ? "; distinct streams differ" : "; STREAMS COLLIDE");
  return r;
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  report.checks.push_back(check_projection_floor(options));
  report.checks.push_back(check_chord_identity(options));
  report.checks.push_back(check_rotation_average_lemma(options));
  report.checks.push_back(check_malus_marginals(options));
  report.checks.push_back(check_closed_form_agreement(options));
  report.checks.push_back(check_derivation_chain(options));
  report.checks.push_back(check_bound_exact(options));
  report.checks.push_back(check_bound_monte_carlo(options));
  report.checks.push_back(check_quantum_violation(options));
  report.checks.push_back(check_quadrature_convergence(options));
  report.checks.push_back(check_estimator_identities(options));
  report.checks.push_back(check_determinism(options));
  report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const CheckResult& c) { return c.pass; });
  return report;
}

}  // namespace nlhv
