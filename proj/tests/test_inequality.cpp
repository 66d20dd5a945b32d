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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlhv/inequality.hpp"
#include "nlhv/serialize.hpp"
#include "oracles.hpp"

using namespace nlhv;

namespace {

NlhvModel uniform_model(CouplingKind c) {
  return NlhvModel(SourceDistribution::singular_uniform(), c);
}

double quantum_lhs(double alpha) { return 2.0 * (1.0 + std::cos(alpha)); }

const ChainStep& find_step(const ChainRecord& rec, const std::string& name) {
  for (const ChainStep& s : rec.steps) {
    if (s.name == name) return s;
  }
  REQUIRE_MESSAGE(false, "missing chain step: " << name);
  return rec.steps.front();
}

}  // namespace

TEST_CASE("bound curve pinned values and shape") {
  CHECK(leggett_bound(0.0) == 4.0);
  CHECK(std::abs(leggett_bound(M_PI) - (4.0 - 4.0 / M_PI)) <= 1e-12);
  CHECK(std::abs(leggett_bound(M_PI / 2.0) - (4.0 - (4.0 / M_PI) * std::sqrt(0.5))) <= 1e-12);
  CHECK(std::abs(leggett_bound(M_PI) - 2.72676045526483731) <= 1e-12);
  CHECK(std::abs(leggett_bound(M_PI / 2.0) - 3.09968368384289393) <= 1e-12);
  for (int i = 0; i + 1 <= 180; ++i) {
    const double a1 = M_PI * i / 180.0;
    const double a2 = M_PI * (i + 1) / 180.0;
    CHECK(leggett_bound(a2) < leggett_bound(a1));
    CHECK(leggett_bound(-a1) == leggett_bound(a1));
  }
}

TEST_CASE("quadrature of a rotation-invariant correlation is the constant") {
  const QuantumSinglet qm;
  for (const Plane& p : {Plane::xy(), Plane::xz(), Plane::yz()}) {
    const PlaneAveragedCorrelation e =
        plane_averaged_correlation(qm, p, M_PI / 3.0, QuadratureAverage{64});
    CHECK(std::abs(e.value + 0.5) <= 1e-12);
    CHECK(e.std_error == 0.0);
    CHECK(e.plane_label == p.label);
  }
  CHECK_THROWS_AS(
      plane_averaged_correlation(qm, Plane::xy(), 1.0, QuadratureAverage{4}),
      std::invalid_argument);
}

TEST_CASE("closed-form averaging uses the model's analytic curve") {
  const QuantumSinglet qm;
  for (double alpha : {0.0, 0.4, 1.3, 2.8}) {
    const PlaneAveragedCorrelation e =
        plane_averaged_correlation(qm, Plane::xz(), alpha, ClosedFormAverage{});
    CHECK(std::abs(e.value + std::cos(alpha)) <= 1e-15);
  }
  const NlhvModel fixed(SourceDistribution::singular_fixed_axis(UnitVec()),
                        CouplingKind::Comonotone);
  CHECK_THROWS_AS(plane_averaged_correlation(fixed, Plane::xy(), 1.0, ClosedFormAverage{}),
                  std::invalid_argument);
}

TEST_CASE("quadrature matches the closed forms for the uniform singular source") {
  const CouplingKind couplings[] = {CouplingKind::AntiComonotone, CouplingKind::Comonotone,
                                    CouplingKind::Independent};
  for (CouplingKind c : couplings) {
    const NlhvModel model = uniform_model(c);
    for (double alpha : {0.0, 0.5, 1.5, 2.7, M_PI}) {
      const PlaneAveragedCorrelation e =
          plane_averaged_correlation(model, Plane::xy(), alpha, QuadratureAverage{256});
      CHECK(std::abs(e.value - closed_form_E(model, alpha)) <= 1e-12);
    }
  }
}

TEST_CASE("Monte Carlo averaging agrees with the closed form and validates input") {
  const NlhvModel anti = uniform_model(CouplingKind::AntiComonotone);
  MonteCarloAverage mc;
  mc.samples_per_node = 20000;
  mc.nodes = 16;
  mc.seed = 401;
  const PlaneAveragedCorrelation e =
      plane_averaged_correlation(anti, Plane::xz(), M_PI / 2.0, MonteCarloAverage(mc));
  CHECK(e.std_error > 0.0);
  CHECK(std::abs(e.value - closed_form_E(anti, M_PI / 2.0)) <= 3.0 * e.std_error);

  MonteCarloAverage too_few = mc;
  too_few.samples_per_node = 5000;
  CHECK_THROWS_AS(plane_averaged_correlation(anti, Plane::xz(), 1.0, MonteCarloAverage(too_few)),
                  std::invalid_argument);
  MonteCarloAverage few_nodes = mc;
  few_nodes.nodes = 4;
  CHECK_THROWS_AS(
      plane_averaged_correlation(anti, Plane::xz(), 1.0, MonteCarloAverage(few_nodes)),
      std::invalid_argument);
}

TEST_CASE("Monte Carlo averaging is deterministic and thread-count independent") {
  const NlhvModel com = uniform_model(CouplingKind::Comonotone);
  MonteCarloAverage mc;
  mc.samples_per_node = 10000;
  mc.nodes = 8;
  mc.seed = 402;
  const double v1 =
      plane_averaged_correlation(com, Plane::xy(), 1.0, MonteCarloAverage(mc)).value;
  const double v2 =
      plane_averaged_correlation(com, Plane::xy(), 1.0, MonteCarloAverage(mc)).value;
  CHECK(v1 == v2);

  MonteCarloAverage threaded = mc;
  threaded.threads = 3;
  const double v3 =
      plane_averaged_correlation(com, Plane::xy(), 1.0, MonteCarloAverage(threaded)).value;
  CHECK(v1 == v3);

  MonteCarloAverage other_seed = mc;
  other_seed.seed = 403;
  const double v4 =
      plane_averaged_correlation(com, Plane::xy(), 1.0, MonteCarloAverage(other_seed)).value;
  CHECK(v1 != v4);
}

TEST_CASE("method descriptions are stable") {
  CHECK(describe_method(QuadratureAverage{256}) == "quadrature(256)");
  MonteCarloAverage mc;
  CHECK(describe_method(mc) == "monte-carlo(15625x64)");
  CHECK(describe_method(ClosedFormAverage{}) == "closed-form");
}

TEST_CASE("inequality evaluation demands orthogonal planes unless overridden") {
  const QuantumSinglet qm;
  const Plane tilted = Plane::from_span({1.0, 0.0, 0.0}, {0.0, 1.0, 1.0});
  CHECK_THROWS_AS(
      evaluate_inequality(qm, 1.0, Plane::xy(), tilted, ClosedFormAverage{}),
      std::invalid_argument);
  const InequalityReport rep =
      evaluate_inequality(qm, 1.0, Plane::xy(), tilted, ClosedFormAverage{}, true);
  CHECK(rep.plane2_label == tilted.label);
}

TEST_CASE("singlet inequality curve matches the analytic left-hand side") {
  const QuantumSinglet qm;
  const double threshold = 2.0 * std::asin(1.0 / M_PI);
  for (int i = 0; i <= 180; ++i) {
    const double alpha = M_PI * i / 180.0;
    const InequalityReport rep =
        evaluate_inequality(qm, alpha, Plane::xy(), Plane::xz(), ClosedFormAverage{});
    CHECK(std::abs(rep.lhs - quantum_lhs(alpha)) <= 1e-12);
    CHECK(std::abs(rep.margin - (rep.bound - rep.lhs)) <= 1e-15);
    CHECK(rep.violated == (rep.margin < 0.0));
    if (i > 0) {
      CHECK(rep.violated == (alpha < threshold));
    }
  }
}

TEST_CASE("report fields satisfy their defining identities") {
  const NlhvModel ind = uniform_model(CouplingKind::Independent);
  const InequalityReport rep =
      evaluate_inequality(ind, 2.0, Plane::xy(), Plane::xz(), QuadratureAverage{64});
  CHECK(rep.lhs == std::abs(rep.e_xy_alpha + rep.e_xy_0) + std::abs(rep.e_xz_alpha + rep.e_xz_0));
  CHECK(rep.margin == rep.bound - rep.lhs);
  CHECK(rep.alpha == 2.0);
  CHECK(rep.plane1_label == "xy");
  CHECK(rep.plane2_label == "xz");

  const nlohmann::json j = to_json(rep);
  CHECK(j["alpha"] == 2.0);
  CHECK(j.contains("e_xy_alpha"));
  CHECK(j.contains("e_xy_0"));
  CHECK(j.contains("e_xz_alpha"));
  CHECK(j.contains("e_xz_0"));
  CHECK(j.contains("lhs"));
  CHECK(j.contains("bound"));
  CHECK(j.contains("margin"));
  CHECK(j.contains("violated"));
  CHECK(j.contains("lhs_stderr"));
}

TEST_CASE("inequality is symmetric under plane swap and angle sign") {
  const NlhvModel anti = uniform_model(CouplingKind::AntiComonotone);
  for (double alpha : {0.3, 1.1, 2.6}) {
    const InequalityReport r1 =
        evaluate_inequality(anti, alpha, Plane::xy(), Plane::xz(), ClosedFormAverage{});
    const InequalityReport r2 =
        evaluate_inequality(anti, alpha, Plane::xz(), Plane::xy(), ClosedFormAverage{});
    const InequalityReport r3 =
        evaluate_inequality(anti, -alpha, Plane::xy(), Plane::xz(), ClosedFormAverage{});
    CHECK(r1.lhs == r2.lhs);
    CHECK(r1.lhs == r3.lhs);
    CHECK(r1.bound == r3.bound);
  }
}

TEST_CASE("hidden-variable closed forms never violate the bound") {
  const double eps = 1e-12;
  for (int i = 0; i <= 180; ++i) {
    const double alpha = M_PI * i / 180.0;
    const double s = std::sin(alpha / 2.0);
    const InequalityReport anti = evaluate_inequality(
        uniform_model(CouplingKind::AntiComonotone), alpha, Plane::xy(), Plane::xz(),
        ClosedFormAverage{});
    CHECK_FALSE(anti.violated);
    CHECK(std::abs(anti.margin - (2.0 - 4.0 / M_PI) * s) <= 1e-12);
    const InequalityReport com = evaluate_inequality(
        uniform_model(CouplingKind::Comonotone), alpha, Plane::xy(), Plane::xz(),
        ClosedFormAverage{});
    CHECK(com.margin >= -eps);
    const InequalityReport ind = evaluate_inequality(
        uniform_model(CouplingKind::Independent), alpha, Plane::xy(), Plane::xz(),
        ClosedFormAverage{});
    CHECK(ind.margin >= -eps);
  }
  const InequalityReport at_zero = evaluate_inequality(
      uniform_model(CouplingKind::AntiComonotone), 0.0, Plane::xy(), Plane::xz(),
      ClosedFormAverage{});
  CHECK(at_zero.margin == 0.0);
  CHECK(at_zero.lhs == 4.0);
}

TEST_CASE("two-plane sum obeys the projected bound for every variant") {
  const CouplingKind couplings[] = {CouplingKind::AntiComonotone, CouplingKind::Comonotone,
                                    CouplingKind::Independent};
  for (CouplingKind c : couplings) {
    const NlhvModel model = uniform_model(c);
    for (int i = 0; i <= 180; ++i) {
      const double alpha = M_PI * i / 180.0;
      const double e = closed_form_E(model, alpha);
      CHECK(-2.0 * e <= 2.0 - (4.0 / M_PI) * std::sin(alpha / 2.0) + 1e-12);
    }
  }
}

TEST_CASE("violation threshold and optimum match the analytic roots") {
  const double threshold = violation_threshold();
  CHECK(std::abs(threshold - 2.0 * std::asin(1.0 / M_PI)) <= 1e-9);

  const MaxViolation best = max_violation_angle();
  CHECK(std::abs(best.alpha - 2.0 * std::asin(1.0 / (2.0 * M_PI))) <= 1e-9);
  CHECK(std::abs(best.margin - 1.0 / (M_PI * M_PI)) <= 1e-9);

  // Independent scan oracle over the violation excess.
  const auto excess = [](double a) { return quantum_lhs(a) - leggett_bound(a); };
  const oracles::GridMax scan = oracles::grid_argmax(excess, 1e-4, 1.5, 200000);
  CHECK(std::abs(scan.x - best.alpha) <= 1e-3);
  CHECK(std::abs(scan.value - best.margin) <= 1e-6);
  CHECK(excess(threshold / 2.0) > 0.0);
  CHECK(excess(1.1 * threshold) < 0.0);
}

TEST_CASE("rotation-average identity holds across coordinate planes") {
  RngStream rng(404);
  for (const Plane& p : {Plane::xy(), Plane::xz(), Plane::yz()}) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double alpha = rng.uniform(0.0, M_PI);
      const double sigma = rng.uniform(0.0, 2.0 * M_PI);
      const SettingPair s = settings_in_plane(p, alpha, sigma);
      const UnitVec u = sample_unit_vec(rng);
      const LemmaCheck check = verify_rotation_average_lemma(s.a, s.b, u, 1024);
      worst = std::max(worst, std::abs(check.lhs - check.rhs));
      const double expected =
          (2.0 / M_PI) * norm(s.a - s.b) * project_to_plane(u, p).magnitude;
      CHECK(std::abs(check.rhs - expected) <= 1e-12);
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("rotation-average identity edge cases") {
  RngStream rng(405);
  const Plane xy = Plane::xy();
  const SettingPair s = settings_in_plane(xy, 1.0, 0.3);

  const LemmaCheck same = verify_rotation_average_lemma(s.a, s.a, sample_unit_vec(rng), 1024);
  CHECK(same.lhs == 0.0);
  CHECK(same.rhs == 0.0);

  const LemmaCheck polar = verify_rotation_average_lemma(
      s.a, s.b, UnitVec::from_components(0.0, 0.0, 1.0), 1024);
  CHECK(std::abs(polar.lhs) <= 1e-12);
  CHECK(polar.rhs == 0.0);

  const UnitVec out_of_plane = UnitVec::normalized({1.0, 1.0, 1.0});
  CHECK_THROWS_AS(verify_rotation_average_lemma(s.a, out_of_plane, sample_unit_vec(rng), 1024),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_rotation_average_lemma(s.a, s.b, sample_unit_vec(rng), 32),
                  std::invalid_argument);
}

TEST_CASE("derivation chain holds and saturates for the anti-comonotone model") {
  const NlhvModel anti = uniform_model(CouplingKind::AntiComonotone);
  const ChainRecord rec = verify_derivation_chain(anti, M_PI / 2.0, Plane::xy(), 200000, 406);
  CHECK(rec.all_hold);
  CHECK(rec.samples == 200000);
  CHECK(rec.c_aa == -1.0);
  CHECK(rec.defect_aa == 0.0);

  const ChainStep& support = find_step(rec, "singular-support");
  CHECK(support.lhs == 0.0);
  CHECK(support.sigma == 0.0);

  // The per-plane bound is tight for this model: both sides estimate
  // 1 - sin(alpha/2).
  const ChainStep& per_plane = find_step(rec, "per-plane-average");
  CHECK(std::abs(per_plane.lhs - per_plane.rhs) <= 3.0 * per_plane.sigma);
  CHECK(std::abs(per_plane.rhs - (1.0 - std::sin(M_PI / 4.0))) <= 0.01);

  const nlohmann::json j = to_json(rec);
  CHECK(j["all_hold"] == true);
  CHECK(j["steps"].size() == rec.steps.size());
  CHECK(j["steps"][0].contains("name"));
  CHECK(j["steps"][0].contains("lhs"));
  CHECK(j["steps"][0].contains("rhs"));
  CHECK(j["steps"][0].contains("sigma"));
  CHECK(j["steps"][0].contains("holds"));
}

TEST_CASE("derivation chain holds for the other couplings and sources") {
  const ChainRecord com = verify_derivation_chain(uniform_model(CouplingKind::Comonotone),
                                                  M_PI / 2.0, Plane::xz(), 150000, 407);
  CHECK(com.all_hold);
  // E[AB | a = b] averages 1 - 2|u.a| to zero.
  CHECK(std::abs(com.c_aa) <= 3.0 * com.c_aa_se);

  const ChainRecord ind = verify_derivation_chain(uniform_model(CouplingKind::Independent),
                                                  M_PI / 2.0, Plane::xy(), 150000, 408);
  CHECK(ind.all_hold);
  // Away from the support identities, every inequality is strict by a
  // wide margin for the independent coupling.
  for (const ChainStep& s : ind.steps) {
    if (s.name == "triangle-step" || s.name == "singular-support") {
      CHECK(std::abs(s.rhs - s.lhs) <= 3.0 * std::max(s.sigma, 1e-12));
    } else {
      CHECK(s.rhs - s.lhs > 0.1);
    }
  }

  const NlhvModel product(SourceDistribution::product_uniform(), CouplingKind::AntiComonotone);
  const ChainRecord prod = verify_derivation_chain(product, M_PI / 2.0, Plane::xy(), 150000, 409);
  CHECK(prod.all_hold);
  CHECK(prod.steps.size() == 6);  // no singular-support steps

  CHECK_THROWS_AS(verify_derivation_chain(product, 1.0, Plane::xy(), 99999, 1),
                  std::invalid_argument);
}

TEST_CASE("comonotone correlation at equal settings averages to zero") {
  // Spot check of the c_aa claim above with the exact formula:
  // E[AB | u] = 1 - 2|u.a| under the comonotone coupling, so the uniform
  // average is 1 - 2 E|u.a| = 0.
  const NlhvModel com = uniform_model(CouplingKind::Comonotone);
  const UnitVec a = UnitVec::normalized({0.3, -0.5, 0.81});
  CHECK(std::abs(com.correlation(a, a)) <= 1e-12);
  const double oracle = oracles::sphere_mean(
      [&](const Vec3& u) { return 1.0 - 2.0 * std::abs(dot(a.vec(), u)); });
  CHECK(std::abs(oracle) <= 2e-3);
}
