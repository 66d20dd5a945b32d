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

#ifndef NLHV_INEQUALITY_HPP
#define NLHV_INEQUALITY_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nlhv/geom.hpp"
#include "nlhv/models.hpp"

namespace nlhv {

// How to average the correlation over the analyzer rotation angle sigma.
//
// Quadrature evaluates the model's exact correlation on a periodic
// trapezoid grid. MonteCarlo simulates events node by node; each node k
// draws from stream (seed, stream_base + k), so results are independent
// of thread count. ClosedForm uses the model's analytic average.
struct QuadratureAverage {
  int nodes = 256;
};

struct MonteCarloAverage {
  std::uint64_t samples_per_node = 15625;
  int nodes = 64;
  std::uint64_t seed = 1;
  std::uint64_t stream_base = 0;
  int threads = 1;
};

struct ClosedFormAverage {};

using AveragingMethod = std::variant<QuadratureAverage, MonteCarloAverage, ClosedFormAverage>;

std::string describe_method(const AveragingMethod& method);

// Rotation-averaged correlation E(alpha) in one plane:
// (1/2pi) integral over sigma of C(a(sigma), b(sigma + alpha)).
struct PlaneAveragedCorrelation {
  double value = 0.0;
  double std_error = 0.0;  // zero for the exact methods
  double alpha = 0.0;
  std::string plane_label;
  std::string method;
};

PlaneAveragedCorrelation plane_averaged_correlation(const MeasurementModel& model, const Plane& p,
                                                    double alpha, const AveragingMethod& method);

// Upper bound 4 - (4/pi)|sin(alpha/2)| satisfied by every model in the
// hidden-variable class.
double leggett_bound(double alpha);

struct InequalityReport {
  double alpha = 0.0;
  double e_xy_alpha = 0.0;  // first plane, separation alpha
  double e_xy_0 = 0.0;      // first plane, separation 0
  double e_xz_alpha = 0.0;  // second plane, separation alpha
  double e_xz_0 = 0.0;      // second plane, separation 0
  double lhs = 0.0;         // |e_xy_alpha + e_xy_0| + |e_xz_alpha + e_xz_0|
  double bound = 0.0;
  double margin = 0.0;      // bound - lhs
  bool violated = false;    // margin < 0
  double lhs_std_error = 0.0;
  std::string plane1_label;
  std::string plane2_label;
};

// Evaluates the two-plane inequality. The derivation requires the two
// planes to be orthogonal; pass allow_non_orthogonal to explore what the
// expression does outside its hypotheses.
InequalityReport evaluate_inequality(const MeasurementModel& model, double alpha, const Plane& p1,
                                     const Plane& p2, const AveragingMethod& method,
                                     bool allow_non_orthogonal = false);

// Smallest alpha > 0 at which the singlet correlation starts violating
// the bound: the root of 4 - (4/pi)sin(alpha/2) = 2(1 + cos alpha),
// located by bisection to an interval width of 1e-12.
double violation_threshold();

struct MaxViolation {
  double alpha;
  double margin;  // violation amount: singlet lhs minus bound, positive
};

// Angle of maximal violation, located by golden-section search.
MaxViolation max_violation_angle();

struct LemmaCheck {
  double lhs;  // numerically averaged |(R(sigma)(a-b)) . u|
  double rhs;  // (2/pi) |a-b| |u projected to the plane of a, b|
};

// Checks the rotation-average identity for a, b lying in a common
// coordinate plane. The signed integrand is scanned on `nodes` points
// (at least 64); its zero crossings are bisected and each smooth piece
// is integrated by Gauss-Legendre, so |lhs - rhs| lands near machine
// precision, well within the 1e-6 contract at 1024 nodes.
LemmaCheck verify_rotation_average_lemma(const UnitVec& a, const UnitVec& b, const UnitVec& u,
                                         int nodes);

// One inequality of the derivation chain, estimated by simulation:
// holds means lhs <= rhs + 3 sigma.
struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double sigma = 0.0;
  bool holds = false;
};

struct ChainRecord {
  std::string model;
  double alpha = 0.0;
  std::string plane_label;
  std::uint64_t samples = 0;
  std::vector<ChainStep> steps;
  bool all_hold = false;
  // Estimated ingredients, for reporting.
  double c_ab = 0.0, c_ab_se = 0.0;        // C(a, b)
  double c_aa = 0.0, c_aa_se = 0.0;        // C(a, a)
  double e_alpha = 0.0, e_alpha_se = 0.0;  // E(alpha)
  double e_zero = 0.0, e_zero_se = 0.0;    // E(0)
  double defect_aa = 0.0;                  // 1 + C(a, a)
};

// Re-derives the inequality step by step from simulated estimates: the
// station marginals bound each fixed-setting correlation, the two-setting
// defect obeys the triangle step, and rotation averaging yields the
// plane-projected form. Every intermediate inequality is checked at
// 3 sigma. The singular-source steps (support diagnostic, anticorrelated
// bounds) are included when the model's source is singular.
ChainRecord verify_derivation_chain(const NlhvModel& model, double alpha, const Plane& plane,
                                    std::uint64_t samples, std::uint64_t seed);

}  // namespace nlhv

#endif  // NLHV_INEQUALITY_HPP
