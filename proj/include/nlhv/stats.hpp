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

#ifndef NLHV_STATS_HPP
#define NLHV_STATS_HPP

#include <cstdint>

#include "nlhv/models.hpp"
#include "nlhv/rng.hpp"

namespace nlhv {

// Coincidence tallies from one run: events with equal vs opposite
// outcomes. Partial tallies combine by fieldwise addition.
struct CountData {
  std::uint64_t n_same = 0;
  std::uint64_t n_diff = 0;
  std::uint64_t n() const { return n_same + n_diff; }
};

// Divisor in the sample-mean variance: n, or n-1 for the
// small-sample-bias-corrected convention.
enum class VarianceConvention { N, NMinus1 };

struct CorrelationEstimate {
  double value;        // 2*sample_mean - 1, exactly
  double std_error;    // 2*sqrt(sample_mean*(1-sample_mean)/divisor)
  std::uint64_t n;
  double sample_mean;  // fraction of equal-outcome events
};

// Correlation and its standard error from the equal-outcome fraction.
// The outcome product is a two-valued variable, so its sample variance is
// determined by the mean: 4*S*(1-S).
CorrelationEstimate correlation_from_mean(double sample_mean, std::uint64_t n,
                                          VarianceConvention convention = VarianceConvention::N);

CorrelationEstimate estimate_correlation(const CountData& counts,
                                         VarianceConvention convention = VarianceConvention::N);

// Standard error of the correlation when n_same and n_diff are modeled as
// independent Poisson counts, propagated to first order. Algebraically
// identical to the binomial formula with divisor n.
double stderr_poisson_propagation(std::uint64_t n_same, std::uint64_t n_diff);

// Smallest n for which the predicted standard error at correlation
// expected_corr is at or below target_stderr.
std::uint64_t required_pairs(double expected_corr, double target_stderr);

// Fixed event count, or a Poisson-distributed count with mean
// duration_seconds * rate_hz.
class Schedule {
 public:
  static Schedule fixed_count(std::uint64_t n);
  static Schedule duration_rate(double duration_seconds, double rate_hz);

  std::uint64_t draw_count(RngStream& rng) const;

 private:
  Schedule(std::uint64_t n, double mean) : fixed_n_(n), poisson_mean_(mean) {}
  std::uint64_t fixed_n_;    // used when poisson_mean_ < 0
  double poisson_mean_;
};

// Runs one simulated experiment at fixed settings and tallies outcomes.
CountData run_experiment(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                         const Schedule& schedule, RngStream& rng);

}  // namespace nlhv

#endif  // NLHV_STATS_HPP
