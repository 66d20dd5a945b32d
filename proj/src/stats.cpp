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

#include "nlhv/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace nlhv {

CorrelationEstimate correlation_from_mean(double sample_mean, std::uint64_t n,
                                          VarianceConvention convention) {
  if (n == 0) throw std::invalid_argument("empty sample");
  if (!(sample_mean >= 0.0 && sample_mean <= 1.0)) {
    throw std::invalid_argument("sample mean must lie in [0, 1]");
  }
  const std::uint64_t divisor = convention == VarianceConvention::N ? n : n - 1;
  if (divisor == 0) throw std::invalid_argument("degenerate variance divisor");
  CorrelationEstimate est;
  est.value = 2.0 * sample_mean - 1.0;
  est.std_error = 2.0 * std::sqrt(sample_mean * (1.0 - sample_mean) / static_cast<double>(divisor));
  est.n = n;
  est.sample_mean = sample_mean;
  return est;
}

CorrelationEstimate estimate_correlation(const CountData& counts, VarianceConvention convention) {
  if (counts.n() == 0) throw std::invalid_argument("empty sample");
  const double mean = static_cast<double>(counts.n_same) / static_cast<double>(counts.n());
  return correlation_from_mean(mean, counts.n(), convention);
}

double stderr_poisson_propagation(std::uint64_t n_same, std::uint64_t n_diff) {
  const std::uint64_t n = n_same + n_diff;
  if (n == 0) throw std::invalid_argument("empty sample");
  const double dn = static_cast<double>(n);
  return 2.0 * std::sqrt(static_cast<double>(n_same) * static_cast<double>(n_diff)) /
         (dn * std::sqrt(dn));
}

std::uint64_t required_pairs(double expected_corr, double target_stderr) {
  if (!(std::abs(expected_corr) < 1.0)) {
    throw std::invalid_argument("degenerate sample mean");
  }
  if (!(target_stderr > 0.0)) {
    throw std::invalid_argument("target standard error must be positive");
  }
  const double mean = 0.5 * (expected_corr + 1.0);
  const double half_target = 0.5 * target_stderr;
  const double raw = mean * (1.0 - mean) / (half_target * half_target);
  // Small backoff so values that are integers up to rounding do not get
  // bumped to the next count.
  return static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
}

Schedule Schedule::fixed_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("event count must be positive");
  return Schedule(n, -1.0);
}

Schedule Schedule::duration_rate(double duration_seconds, double rate_hz) {
  if (!(duration_seconds > 0.0) || !(rate_hz > 0.0)) {
    throw std::invalid_argument("duration and rate must be positive");
  }
  return Schedule(0, duration_seconds * rate_hz);
}

std::uint64_t Schedule::draw_count(RngStream& rng) const {
  if (poisson_mean_ < 0.0) return fixed_n_;
  return sample_poisson(rng, poisson_mean_);
}

CountData run_experiment(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                         const Schedule& schedule, RngStream& rng) {
  const std::uint64_t n = schedule.draw_count(rng);
  CountData counts;
  model.tally(a, b, n, rng, counts.n_same, counts.n_diff);
  return counts;
}

}  // namespace nlhv
