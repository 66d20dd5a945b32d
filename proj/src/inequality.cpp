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

#include "nlhv/inequality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "nlhv/stats.hpp"

namespace nlhv {

namespace {

struct GaussLegendre {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Nodes and weights by Newton iteration on the Legendre recurrence.
GaussLegendre gauss_legendre(int n) {
  GaussLegendre gl;
  gl.x.resize(n);
  gl.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pk = 0.0, deriv = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double pk_prev = 1.0;
      pk = t;
      for (int k = 2; k <= n; ++k) {
        const double pk_next = ((2.0 * k - 1.0) * t * pk - (k - 1.0) * pk_prev) / k;
        pk_prev = pk;
        pk = pk_next;
      }
      deriv = n * (t * pk - pk_prev) / (t * t - 1.0);
      const double step = pk / deriv;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    gl.x[i] = -t;
    gl.x[n - 1 - i] = t;
    const double w = 2.0 / ((1.0 - t * t) * deriv * deriv);
    gl.w[i] = w;
    gl.w[n - 1 - i] = w;
  }
  return gl;
}

struct MeanWithError {
  double mean = 0.0;
  double se = 0.0;
};

// Node-stratified Monte Carlo average over the rotation angle. Node k is
// fed from stream (seed, stream_base + k) regardless of thread layout.
MeanWithError mc_plane_average(const MeasurementModel& model, const Plane& p, double alpha,
                               const MonteCarloAverage& mc) {
  if (mc.nodes < 8) throw std::invalid_argument("averaging needs at least 8 nodes");
  if (mc.samples_per_node < 10000) {
    throw std::invalid_argument("monte carlo needs at least 1e4 samples per node");
  }
  const int nodes = mc.nodes;
  std::vector<double> node_mean(nodes);
  std::vector<double> node_var(nodes);  // variance of the node mean
  const auto run_node = [&](int k) {
    const double sigma = 2.0 * M_PI * k / nodes;
    const SettingPair s = settings_in_plane(p, alpha, sigma);
    RngStream rng(mc.seed, mc.stream_base + static_cast<std::uint64_t>(k));
    std::uint64_t same = 0, diff = 0;
    model.tally(s.a, s.b, mc.samples_per_node, rng, same, diff);
    const double n = static_cast<double>(mc.samples_per_node);
    const double m = (static_cast<double>(same) - static_cast<double>(diff)) / n;
    node_mean[k] = m;
    node_var[k] = std::max(0.0, 1.0 - m * m) / n;
  };
  const int workers = std::max(1, std::min(mc.threads, nodes));
  if (workers == 1) {
    for (int k = 0; k < nodes; ++k) run_node(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < nodes; k = next.fetch_add(1)) run_node(k);
      });
    }
    for (auto& th : pool) th.join();
  }
  MeanWithError out;
  double var_sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    out.mean += node_mean[k];
    var_sum += node_var[k];
  }
  out.mean /= nodes;
  out.se = std::sqrt(var_sum) / nodes;
  return out;
}

double quadrature_plane_average(const MeasurementModel& model, const Plane& p, double alpha,
                                int nodes) {
  if (nodes < 8) throw std::invalid_argument("averaging needs at least 8 nodes");
  double sum = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double sigma = 2.0 * M_PI * k / nodes;
    const SettingPair s = settings_in_plane(p, alpha, sigma);
    sum += model.correlation(s.a, s.b);
  }
  return sum / nodes;
}

}  // namespace

std::string describe_method(const AveragingMethod& method) {
  if (const auto* q = std::get_if<QuadratureAverage>(&method)) {
    return "quadrature(" + std::to_string(q->nodes) + ")";
  }
  if (const auto* mc = std::get_if<MonteCarloAverage>(&method)) {
    return "monte-carlo(" + std::to_string(mc->samples_per_node) + "x" +
           std::to_string(mc->nodes) + ")";
  }
  return "closed-form";
}

PlaneAveragedCorrelation plane_averaged_correlation(const MeasurementModel& model, const Plane& p,
                                                    double alpha, const AveragingMethod& method) {
  PlaneAveragedCorrelation out;
  out.alpha = alpha;
  out.plane_label = p.label;
  out.method = describe_method(method);
  if (const auto* q = std::get_if<QuadratureAverage>(&method)) {
    out.value = quadrature_plane_average(model, p, alpha, q->nodes);
  } else if (const auto* mc = std::get_if<MonteCarloAverage>(&method)) {
    const MeanWithError r = mc_plane_average(model, p, alpha, *mc);
    out.value = r.mean;
    out.std_error = r.se;
  } else {
    const std::optional<double> cf = model.rotation_invariant_correlation(alpha);
    if (!cf) throw std::invalid_argument("model has no closed-form rotation average");
    out.value = *cf;
  }
  return out;
}

double leggett_bound(double alpha) {
  return 4.0 - (4.0 / M_PI) * std::abs(std::sin(alpha / 2.0));
}

InequalityReport evaluate_inequality(const MeasurementModel& model, double alpha, const Plane& p1,
                                     const Plane& p2, const AveragingMethod& method,
                                     bool allow_non_orthogonal) {
  if (!allow_non_orthogonal && !planes_orthogonal(p1, p2)) {
    throw std::invalid_argument("orthogonality required by derivation");
  }
  // With Monte Carlo averaging the four correlations get disjoint stream
  // ranges, so the report is reproducible from (seed, stream_base) alone.
  const auto averaged = [&](const Plane& p, double ang, int slot) {
    AveragingMethod m = method;
    if (auto* mc = std::get_if<MonteCarloAverage>(&m)) {
      mc->stream_base += static_cast<std::uint64_t>(slot) * static_cast<std::uint64_t>(mc->nodes);
    }
    return plane_averaged_correlation(model, p, ang, m);
  };
  const PlaneAveragedCorrelation e1a = averaged(p1, alpha, 0);
  const PlaneAveragedCorrelation e10 = averaged(p1, 0.0, 1);
  const PlaneAveragedCorrelation e2a = averaged(p2, alpha, 2);
  const PlaneAveragedCorrelation e20 = averaged(p2, 0.0, 3);

  InequalityReport r;
  r.alpha = alpha;
  r.e_xy_alpha = e1a.value;
  r.e_xy_0 = e10.value;
  r.e_xz_alpha = e2a.value;
  r.e_xz_0 = e20.value;
  r.lhs = std::abs(e1a.value + e10.value) + std::abs(e2a.value + e20.value);
  r.bound = leggett_bound(alpha);
  r.margin = r.bound - r.lhs;
  r.violated = r.margin < 0.0;
  r.lhs_std_error = std::sqrt(e1a.std_error * e1a.std_error + e10.std_error * e10.std_error +
                              e2a.std_error * e2a.std_error + e20.std_error * e20.std_error);
  r.plane1_label = p1.label;
  r.plane2_label = p2.label;
  return r;
}

double violation_threshold() {
  const auto margin = [](double a) { return leggett_bound(a) - 2.0 * (1.0 + std::cos(a)); };
  double lo = 0.1;   // inside the violation region
  double hi = M_PI;  // bound holds here
  if (!(margin(lo) < 0.0) || !(margin(hi) > 0.0)) {
    throw std::logic_error("violation bracket is invalid");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MaxViolation max_violation_angle() {
  const auto excess = [](double a) { return 2.0 * (1.0 + std::cos(a)) - leggett_bound(a); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = M_PI;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = excess(x1), f2 = excess(x2);
  // Value comparisons go blind once the bracket is near sqrt(machine
  // epsilon) wide, so stop the golden section early...
  while (hi - lo > 1e-6) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = excess(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = excess(x2);
    }
  }
  // ...and polish on the sign of the derivative, which is well resolved:
  // d/da [2(1 + cos a) - bound(a)] = -2 sin a + (2/pi) cos(a/2) on (0, pi).
  const auto slope = [](double a) { return -2.0 * std::sin(a) + (2.0 / M_PI) * std::cos(a / 2.0); };
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  const double alpha = 0.5 * (lo + hi);
  return {alpha, excess(alpha)};
}

LemmaCheck verify_rotation_average_lemma(const UnitVec& a, const UnitVec& b, const UnitVec& u,
                                         int nodes) {
  if (nodes < 64) throw std::invalid_argument("lemma scan needs at least 64 nodes");
  const double coord_tol = 1e-12;
  Plane p;
  if (std::abs(a.z()) <= coord_tol && std::abs(b.z()) <= coord_tol) {
    p = Plane::xy();
  } else if (std::abs(a.y()) <= coord_tol && std::abs(b.y()) <= coord_tol) {
    p = Plane::xz();
  } else if (std::abs(a.x()) <= coord_tol && std::abs(b.x()) <= coord_tol) {
    p = Plane::yz();
  } else {
    throw std::invalid_argument("a and b must lie in a common coordinate plane");
  }

  const Vec3 c = a - b;
  const double chord = norm(c);
  const double rhs = (2.0 / M_PI) * chord * project_to_plane(u, p).magnitude;
  if (chord < 1e-15) return {0.0, rhs};

  const auto g = [&](double sigma) { return dot(rotate_about(p.normal, sigma, c), u.vec()); };
  const double two_pi = 2.0 * M_PI;
  const double h = two_pi / nodes;
  std::vector<double> gv(nodes);
  double gmax = 0.0;
  for (int k = 0; k < nodes; ++k) {
    gv[k] = g(h * k);
    gmax = std::max(gmax, std::abs(gv[k]));
  }
  // u orthogonal to the plane: the integrand vanishes identically.
  if (gmax < 1e-15) return {0.0, rhs};

  std::vector<double> cuts;
  for (int k = 0; k < nodes; ++k) {
    const double g1 = gv[k];
    const double g2 = gv[(k + 1) % nodes];
    if (g1 == 0.0) {
      cuts.push_back(h * k);
    } else if ((g1 < 0.0) != (g2 < 0.0) && g2 != 0.0) {
      double lo = h * k, hi = h * (k + 1);
      double glo = g1;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      cuts.push_back(0.5 * (lo + hi));
    }
  }

  static const GaussLegendre gl = gauss_legendre(48);
  const auto piece = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * std::abs(g(mid + half * gl.x[i]));
    return half * s;
  };

  double integral = 0.0;
  if (cuts.empty()) {
    integral = piece(0.0, two_pi);
  } else {
    std::sort(cuts.begin(), cuts.end());
    for (size_t i = 0; i < cuts.size(); ++i) {
      const double lo = cuts[i];
      const double hi = i + 1 < cuts.size() ? cuts[i + 1] : cuts[0] + two_pi;
      integral += piece(lo, hi);
    }
  }
  return {integral / two_pi, rhs};
}

namespace {

struct RunningMean {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    const double m = mean();
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - m * m);
    return std::sqrt(var / static_cast<double>(n));
  }
};

MeanWithError tally_correlation(const MeasurementModel& model, const UnitVec& a, const UnitVec& b,
                                std::uint64_t n, RngStream& rng) {
  std::uint64_t same = 0, diff = 0;
  model.tally(a, b, n, rng, same, diff);
  const CorrelationEstimate est = estimate_correlation(CountData{same, diff});
  return {est.value, est.std_error};
}

ChainStep make_step(const std::string& name, double lhs, double rhs, double sigma) {
  return {name, lhs, rhs, sigma, lhs <= rhs + 3.0 * sigma};
}

}  // namespace

ChainRecord verify_derivation_chain(const NlhvModel& model, double alpha, const Plane& plane,
                                    std::uint64_t samples, std::uint64_t seed) {
  if (samples < 100000) {
    throw std::invalid_argument("chain verification needs at least 1e5 samples");
  }
  ChainRecord rec;
  rec.model = model.name();
  rec.alpha = alpha;
  rec.plane_label = plane.label;
  rec.samples = samples;

  const SettingPair set = settings_in_plane(plane, alpha, 0.0);
  const UnitVec a = set.a;
  const UnitVec b = set.b;

  // Streams: 0 and 1 for the two fixed-setting correlations, 2 for the
  // source moments, then one per rotation node for E(alpha) and E(0).
  RngStream rng_ab(seed, 0);
  RngStream rng_aa(seed, 1);
  const MeanWithError c_ab = tally_correlation(model, a, b, samples, rng_ab);
  const MeanWithError c_aa = tally_correlation(model, a, a, samples, rng_aa);

  // All source moments share one draw sequence, so relations that hold
  // pointwise per draw hold exactly for the estimates.
  RngStream rng_src(seed, 2);
  RunningMean abs_sum_ab, abs_sum_aa, abs_diff_ab, chord_v, vplane, chord_u, uplane, triangle;
  const bool singular = model.source().is_singular();
  for (std::uint64_t i = 0; i < samples; ++i) {
    const PolarizationPair pair = model.source().sample(rng_src);
    const double ua = dot(pair.u, a);
    const double va = dot(pair.v, a);
    const double vb = dot(pair.v, b);
    const double sum_ab = std::abs(ua + vb);
    const double sum_aa = std::abs(ua + va);  // = |a . (u + v)|
    const double cv = std::abs(vb - va);      // |(b - a) . v|
    abs_sum_ab.add(sum_ab);
    abs_sum_aa.add(sum_aa);
    abs_diff_ab.add(std::abs(ua - vb));
    chord_v.add(cv);
    triangle.add(cv - sum_ab - sum_aa);
    vplane.add(project_to_plane(pair.v, plane).magnitude);
    if (singular) {
      chord_u.add(std::abs(ua - dot(pair.u, b)));
      uplane.add(project_to_plane(pair.u, plane).magnitude);
    }
  }

  const int e_nodes = 64;
  const auto averaged = [&](double ang, std::uint64_t stream_base) {
    double mean = 0.0, var_sum = 0.0;
    for (int k = 0; k < e_nodes; ++k) {
      const std::uint64_t n_k = samples / e_nodes + (static_cast<std::uint64_t>(k) < samples % e_nodes ? 1 : 0);
      const double sigma = 2.0 * M_PI * k / e_nodes;
      const SettingPair s = settings_in_plane(plane, ang, sigma);
      RngStream rng(seed, stream_base + static_cast<std::uint64_t>(k));
      const MeanWithError m = tally_correlation(model, s.a, s.b, n_k, rng);
      mean += m.mean;
      var_sum += m.se * m.se;
    }
    return MeanWithError{mean / e_nodes, std::sqrt(var_sum) / e_nodes};
  };
  const MeanWithError e_alpha = averaged(alpha, 3);
  const MeanWithError e_zero = averaged(0.0, 3 + e_nodes);

  rec.c_ab = c_ab.mean;
  rec.c_ab_se = c_ab.se;
  rec.c_aa = c_aa.mean;
  rec.c_aa_se = c_aa.se;
  rec.e_alpha = e_alpha.mean;
  rec.e_alpha_se = e_alpha.se;
  rec.e_zero = e_zero.mean;
  rec.e_zero_se = e_zero.se;
  rec.defect_aa = 1.0 + c_aa.mean;

  const auto rss = [](double s1, double s2) { return std::sqrt(s1 * s1 + s2 * s2); };
  const double factor = (4.0 / M_PI) * std::abs(std::sin(alpha / 2.0));

  // Station marginals squeeze each fixed-setting correlation between
  // |E[A|u] + E[B|v]| - 1 and 1 - |E[A|u] - E[B|v]|, averaged over F.
  rec.steps.push_back(make_step("correlation-upper", -c_ab.mean, 1.0 - abs_sum_ab.mean(),
                                rss(c_ab.se, abs_sum_ab.se())));
  rec.steps.push_back(make_step("correlation-lower", abs_diff_ab.mean() - 1.0, -c_ab.mean,
                                rss(abs_diff_ab.se(), c_ab.se)));
  // Summing the upper bounds for settings (a, b) and (a, a).
  rec.steps.push_back(make_step("defect-sum", -c_ab.mean - c_aa.mean,
                                2.0 - abs_sum_ab.mean() - abs_sum_aa.mean(),
                                rss(rss(c_ab.se, c_aa.se), rss(abs_sum_ab.se(), abs_sum_aa.se()))));
  // |u.a + v.b| + |u.a + v.a| >= |(b - a).v| pointwise; shared draws make
  // the sample version exact.
  rec.steps.push_back(make_step("triangle-step", triangle.mean(), 0.0, triangle.se()));
  // After rotation averaging, the chord average becomes the plane
  // projection of v scaled by (4/pi)|sin(alpha/2)|.
  const double rhs_avg = 2.0 - factor * vplane.mean();
  const double rhs_avg_se = factor * vplane.se();
  rec.steps.push_back(make_step("averaged-sum", -e_alpha.mean - e_zero.mean, rhs_avg,
                                rss(rss(e_alpha.se, e_zero.se), rhs_avg_se)));
  rec.steps.push_back(make_step("averaged-abs", std::abs(e_alpha.mean + e_zero.mean), rhs_avg,
                                rss(rss(e_alpha.se, e_zero.se), rhs_avg_se)));

  if (singular) {
    // v = -u support: |a . (u + v)| vanishes draw by draw.
    rec.steps.push_back(make_step("singular-support", abs_sum_aa.mean(), 0.0, abs_sum_aa.se()));
    rec.steps.push_back(make_step("anticorrelated-upper", -c_ab.mean, 1.0 - chord_u.mean(),
                                  rss(c_ab.se, chord_u.se())));
    rec.steps.push_back(make_step("per-plane-average", -e_alpha.mean,
                                  1.0 - factor * uplane.mean(),
                                  rss(e_alpha.se, factor * uplane.se())));
  }

  rec.all_hold = std::all_of(rec.steps.begin(), rec.steps.end(),
                             [](const ChainStep& s) { return s.holds; });
  return rec;
}

}  // namespace nlhv
