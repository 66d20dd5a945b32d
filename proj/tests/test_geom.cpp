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

#include <cmath>
#include <stdexcept>

#include "nlhv/geom.hpp"
#include "nlhv/rng.hpp"

using namespace nlhv;

namespace {

double dist(const UnitVec& a, const Vec3& b) { return norm(a.vec() - b); }

}  // namespace

TEST_CASE("from_polar matches the polar convention") {
  CHECK(dist(from_polar(0.0, 0.7), {0.0, 0.0, 1.0}) <= 1e-15);
  CHECK(dist(from_polar(M_PI / 2.0, 0.0), {1.0, 0.0, 0.0}) <= 1e-15);
  CHECK(dist(from_polar(M_PI / 2.0, M_PI / 2.0), {0.0, 1.0, 0.0}) <= 1e-15);

  RngStream rng(101);
  for (int i = 0; i < 200; ++i) {
    const UnitVec u = from_polar(rng.uniform(0.0, M_PI), rng.uniform(0.0, 2.0 * M_PI));
    CHECK(std::abs(norm(u.vec()) - 1.0) <= 1e-12);
  }
}

TEST_CASE("unit vector construction validates its input") {
  CHECK_THROWS_AS(UnitVec::from_components(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UnitVec::normalized({0.0, 0.0, 0.0}), std::invalid_argument);
  const UnitVec u = UnitVec::normalized({3.0, 4.0, 0.0});
  CHECK(dist(u, {0.6, 0.8, 0.0}) <= 1e-15);
  const UnitVec w = UnitVec::from_components(0.6, 0.8, 0.0);
  CHECK(w.x() == 0.6);
  CHECK(dist(-w, {-0.6, -0.8, 0.0}) <= 1e-15);
}

TEST_CASE("rotate_about basic cases") {
  const UnitVec z = UnitVec::from_components(0.0, 0.0, 1.0);
  const UnitVec x = UnitVec::from_components(1.0, 0.0, 0.0);
  CHECK(dist(rotate_about(z, M_PI / 2.0, x), {0.0, 1.0, 0.0}) <= 1e-15);

  RngStream rng(102);
  for (int i = 0; i < 50; ++i) {
    const UnitVec v = sample_unit_vec(rng);
    const UnitVec axis = sample_unit_vec(rng);
    CHECK(dist(rotate_about(axis, 0.0, v), v.vec()) <= 1e-15);
  }
}

TEST_CASE("rotating a about the a x b axis by their angle lands on b") {
  RngStream rng(103);
  for (int i = 0; i < 100; ++i) {
    const UnitVec a = sample_unit_vec(rng);
    const UnitVec b = sample_unit_vec(rng);
    const Vec3 axis_raw = cross(a.vec(), b.vec());
    if (norm(axis_raw) < 1e-6) continue;  // skip near-parallel draws
    const UnitVec axis = UnitVec::normalized(axis_raw);
    const UnitVec rotated = rotate_about(axis, angle_between(a, b), a);
    CHECK(dist(rotated, b.vec()) <= 1e-12);
  }
}

TEST_CASE("rotations preserve norms and dot products") {
  RngStream rng(104);
  for (int i = 0; i < 100; ++i) {
    const UnitVec axis = sample_unit_vec(rng);
    const double sigma = rng.uniform(0.0, 2.0 * M_PI);
    const UnitVec v = sample_unit_vec(rng);
    const UnitVec w = sample_unit_vec(rng);
    const UnitVec rv = rotate_about(axis, sigma, v);
    const UnitVec rw = rotate_about(axis, sigma, w);
    CHECK(std::abs(norm(rv.vec()) - 1.0) <= 1e-12);
    CHECK(std::abs(dot(rv, rw) - dot(v, w)) <= 1e-12);
  }
}

TEST_CASE("angle_between endpoints and clamping") {
  RngStream rng(105);
  const UnitVec x = UnitVec::from_components(1.0, 0.0, 0.0);
  const UnitVec y = UnitVec::from_components(0.0, 1.0, 0.0);
  CHECK(std::abs(angle_between(x, y) - M_PI / 2.0) <= 1e-15);
  for (int i = 0; i < 100; ++i) {
    const UnitVec a = sample_unit_vec(rng);
    CHECK(angle_between(a, a) == 0.0);
    CHECK(angle_between(a, -a) == M_PI);
  }
}

TEST_CASE("plane constructors produce labeled orthonormal frames") {
  for (const Plane& p : {Plane::xy(), Plane::xz(), Plane::yz()}) {
    CHECK(std::abs(dot(p.e1, p.e2)) <= 1e-12);
    CHECK(norm(cross(p.e1.vec(), p.e2.vec()) - p.normal.vec()) <= 1e-12);
  }
  CHECK(Plane::xy().label == "xy");
  CHECK(Plane::xz().label == "xz");
  CHECK(Plane::yz().label == "yz");
  CHECK(dist(Plane::xy().normal, {0.0, 0.0, 1.0}) <= 1e-15);
  CHECK(planes_orthogonal(Plane::xy(), Plane::xz()));
  CHECK(planes_orthogonal(Plane::xy(), Plane::yz()));
  CHECK_FALSE(planes_orthogonal(Plane::xy(), Plane::xy()));
}

TEST_CASE("from_span orthonormalizes and rejects degenerate spans") {
  const Plane p = Plane::from_span({1.0, 0.0, 0.0}, {1.0, 1.0, 0.0});
  CHECK(std::abs(dot(p.e1, p.e2)) <= 1e-15);
  CHECK(dist(p.e2, {0.0, 1.0, 0.0}) <= 1e-15);
  CHECK_THROWS_AS(Plane::from_span({1.0, 0.0, 0.0}, {2.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("from_normal completes a right-handed orthonormal frame") {
  RngStream rng(106);
  for (int i = 0; i < 100; ++i) {
    const UnitVec n = sample_unit_vec(rng);
    const Plane p = Plane::from_normal(n);
    CHECK(std::abs(dot(p.e1, p.e2)) <= 1e-12);
    CHECK(std::abs(dot(p.e1, n)) <= 1e-12);
    CHECK(dist(p.normal, n.vec()) <= 1e-12);
    CHECK(norm(cross(p.e1.vec(), p.e2.vec()) - n.vec()) <= 1e-12);
  }
}

TEST_CASE("projection basics") {
  const Plane xy = Plane::xy();
  CHECK(project_to_plane(UnitVec::from_components(0.0, 0.0, 1.0), xy).magnitude == 0.0);
  CHECK(project_to_plane(UnitVec::from_components(1.0, 0.0, 0.0), xy).magnitude == 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(project_to_plane(UnitVec::from_components(r, 0.0, r), xy).magnitude - r) <=
        1e-15);

  RngStream rng(107);
  for (int i = 0; i < 100; ++i) {
    const UnitVec u = sample_unit_vec(rng);
    const Plane p = Plane::from_normal(sample_unit_vec(rng));
    const PlaneProjection proj = project_to_plane(u, p);
    CHECK(std::abs(dot(proj.in_plane, p.normal)) <= 1e-12);
    CHECK(proj.magnitude <= 1.0 + 1e-12);
    CHECK(norm(proj.in_plane - (u.vec() - dot(u, p.normal) * p.normal.vec())) <= 1e-12);
  }
}

TEST_CASE("xy and xz projection magnitudes always sum to at least 1") {
  RngStream rng(108);
  const Plane xy = Plane::xy();
  const Plane xz = Plane::xz();
  double worst = 2.0;
  for (int i = 0; i < 1000000; ++i) {
    const UnitVec u = sample_unit_vec(rng);
    const double s = project_to_plane(u, xy).magnitude + project_to_plane(u, xz).magnitude;
    if (s < worst) worst = s;
  }
  CHECK(worst >= 1.0 - 1e-12);
}

TEST_CASE("settings_in_plane frozen cases") {
  const Plane xy = Plane::xy();
  const SettingPair s0 = settings_in_plane(xy, 0.0, 0.0);
  CHECK(dist(s0.a, {1.0, 0.0, 0.0}) <= 1e-15);
  CHECK(dist(s0.b, {1.0, 0.0, 0.0}) <= 1e-15);
  const SettingPair s1 = settings_in_plane(xy, M_PI / 2.0, 0.0);
  CHECK(dist(s1.a, {1.0, 0.0, 0.0}) <= 1e-15);
  CHECK(dist(s1.b, {0.0, 1.0, 0.0}) <= 1e-15);
}

TEST_CASE("chord length is 2|sin(alpha/2)| and the angle is recovered") {
  RngStream rng(109);
  for (int i = 0; i < 10000; ++i) {
    const Plane p = Plane::from_normal(sample_unit_vec(rng));
    const double alpha = rng.uniform(0.0, M_PI);
    const double sigma = rng.uniform(0.0, 2.0 * M_PI);
    const SettingPair s = settings_in_plane(p, alpha, sigma);
    CHECK(std::abs(norm(s.a - s.b) - 2.0 * std::abs(std::sin(alpha / 2.0))) <= 1e-12);
    if (alpha > 0.1 && alpha < M_PI - 0.1) {
      CHECK(std::abs(angle_between(s.a, s.b) - alpha) <= 1e-9);
    }
  }
}

TEST_CASE("sphere sampler is isotropic at Monte Carlo resolution") {
  RngStream rng(110);
  const int n = 1000000;
  double sum_z = 0.0;
  double sum_mag = 0.0;
  const Plane xy = Plane::xy();
  for (int i = 0; i < n; ++i) {
    const UnitVec u = sample_unit_vec(rng);
    sum_z += u.z();
    sum_mag += project_to_plane(u, xy).magnitude;
  }
  // var(z) = 1/3; var(|u_xy|) = 2/3 - (pi/4)^2.
  const double se_z = std::sqrt(1.0 / 3.0 / n);
  const double se_mag = std::sqrt((2.0 / 3.0 - M_PI * M_PI / 16.0) / n);
  CHECK(std::abs(sum_z / n) <= 4.0 * se_z);
  CHECK(std::abs(sum_mag / n - M_PI / 4.0) <= 4.0 * se_mag);
}
