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

#include "nlhv/geom.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlhv {

UnitVec UnitVec::from_components(double x, double y, double z) {
  const double norm_sq = x * x + y * y + z * z;
  if (std::abs(norm_sq - 1.0) > 1e-12) {
    throw std::invalid_argument("unit vector components are not unit length");
  }
  UnitVec r;
  r.x_ = x;
  r.y_ = y;
  r.z_ = z;
  return r;
}

UnitVec UnitVec::normalized(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 1e-15)) {
    throw std::invalid_argument("cannot normalize a near-zero vector");
  }
  UnitVec r;
  r.x_ = v.x / n;
  r.y_ = v.y / n;
  r.z_ = v.z / n;
  return r;
}

UnitVec from_polar(double theta, double phi) {
  const double st = std::sin(theta);
  return UnitVec::normalized({std::cos(phi) * st, std::sin(phi) * st, std::cos(theta)});
}

Vec3 rotate_about(const UnitVec& axis, double sigma, const Vec3& v) {
  const Vec3 k = axis.vec();
  const double c = std::cos(sigma);
  const double s = std::sin(sigma);
  const Vec3 kxv = cross(k, v);
  const double kdv = dot(k, v);
  return c * v + s * kxv + (kdv * (1.0 - c)) * k;
}

UnitVec rotate_about(const UnitVec& axis, double sigma, const UnitVec& v) {
  // Renormalize so repeated rotations cannot drift off the sphere.
  return UnitVec::normalized(rotate_about(axis, sigma, v.vec()));
}

double angle_between(const UnitVec& a, const UnitVec& b) {
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

Plane Plane::xy() {
  Plane p;
  p.e1 = UnitVec::from_components(1, 0, 0);
  p.e2 = UnitVec::from_components(0, 1, 0);
  p.normal = UnitVec::from_components(0, 0, 1);
  p.label = "xy";
  return p;
}

Plane Plane::xz() {
  Plane p;
  p.e1 = UnitVec::from_components(1, 0, 0);
  p.e2 = UnitVec::from_components(0, 0, 1);
  p.normal = UnitVec::from_components(0, -1, 0);
  p.label = "xz";
  return p;
}

Plane Plane::yz() {
  Plane p;
  p.e1 = UnitVec::from_components(0, 1, 0);
  p.e2 = UnitVec::from_components(0, 0, 1);
  p.normal = UnitVec::from_components(1, 0, 0);
  p.label = "yz";
  return p;
}

Plane Plane::from_span(const Vec3& u, const Vec3& v) {
  Plane p;
  p.e1 = UnitVec::normalized(u);
  const Vec3 w = v - dot(v, p.e1.vec()) * p.e1.vec();
  if (norm(w) < 1e-12) {
    throw std::invalid_argument("plane basis is degenerate");
  }
  p.e2 = UnitVec::normalized(w);
  p.normal = UnitVec::normalized(cross(p.e1.vec(), p.e2.vec()));
  p.label = "custom";
  return p;
}

Plane Plane::from_normal(const UnitVec& n) {
  const Vec3 ref = std::abs(n.z()) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  Plane p;
  p.e1 = UnitVec::normalized(cross(ref, n.vec()));
  p.e2 = UnitVec::normalized(cross(n.vec(), p.e1.vec()));
  p.normal = n;
  p.label = "custom";
  return p;
}

bool planes_orthogonal(const Plane& p, const Plane& q, double tol) {
  return std::abs(dot(p.normal, q.normal)) <= tol;
}

PlaneProjection project_to_plane(const UnitVec& u, const Plane& p) {
  const Vec3 w = u.vec() - dot(u, p.normal) * p.normal.vec();
  return {w, norm(w)};
}

SettingPair settings_in_plane(const Plane& p, double alpha, double sigma) {
  const auto setting = [&p](double ang) {
    return UnitVec::normalized(std::cos(ang) * p.e1.vec() + std::sin(ang) * p.e2.vec());
  };
  return {setting(sigma), setting(sigma + alpha)};
}

UnitVec sample_unit_vec(RngStream& rng) {
  const double z = 2.0 * rng.uniform01() - 1.0;
  const double phi = 2.0 * M_PI * rng.uniform01();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVec::normalized({s * std::cos(phi), s * std::sin(phi), z});
}

}  // namespace nlhv
