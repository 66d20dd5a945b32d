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

#ifndef NLHV_GEOM_HPP
#define NLHV_GEOM_HPP

#include <cmath>
#include <string>

#include "nlhv/rng.hpp"

namespace nlhv {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Point on the unit sphere. Construction and every rotation keep
// x^2 + y^2 + z^2 = 1 within 1e-12.
class UnitVec {
 public:
  UnitVec() : x_(0.0), y_(0.0), z_(1.0) {}

  // Accepts components that are already unit length within 1e-12.
  static UnitVec from_components(double x, double y, double z);

  // Scales an arbitrary nonzero vector to unit length.
  static UnitVec normalized(const Vec3& v);

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  Vec3 vec() const { return {x_, y_, z_}; }

  UnitVec operator-() const {
    UnitVec r;
    r.x_ = -x_;
    r.y_ = -y_;
    r.z_ = -z_;
    return r;
  }

 private:
  double x_, y_, z_;
};

inline double dot(const UnitVec& a, const UnitVec& b) { return dot(a.vec(), b.vec()); }
inline double dot(const UnitVec& a, const Vec3& b) { return dot(a.vec(), b); }
inline double dot(const Vec3& a, const UnitVec& b) { return dot(a, b.vec()); }
inline Vec3 operator-(const UnitVec& a, const UnitVec& b) { return a.vec() - b.vec(); }
inline Vec3 operator+(const UnitVec& a, const UnitVec& b) { return a.vec() + b.vec(); }

// Polar angle theta from the +z axis, azimuth phi from +x:
// (cos phi sin theta, sin phi sin theta, cos theta).
UnitVec from_polar(double theta, double phi);

// Rodrigues rotation of v by angle sigma about the given axis,
// counterclockwise seen from the axis tip.
Vec3 rotate_about(const UnitVec& axis, double sigma, const Vec3& v);
UnitVec rotate_about(const UnitVec& axis, double sigma, const UnitVec& v);

// Angle in [0, pi]; the dot product is clamped so rounding at
// parallel/antiparallel inputs cannot produce NaN.
double angle_between(const UnitVec& a, const UnitVec& b);

// Oriented plane through the origin with an orthonormal basis (e1, e2)
// and normal = e1 x e2.
struct Plane {
  UnitVec e1;
  UnitVec e2;
  UnitVec normal;
  std::string label;

  static Plane xy();
  static Plane xz();
  static Plane yz();

  // Gram-Schmidt basis from two spanning vectors.
  static Plane from_span(const Vec3& u, const Vec3& v);

  // Deterministic basis completion from the normal alone. The in-plane
  // basis choice does not matter to any rotation-averaged quantity.
  static Plane from_normal(const UnitVec& n);
};

bool planes_orthogonal(const Plane& p, const Plane& q, double tol = 1e-9);

struct PlaneProjection {
  Vec3 in_plane;      // u minus its normal component
  double magnitude;   // |in_plane|, in [0, 1] for unit u
};

PlaneProjection project_to_plane(const UnitVec& u, const Plane& p);

struct SettingPair {
  UnitVec a;
  UnitVec b;
};

// Analyzer pair in the plane: a at angle sigma from e1, b at sigma + alpha.
SettingPair settings_in_plane(const Plane& p, double alpha, double sigma);

// Uniform direction on the sphere (area measure).
UnitVec sample_unit_vec(RngStream& rng);

}  // namespace nlhv

#endif  // NLHV_GEOM_HPP
