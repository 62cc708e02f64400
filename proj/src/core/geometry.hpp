// SPDX-License-Identifier: Apache-2.0
//
// Sphere and rotation primitives, and exact Haar sampling on SO(3).
//
// Everything here uses the unit sphere. A rotation is stored as a unit
// quaternion; the angle/axis pair (x, theta) and (-x, 2pi - theta) describe
// the same rotation.
#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "rng.hpp"

namespace twistlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
  constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) { return v * (1.0 / norm(v)); }

/// Element of SO(3) as a unit quaternion (w, x, y, z).
class Rotation {
 public:
  constexpr Rotation() = default;

  static constexpr Rotation identity() { return {}; }
  /// Right-hand rotation by `angle` about `axis` (any nonzero vector).
  static Rotation from_axis_angle(const Vec3& axis, double angle);
  /// Raw quaternion; normalized on construction.
  static Rotation from_quaternion(double w, double x, double y, double z);

  Vec3 apply(const Vec3& v) const {
    const Vec3 u{x_, y_, z_};
    const Vec3 t = 2.0 * cross(u, v);
    return v + w_ * t + cross(u, t);
  }

  Rotation inverse() const { return Rotation(w_, -x_, -y_, -z_); }

  /// Row-major orthogonal matrix.
  std::array<double, 9> matrix() const;

  /// Rotation angle in [0, 2pi), consistent with axis().
  double angle() const;
  /// Rotation angle in [0, pi]; the same for q and -q.
  double canonical_angle() const;
  /// Unit axis; (0,0,1) for the identity.
  Vec3 axis() const;

  std::array<double, 4> quaternion() const { return {w_, x_, y_, z_}; }
  Rotation renormalized() const { return from_quaternion(w_, x_, y_, z_); }

  /// g * h acts as "h first, then g".
  friend Rotation operator*(const Rotation& g, const Rotation& h) {
    return Rotation(g.w_ * h.w_ - g.x_ * h.x_ - g.y_ * h.y_ - g.z_ * h.z_,
                    g.w_ * h.x_ + g.x_ * h.w_ + g.y_ * h.z_ - g.z_ * h.y_,
                    g.w_ * h.y_ - g.x_ * h.z_ + g.y_ * h.w_ + g.z_ * h.x_,
                    g.w_ * h.z_ + g.x_ * h.y_ - g.y_ * h.x_ + g.z_ * h.w_);
  }

 private:
  constexpr Rotation(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1, x_ = 0, y_ = 0, z_ = 0;
};

inline Rotation compose(const Rotation& g, const Rotation& h) { return g * h; }

/// Point of the unit sphere.
class SpherePoint {
 public:
  SpherePoint() = default;
  /// Normalizes `v` (must be nonzero).
  explicit SpherePoint(const Vec3& v) : p_(normalized(v)) {}
  static SpherePoint from_lon_lat(double longitude, double latitude);

  const Vec3& vec() const { return p_; }
  /// Longitude in [0, 2pi).
  double longitude() const;
  /// Latitude in [-pi/2, pi/2].
  double latitude() const;

 private:
  Vec3 p_{0, 0, 1};
};

/// Unit tangent vector along the latitude circle (eastward); at the poles the
/// longitude-0 convention gives (0,1,0).
Vec3 horizontal_direction(const Vec3& p);
/// Unit tangent vector towards the north pole, completing horizontal_direction.
Vec3 north_direction(const Vec3& p);

/// Point of T1S2: base point plus unit tangent direction.
struct TangentState {
  SpherePoint base;
  Vec3 dir{1, 0, 0};

  /// Direction making angle psi with the horizontal (eastward) vector.
  static TangentState from_angle(const SpherePoint& base, double psi);
  /// Angle against the horizontal direction, in [0, 2pi).
  double psi() const;
  /// Project dir onto the tangent plane and renormalize.
  TangentState reorthonormalized() const;
};

inline TangentState apply(const Rotation& g, const TangentState& s) {
  return {SpherePoint(g.apply(s.base.vec())), g.apply(s.dir)};
}

/// Haar-distributed rotation together with the uniforms it was built from.
struct HaarSample {
  Rotation rotation;
  double z_axis = 1;       // in [-1, 1]
  double lambda_axis = 0;  // in [0, 2pi)
  double z_angle = 0;      // in [0, 2pi]
  double angle = 0;        // solves z_angle = angle - sin(angle)
};

/// Inverse of theta - sin(theta) on [0, 2pi]; throws DomainError outside.
double solve_kepler(double z);

/// theta - sin(theta) without cancellation for small theta.
double theta_minus_sin(double theta);

SpherePoint sphere_from_uniforms(double longitude, double z);
SpherePoint sample_sphere(Philox& rng);

HaarSample haar_from_uniforms(double z_axis, double lambda_axis, double z_angle);
HaarSample sample_haar(Philox& rng);

/// Haar measure restricted to rotations of angle <= delta; 0 < delta.
/// Balls of radius >= pi are the whole group.
Rotation sample_ball(Philox& rng, double delta);

/// Uniform point of T1S2 (Liouville measure).
TangentState sample_tangent_state(Philox& rng);

}  // namespace twistlab
