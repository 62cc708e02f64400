// SPDX-License-Identifier: Apache-2.0
#include "geometry.hpp"

#include <algorithm>

#include "errors.hpp"

namespace twistlab {

Rotation Rotation::from_axis_angle(const Vec3& axis, double angle) {
  const Vec3 n = normalized(axis);
  const double s = std::sin(0.5 * angle);
  return Rotation(std::cos(0.5 * angle), s * n.x, s * n.y, s * n.z);
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  const double inv = 1.0 / std::sqrt(w * w + x * x + y * y + z * z);
  return Rotation(w * inv, x * inv, y * inv, z * inv);
}

std::array<double, 9> Rotation::matrix() const {
  const double w = w_, x = x_, y = y_, z = z_;
  return {1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
          2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
          2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)};
}

double Rotation::angle() const {
  const double s = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
  const double a = 2.0 * std::atan2(s, w_);
  return a >= kTwoPi ? 0.0 : a;
}

double Rotation::canonical_angle() const {
  const double s = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
  return 2.0 * std::atan2(s, std::abs(w_));
}

Vec3 Rotation::axis() const {
  const Vec3 u{x_, y_, z_};
  const double s = norm(u);
  if (s == 0.0) return {0, 0, 1};
  return u * (1.0 / s);
}

SpherePoint SpherePoint::from_lon_lat(double longitude, double latitude) {
  const double c = std::cos(latitude);
  return SpherePoint(Vec3{c * std::cos(longitude), c * std::sin(longitude), std::sin(latitude)});
}

double SpherePoint::longitude() const {
  const double l = std::atan2(p_.y, p_.x);
  return l < 0 ? l + kTwoPi : l;
}

double SpherePoint::latitude() const { return std::asin(std::clamp(p_.z, -1.0, 1.0)); }

Vec3 horizontal_direction(const Vec3& p) {
  const double r = std::hypot(p.x, p.y);
  if (r == 0.0) return {0, 1, 0};
  return {-p.y / r, p.x / r, 0.0};
}

Vec3 north_direction(const Vec3& p) { return cross(p, horizontal_direction(p)); }

TangentState TangentState::from_angle(const SpherePoint& base, double psi) {
  const Vec3& p = base.vec();
  return {base, std::cos(psi) * horizontal_direction(p) + std::sin(psi) * north_direction(p)};
}

double TangentState::psi() const {
  const Vec3& p = base.vec();
  const double a = std::atan2(dot(dir, north_direction(p)), dot(dir, horizontal_direction(p)));
  return a < 0 ? a + kTwoPi : a;
}

TangentState TangentState::reorthonormalized() const {
  const Vec3& p = base.vec();
  return {base, normalized(dir - dot(dir, p) * p)};
}

double theta_minus_sin(double t) {
  if (std::abs(t) < 0.25) {
    const double t2 = t * t;
    // Taylor series of t - sin t; the first omitted term is below 1e-17 relative.
    return t * t2 *
           (1.0 / 6 - t2 * (1.0 / 120 - t2 * (1.0 / 5040 - t2 * (1.0 / 362880 - t2 / 39916800.0))));
  }
  return t - std::sin(t);
}

double solve_kepler(double z) {
  if (!(z >= 0.0 && z <= kTwoPi)) throw DomainError("solve_kepler: z must lie in [0, 2pi]");
  if (z == 0.0) return 0.0;
  // theta - sin(theta) is odd about pi; solve on [0, pi] only, where the
  // derivative vanishes at a single endpoint.
  if (z > kPi) return kTwoPi - solve_kepler(kTwoPi - z);

  double lo = 0.0, hi = kPi;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (theta_minus_sin(mid) < z ? lo : hi) = mid;
  }
  double theta = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    const double s = std::sin(0.5 * theta);
    const double deriv = 2.0 * s * s;
    if (deriv == 0.0) break;
    theta -= (theta_minus_sin(theta) - z) / deriv;
  }
  return std::clamp(theta, 0.0, kPi);
}

SpherePoint sphere_from_uniforms(double longitude, double z) {
  const double c = std::sqrt(std::max(0.0, 1.0 - z * z));
  return SpherePoint(Vec3{c * std::cos(longitude), c * std::sin(longitude), z});
}

SpherePoint sample_sphere(Philox& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double lambda = rng.uniform(0.0, kTwoPi);
  return sphere_from_uniforms(lambda, z);
}

HaarSample haar_from_uniforms(double z_axis, double lambda_axis, double z_angle) {
  HaarSample h;
  h.z_axis = z_axis;
  h.lambda_axis = lambda_axis;
  h.z_angle = z_angle;
  h.angle = solve_kepler(z_angle);
  h.rotation = Rotation::from_axis_angle(sphere_from_uniforms(lambda_axis, z_axis).vec(), h.angle);
  return h;
}

HaarSample sample_haar(Philox& rng) {
  const double z_axis = rng.uniform(-1.0, 1.0);
  const double lambda_axis = rng.uniform(0.0, kTwoPi);
  const double z_angle = rng.uniform(0.0, kTwoPi);
  return haar_from_uniforms(z_axis, lambda_axis, z_angle);
}

Rotation sample_ball(Philox& rng, double delta) {
  if (!(delta > 0.0)) throw DomainError("sample_ball: delta must be positive");
  const double zmax = theta_minus_sin(std::min(delta, kPi));
  const SpherePoint axis = sample_sphere(rng);
  const double angle = solve_kepler(rng.uniform() * zmax);
  return Rotation::from_axis_angle(axis.vec(), angle);
}

TangentState sample_tangent_state(Philox& rng) {
  const SpherePoint p = sample_sphere(rng);
  return TangentState::from_angle(p, rng.uniform(0.0, kTwoPi));
}

}  // namespace twistlab
