// SPDX-License-Identifier: Apache-2.0
#include "twistmap.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace twistlab {

namespace {

// Twist about the z-axis in the axis frame. Returns the stretched (unnormalized)
// image direction; the base point is rotated in place.
struct TwistOut {
  Vec3 p;
  Vec3 v;
  double log_stretch;
};

inline TwistOut twist_z(double eps, const Vec3& p, const Vec3& v) {
  const double phi = kPi * eps * (1.0 + p.z);
  const double c = std::cos(phi), s = std::sin(phi);
  Vec3 w = v;
  double ls = 0.0;
  const double k = kPi * eps * v.z;
  if (k != 0.0 && 1.0 - std::abs(p.z) >= 1e-10) {
    // v + pi eps v_z (z x p)
    w = {v.x - k * p.y, v.y + k * p.x, v.z};
    const double n = norm(w);
    ls = std::log(n);
    w = w * (1.0 / n);
  }
  return {{c * p.x - s * p.y, s * p.x + c * p.y, p.z}, {c * w.x - s * w.y, s * w.x + c * w.y, w.z}, ls};
}

}  // namespace

CylinderPoint to_cylinder(const SpherePoint& p) {
  return {p.longitude(), std::clamp(0.5 * (1.0 + p.vec().z), 0.0, 1.0)};
}

SpherePoint from_cylinder(const CylinderPoint& c) {
  return sphere_from_uniforms(c.theta, 2.0 * c.x - 1.0);
}

ShearMatrix shear_at(double eps, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("shear_at: x must lie in [0, 1]");
  return {4.0 * kPi * eps * x * (1.0 - x)};
}

double chart_log_stretch(double eps, double x, double u_east, double u_north) {
  const double a = shear_at(eps, x).alpha;
  return std::log(std::hypot(u_east + a * u_north, u_north));
}

TwistFamily::TwistFamily(double eps, const Rotation& to_axis_frame)
    : eps_(eps), frame_(to_axis_frame), frame_is_identity_(to_axis_frame.quaternion()[0] == 1.0) {}

SpherePoint TwistFamily::apply(const SpherePoint& p) const {
  const Vec3 q = frame_is_identity_ ? p.vec() : frame_.apply(p.vec());
  const TwistOut t = twist_z(eps_, q, Vec3{});
  return SpherePoint(frame_is_identity_ ? t.p : frame_.inverse().apply(t.p));
}

StepResult TwistFamily::tangent_apply(const TangentState& s) const {
  if (frame_is_identity_) {
    const TwistOut t = twist_z(eps_, s.base.vec(), s.dir);
    return {{SpherePoint(t.p), t.v}, t.log_stretch};
  }
  const Rotation inv = frame_.inverse();
  const TwistOut t = twist_z(eps_, frame_.apply(s.base.vec()), frame_.apply(s.dir));
  return {{SpherePoint(inv.apply(t.p)), inv.apply(t.v)}, t.log_stretch};
}

StepResult compose_and_apply(const Rotation& g, const TwistFamily& f, const TangentState& s) {
  StepResult r = f.tangent_apply(s);
  r.state = apply(g, r.state);
  return r;
}

OrbitMap::OrbitMap(const Rotation& g, double eps) : g_(g), m_(g.matrix()), eps_(eps) {}

StepResult OrbitMap::step(const TangentState& s) const {
  const TwistOut t = twist_z(eps_, s.base.vec(), s.dir);
  StepResult r;
  r.state.base = SpherePoint(rotate(t.p));
  r.state.dir = rotate(t.v);
  r.log_stretch = t.log_stretch;
  return r;
}

Vec3 OrbitMap::apply(const Vec3& p) const {
  const double phi = kPi * eps_ * (1.0 + p.z);
  const double c = std::cos(phi), s = std::sin(phi);
  return rotate({c * p.x - s * p.y, s * p.x + c * p.y, p.z});
}

SpherePoint OrbitMap::apply(const SpherePoint& p) const { return SpherePoint(apply(p.vec())); }

}  // namespace twistlab
