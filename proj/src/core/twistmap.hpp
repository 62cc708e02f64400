// SPDX-License-Identifier: Apache-2.0
//
// The twist family f_eps and its tangent action.
//
// In the axis frame f_eps rotates the latitude circle at height z by
// pi * eps * (1 + z) about the z-axis. With x = (1 + z) / 2 this is the
// cylinder map (theta, x) -> (theta + 2 pi eps x, x), and in the orthonormal
// (east, north) frame its derivative is the shear [[1, alpha], [0, 1]] with
// alpha = 4 pi eps x (1 - x) = pi eps (1 - z^2).
#pragma once

#include <array>

#include "geometry.hpp"

namespace twistlab {

struct StepResult {
  TangentState state;
  double log_stretch = 0;
};

struct CylinderPoint {
  double theta = 0;  // [0, 2pi)
  double x = 0.5;    // [0, 1]
};

CylinderPoint to_cylinder(const SpherePoint& p);
SpherePoint from_cylinder(const CylinderPoint& c);

struct ShearMatrix {
  double alpha = 0;
  std::array<double, 4> matrix() const { return {1.0, alpha, 0.0, 1.0}; }
  double determinant() const { return 1.0; }
};

/// Conjugated derivative of the cylinder map at height x in [0,1].
ShearMatrix shear_at(double eps, double x);

/// log |S u| for the shear at x applied to the Euclidean unit vector u = (u_east, u_north).
double chart_log_stretch(double eps, double x, double u_east, double u_north);

class TwistFamily {
 public:
  /// `to_axis_frame` carries the twist axis onto the z-axis.
  explicit TwistFamily(double eps, const Rotation& to_axis_frame = Rotation::identity());

  double eps() const { return eps_; }
  const Rotation& to_axis_frame() const { return frame_; }

  SpherePoint apply(const SpherePoint& p) const;
  StepResult tangent_apply(const TangentState& s) const;

 private:
  double eps_;
  Rotation frame_;
  bool frame_is_identity_;
};

/// (g o f) applied to a tangent state; log_stretch is that of f alone.
StepResult compose_and_apply(const Rotation& g, const TwistFamily& f, const TangentState& s);

/// g o f_eps with the twist about the z-axis and g cached as a matrix; the
/// hot loop of every deterministic orbit computation.
class OrbitMap {
 public:
  OrbitMap(const Rotation& g, double eps);

  StepResult step(const TangentState& s) const;
  SpherePoint apply(const SpherePoint& p) const;
  Vec3 apply(const Vec3& p) const;

  double eps() const { return eps_; }
  const Rotation& rotation() const { return g_; }

 private:
  Vec3 rotate(const Vec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
  }

  Rotation g_;
  std::array<double, 9> m_;
  double eps_;
};

}  // namespace twistlab
