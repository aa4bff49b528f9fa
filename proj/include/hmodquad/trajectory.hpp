#ifndef HMODQUAD_TRAJECTORY_HPP_
#define HMODQUAD_TRAJECTORY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "hmodquad/errors.hpp"
#include "hmodquad/so3.hpp"

namespace hmodquad {

/// Reference for the F-frame at time t. pitch_d is consumed by the 5-DOF
/// controller, R_WF_d and omega_d by the 6-DOF controller; the 4- and 5-DOF
/// controllers derive their angular-velocity reference from yaw_rate_d.
template <typename Scalar>
struct TrajectorySample {
  Scalar t{};
  Vector3<Scalar> r_d = Vector3<Scalar>::Zero();
  Vector3<Scalar> v_d = Vector3<Scalar>::Zero();
  Vector3<Scalar> a_d = Vector3<Scalar>::Zero();
  Scalar yaw_d{};
  Scalar yaw_rate_d{};
  Scalar pitch_d{};
  Matrix3<Scalar> R_WF_d = Matrix3<Scalar>::Identity();
  Vector3<Scalar> omega_d = Vector3<Scalar>::Zero();
};

template <typename Scalar>
using Trajectory = std::function<TrajectorySample<Scalar>(Scalar)>;

template <typename Scalar>
struct HelixParams {
  Scalar centre_x = Scalar(-0.5);
  Scalar centre_y = Scalar(0);
  Scalar radius = Scalar(0.45);
  Scalar z_low = Scalar(0.45);
  Scalar z_high = Scalar(0.95);
  Scalar period = Scalar(14);
  Scalar yaw0 = Scalar(0);
  // One full yaw revolution per period.
  Scalar yaw_rate = Scalar(2 * std::numbers::pi / 14);
};

/// Vertical helix: a circle in xy traversed once per period while z
/// oscillates between z_low and z_high with the same period. Starts at
/// centre + radius * e1 at z_low.
template <typename Scalar>
TrajectorySample<Scalar> helix(const HelixParams<Scalar>& p, Scalar t) {
  using std::cos;
  using std::sin;
  const Scalar w = Scalar(2 * std::numbers::pi) / p.period;
  const Scalar c = cos(w * t);
  const Scalar s = sin(w * t);
  const Scalar z_mid = (p.z_low + p.z_high) / Scalar(2);
  const Scalar z_amp = (p.z_high - p.z_low) / Scalar(2);

  TrajectorySample<Scalar> out;
  out.t = t;
  out.r_d << p.centre_x + p.radius * c, p.centre_y + p.radius * s, z_mid - z_amp * c;
  out.v_d << -p.radius * w * s, p.radius * w * c, z_amp * w * s;
  out.a_d << -p.radius * w * w * c, -p.radius * w * w * s, z_amp * w * w * c;
  out.yaw_d = p.yaw0 + p.yaw_rate * t;
  out.yaw_rate_d = p.yaw_rate;
  out.R_WF_d = rot_axis_angle(Axis::Z, out.yaw_d);
  return out;
}

template <typename Scalar>
struct RectangleParams {
  Scalar centre_x = Scalar(0);
  Scalar centre_y = Scalar(0);
  Scalar length = Scalar(0.8);  // along world x
  Scalar width = Scalar(0.6);   // along world y
  Scalar altitude = Scalar(0.7);
  Scalar speed = Scalar(0.25);
  Scalar blend = Scalar(0.5);  // duration of each speed ramp at a corner
  bool clockwise = false;
};

namespace detail {

// Quintic smoothstep S(x) = 10x^3 - 15x^4 + 6x^5, its integral and derivative.
template <typename Scalar>
Scalar smoothstep(Scalar x) {
  return x * x * x * (Scalar(10) + x * (Scalar(-15) + Scalar(6) * x));
}
template <typename Scalar>
Scalar smoothstep_integral(Scalar x) {
  const Scalar x2 = x * x;
  return x2 * x2 * (Scalar(2.5) + x * (Scalar(-3) + x));
}
template <typename Scalar>
Scalar smoothstep_derivative(Scalar x) {
  const Scalar x2 = x * x;
  return Scalar(30) * x2 * (Scalar(1) - x) * (Scalar(1) - x);
}

template <typename Scalar>
std::array<Vector3<Scalar>, 4> rectangle_corners(const RectangleParams<Scalar>& p) {
  const Scalar hx = p.length / Scalar(2);
  const Scalar hy = p.width / Scalar(2);
  std::array<Vector3<Scalar>, 4> c = {
      Vector3<Scalar>(p.centre_x - hx, p.centre_y - hy, p.altitude),
      Vector3<Scalar>(p.centre_x + hx, p.centre_y - hy, p.altitude),
      Vector3<Scalar>(p.centre_x + hx, p.centre_y + hy, p.altitude),
      Vector3<Scalar>(p.centre_x - hx, p.centre_y + hy, p.altitude)};
  if (p.clockwise) std::swap(c[1], c[3]);
  return c;
}

}  // namespace detail

template <typename Scalar>
void validate_rectangle(const RectangleParams<Scalar>& p) {
  if (!(p.length > 0) || !(p.width > 0) || !(p.speed > 0) || !(p.blend > 0)) {
    throw DomainError("rectangle: length, width, speed and blend must be positive");
  }
  if (p.speed * p.blend > std::min(p.length, p.width)) {
    throw DomainError("rectangle: speed * blend exceeds the shortest edge");
  }
}

/// Time to traverse one edge: cruise plus one ramp-up and one ramp-down.
template <typename Scalar>
Scalar rectangle_edge_duration(const RectangleParams<Scalar>& p, Scalar edge_length) {
  return edge_length / p.speed + p.blend;
}

template <typename Scalar>
Scalar rectangle_period(const RectangleParams<Scalar>& p) {
  return Scalar(2) * (rectangle_edge_duration(p, p.length) + rectangle_edge_duration(p, p.width));
}

/// Rectangular circuit at constant altitude, starting from rest at the
/// (-x, -y) corner. Each edge accelerates from rest to `speed` with a quintic
/// ramp of duration `blend`, cruises, and ramps back to rest at the corner.
template <typename Scalar>
TrajectorySample<Scalar> rectangle(const RectangleParams<Scalar>& p, Scalar t, Scalar pitch_hold) {
  validate_rectangle(p);
  const auto corners = detail::rectangle_corners(p);
  const Scalar period = rectangle_period(p);
  Scalar tau = std::fmod(t, period);
  if (tau < 0) tau += period;

  std::size_t edge = 0;
  Scalar edge_len{}, edge_time{};
  for (; edge < 4; ++edge) {
    edge_len = (corners[(edge + 1) % 4] - corners[edge]).norm();
    edge_time = rectangle_edge_duration(p, edge_len);
    if (tau < edge_time || edge == 3) break;
    tau -= edge_time;
  }
  tau = std::min(tau, edge_time);

  const Scalar V = p.speed;
  const Scalar Tb = p.blend;
  Scalar s, ds, dds;
  if (tau < Tb) {
    const Scalar x = tau / Tb;
    s = V * Tb * detail::smoothstep_integral(x);
    ds = V * detail::smoothstep(x);
    dds = V * detail::smoothstep_derivative(x) / Tb;
  } else if (tau <= edge_time - Tb) {
    s = V * Tb / Scalar(2) + V * (tau - Tb);
    ds = V;
    dds = 0;
  } else {
    const Scalar x = (edge_time - tau) / Tb;
    s = edge_len - V * Tb * detail::smoothstep_integral(x);
    ds = V * detail::smoothstep(x);
    dds = -V * detail::smoothstep_derivative(x) / Tb;
  }

  const Vector3<Scalar> dir = (corners[(edge + 1) % 4] - corners[edge]) / edge_len;
  TrajectorySample<Scalar> out;
  out.t = t;
  out.r_d = corners[edge] + s * dir;
  out.v_d = ds * dir;
  out.a_d = dds * dir;
  out.yaw_d = 0;
  out.yaw_rate_d = 0;
  out.pitch_d = pitch_hold;
  out.R_WF_d = rot_axis_angle(Axis::Y, pitch_hold);
  return out;
}

/// Same circuit with the F-frame held level (identity attitude).
template <typename Scalar>
TrajectorySample<Scalar> rectangle_fixed_attitude(const RectangleParams<Scalar>& p, Scalar t) {
  TrajectorySample<Scalar> out = rectangle(p, t, Scalar(0));
  out.R_WF_d.setIdentity();
  out.omega_d.setZero();
  return out;
}

template <typename Scalar>
TrajectorySample<Scalar> hover(const Vector3<Scalar>& r0, Scalar yaw0, Scalar t) {
  TrajectorySample<Scalar> out;
  out.t = t;
  out.r_d = r0;
  out.yaw_d = yaw0;
  out.R_WF_d = rot_axis_angle(Axis::Z, yaw0);
  return out;
}

}  // namespace hmodquad

#endif  // HMODQUAD_TRAJECTORY_HPP_
