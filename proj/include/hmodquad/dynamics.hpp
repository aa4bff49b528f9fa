#ifndef HMODQUAD_DYNAMICS_HPP_
#define HMODQUAD_DYNAMICS_HPP_

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "hmodquad/errors.hpp"
#include "hmodquad/so3.hpp"
#include "hmodquad/structure.hpp"

namespace hmodquad {

inline constexpr double kGravity = 9.81;

template <typename Scalar>
struct RigidState {
  Vector3<Scalar> r = Vector3<Scalar>::Zero();        // world position of the com
  Vector3<Scalar> v = Vector3<Scalar>::Zero();        // world velocity
  Matrix3<Scalar> R_WS = Matrix3<Scalar>::Identity();  // attitude of {S} in {W}
  Vector3<Scalar> omega = Vector3<Scalar>::Zero();    // body angular velocity in {S}
};

template <typename Scalar>
struct SimParams {
  Scalar dt = Scalar(1e-3);
  Scalar gravity = Scalar(kGravity);
  Scalar duration = Scalar(10);
};

template <typename Scalar>
struct Accelerations {
  Vector3<Scalar> linear;   // world frame
  Vector3<Scalar> angular;  // body frame
};

/// Throws DomainError unless u has 4n entries, each inside [0, f_max].
template <typename Scalar, typename Derived>
void validate_thrusts(const StructureModel<Scalar>& structure,
                      const Eigen::MatrixBase<Derived>& u) {
  if (u.size() != structure.num_rotors()) {
    throw DomainError("thrust vector has " + std::to_string(u.size()) + " entries, expected " +
                      std::to_string(structure.num_rotors()));
  }
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (!(u(k) >= 0) || !(u(k) <= structure.u_max(k))) {
      throw DomainError("thrust " + std::to_string(k + 1) + " outside [0, f_max]");
    }
  }
}

/// Newton-Euler accelerations under a body-frame wrench about the com.
template <typename Scalar>
Accelerations<Scalar> accelerations_from_wrench(const StructureModel<Scalar>& structure,
                                                const RigidState<Scalar>& state,
                                                const Wrench<Scalar>& body_wrench,
                                                Scalar gravity) {
  const Matrix3<Scalar>& I = structure.inertia;
  Eigen::LDLT<Matrix3<Scalar>> ldlt(I);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(I.determinant() > 0)) {
    throw DomainError("accelerations: structure inertia is singular");
  }
  Accelerations<Scalar> acc;
  acc.linear = state.R_WS * body_wrench.force / structure.total_mass -
               gravity * Vector3<Scalar>::UnitZ();
  acc.angular = ldlt.solve(body_wrench.torque - state.omega.cross(I * state.omega));
  return acc;
}

template <typename Scalar, typename Derived>
Accelerations<Scalar> accelerations(const StructureModel<Scalar>& structure,
                                    const RigidState<Scalar>& state,
                                    const Eigen::MatrixBase<Derived>& u,
                                    Scalar gravity = Scalar(kGravity)) {
  validate_thrusts(structure, u);
  const Eigen::Matrix<Scalar, 6, 1> w = structure.A * u;
  return accelerations_from_wrench(structure, state, Wrench<Scalar>{w.template head<3>(),
                                                                    w.template tail<3>()},
                                   gravity);
}

namespace detail {

template <typename Scalar>
struct StateRate {
  Vector3<Scalar> dr, dv, domega;
  Vector3<Scalar> theta_rate;  // rate of the exponential coordinates of the attitude
};

// theta' = dexp^{-1}_{-theta}(omega) for R = R0 exp(theta), truncated after the
// second bracket, which keeps the fourth-order accuracy of the scheme.
template <typename Scalar>
Vector3<Scalar> dexp_inv(const Vector3<Scalar>& theta, const Vector3<Scalar>& omega) {
  const Vector3<Scalar> tw = theta.cross(omega);
  return omega + Scalar(0.5) * tw + theta.cross(tw) / Scalar(12);
}

template <typename Scalar>
StateRate<Scalar> rate(const StructureModel<Scalar>& structure, const RigidState<Scalar>& s,
                       const Vector3<Scalar>& theta, const Wrench<Scalar>& w, Scalar gravity) {
  const auto acc = accelerations_from_wrench(structure, s, w, gravity);
  return {s.v, acc.linear, acc.angular, dexp_inv(theta, s.omega)};
}

template <typename Scalar>
RigidState<Scalar> advance(const RigidState<Scalar>& s0, const StateRate<Scalar>& k, Scalar h) {
  RigidState<Scalar> s;
  s.r = s0.r + h * k.dr;
  s.v = s0.v + h * k.dv;
  s.R_WS = s0.R_WS * exp_map(Vector3<Scalar>(h * k.theta_rate));
  s.omega = s0.omega + h * k.domega;
  return s;
}

}  // namespace detail

/// One RK4 step under a body wrench held constant over dt. The attitude is
/// advanced in exponential coordinates around the start-of-step rotation
/// (Runge-Kutta-Munthe-Kaas), so every stage stays on SO(3) and the scheme
/// keeps fourth order in the attitude as well; the result is re-orthonormalized.
template <typename Scalar>
RigidState<Scalar> step_wrench(const StructureModel<Scalar>& structure,
                               const RigidState<Scalar>& state, const Wrench<Scalar>& body_wrench,
                               Scalar dt, Scalar gravity = Scalar(kGravity)) {
  if (!(dt > 0)) throw DomainError("step: dt must be positive");
  const Scalar half = dt / Scalar(2);
  const Vector3<Scalar> zero = Vector3<Scalar>::Zero();
  const auto k1 = detail::rate(structure, state, zero, body_wrench, gravity);
  const auto k2 = detail::rate(structure, detail::advance(state, k1, half),
                               Vector3<Scalar>(half * k1.theta_rate), body_wrench, gravity);
  const auto k3 = detail::rate(structure, detail::advance(state, k2, half),
                               Vector3<Scalar>(half * k2.theta_rate), body_wrench, gravity);
  const auto k4 = detail::rate(structure, detail::advance(state, k3, dt),
                               Vector3<Scalar>(dt * k3.theta_rate), body_wrench, gravity);

  const Scalar sixth = dt / Scalar(6);
  RigidState<Scalar> next;
  next.r = state.r + sixth * (k1.dr + Scalar(2) * k2.dr + Scalar(2) * k3.dr + k4.dr);
  next.v = state.v + sixth * (k1.dv + Scalar(2) * k2.dv + Scalar(2) * k3.dv + k4.dv);
  next.omega = state.omega +
               sixth * (k1.domega + Scalar(2) * k2.domega + Scalar(2) * k3.domega + k4.domega);
  const Vector3<Scalar> theta =
      sixth * (k1.theta_rate + Scalar(2) * k2.theta_rate + Scalar(2) * k3.theta_rate +
               k4.theta_rate);
  next.R_WS = orthonormalize(Matrix3<Scalar>(state.R_WS * exp_map(theta)));

  if (!next.r.allFinite() || !next.v.allFinite() || !next.omega.allFinite() ||
      !next.R_WS.allFinite()) {
    std::ostringstream msg;
    msg << "step: non-finite state (r = " << next.r.transpose()
        << ", v = " << next.v.transpose() << ", omega = " << next.omega.transpose() << ")";
    throw IntegrationError(msg.str());
  }
  return next;
}

/// One RK4 step with rotor thrusts u held constant (zero-order hold).
template <typename Scalar, typename Derived>
RigidState<Scalar> step(const StructureModel<Scalar>& structure, const RigidState<Scalar>& state,
                        const Eigen::MatrixBase<Derived>& u, Scalar dt,
                        Scalar gravity = Scalar(kGravity)) {
  validate_thrusts(structure, u);
  const Eigen::Matrix<Scalar, 6, 1> w = structure.A * u;
  return step_wrench(structure, state, Wrench<Scalar>{w.template head<3>(), w.template tail<3>()},
                     dt, gravity);
}

}  // namespace hmodquad

#endif  // HMODQUAD_DYNAMICS_HPP_
