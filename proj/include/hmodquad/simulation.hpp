#ifndef HMODQUAD_SIMULATION_HPP_
#define HMODQUAD_SIMULATION_HPP_

#include <cmath>
#include <sstream>

#include "hmodquad/control.hpp"
#include "hmodquad/dynamics.hpp"
#include "hmodquad/errors.hpp"
#include "hmodquad/structure.hpp"
#include "hmodquad/trajectory.hpp"

namespace hmodquad {

/// Attitude of {S} that puts the F-frame on the reference of `sample` with
/// the feed-forward thrust direction of a_d + g e3.
template <typename Scalar>
Matrix3<Scalar> reference_attitude(const StructureModel<Scalar>& structure,
                                   const TrajectorySample<Scalar>& sample,
                                   Scalar gravity = Scalar(kGravity)) {
  const Vector3<Scalar> a = sample.a_d + gravity * Vector3<Scalar>::UnitZ();
  Matrix3<Scalar> R_WF;
  switch (structure.rank_f) {
    case 1:
      R_WF = desired_attitude_4dof(a, sample.yaw_d);
      break;
    case 2:
      R_WF = desired_attitude_5dof(a, sample.yaw_d, sample.pitch_d);
      break;
    default:
      R_WF = sample.R_WF_d;
      break;
  }
  return R_WF * structure.R_SF.transpose();
}

/// Runs the closed loop from `initial` for params.duration seconds. The
/// observer is called as obs(step_index, t, state, sample, control) for
/// every step including t = 0 and t = duration; thrusts are held over dt.
template <typename Scalar, typename Observer>
RigidState<Scalar> simulate(const StructureModel<Scalar>& structure,
                            const Controller<Scalar>& controller,
                            const Trajectory<Scalar>& trajectory, RigidState<Scalar> initial,
                            const SimParams<Scalar>& params, Observer&& observer) {
  if (!(params.dt > 0) || !(params.duration >= params.dt)) {
    throw DomainError("simulate: requires dt > 0 and duration >= dt");
  }
  const long steps = std::lround(static_cast<double>(params.duration / params.dt));
  RigidState<Scalar> state = std::move(initial);
  for (long k = 0; k <= steps; ++k) {
    const Scalar t = Scalar(k) * params.dt;
    try {
      const auto sample = trajectory(t);
      const auto control = controller(state, sample);
      observer(k, t, state, sample, control);
      if (k == steps) break;
      state = step(structure, state, control.u, params.dt, params.gravity);
    } catch (const SimulationError&) {
      throw;
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "simulation failed at step " << k << " (t = " << static_cast<double>(t)
          << " s): " << e.what();
      throw SimulationError(msg.str(), k, static_cast<double>(t));
    }
  }
  return state;
}

}  // namespace hmodquad

#endif  // HMODQUAD_SIMULATION_HPP_
