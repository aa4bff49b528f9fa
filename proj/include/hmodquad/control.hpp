#ifndef HMODQUAD_CONTROL_HPP_
#define HMODQUAD_CONTROL_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "hmodquad/dynamics.hpp"
#include "hmodquad/errors.hpp"
#include "hmodquad/linalg.hpp"
#include "hmodquad/so3.hpp"
#include "hmodquad/structure.hpp"
#include "hmodquad/trajectory.hpp"

namespace hmodquad {

inline constexpr double kThrustEpsilon = 1e-6;
inline constexpr double kYawDegeneracy = 1e-6;

/// Diagonal gain matrices, stored as their diagonals.
template <typename Scalar>
struct Gains {
  Vector3<Scalar> K_r = Vector3<Scalar>::Constant(6);
  Vector3<Scalar> K_v = Vector3<Scalar>::Constant(4);
  Vector3<Scalar> K_R = Vector3<Scalar>::Constant(100);
  Vector3<Scalar> K_omega = Vector3<Scalar>::Constant(20);

  void validate() const {
    if (!(K_r.minCoeff() > 0) || !(K_v.minCoeff() > 0) || !(K_R.minCoeff() > 0) ||
        !(K_omega.minCoeff() > 0)) {
      throw DomainError("gains: every diagonal entry must be positive");
    }
  }
};

template <typename Scalar>
struct AttitudeError {
  Vector3<Scalar> e_R = Vector3<Scalar>::Zero();
  Vector3<Scalar> e_omega = Vector3<Scalar>::Zero();
};

enum class ControlMode { FourDof = 4, FiveDof = 5, SixDof = 6 };

template <typename Scalar>
struct ControlOutput {
  VectorX<Scalar> u;            // clamped to [0, f_max]
  VectorX<Scalar> u_unclamped;  // minimum-norm allocation before clamping
  Wrench<Scalar> desired_wrench;  // commanded force/torque in {S}
  bool saturated = false;
  Matrix3<Scalar> desired_attitude = Matrix3<Scalar>::Identity();  // W_R_F^d
  AttitudeError<Scalar> error;
  ControlMode mode = ControlMode::FourDof;
};

// ---------------------------------------------------------------------------
// Position and attitude feedback
// ---------------------------------------------------------------------------

/// a_r = K_r e_r + K_v e_v + g e3 + r_dd^d.
template <typename Scalar>
Vector3<Scalar> position_accel(const RigidState<Scalar>& state,
                               const TrajectorySample<Scalar>& sample, const Gains<Scalar>& gains,
                               Scalar gravity = Scalar(kGravity)) {
  const Vector3<Scalar> e_r = sample.r_d - state.r;
  const Vector3<Scalar> e_v = sample.v_d - state.v;
  return gains.K_r.cwiseProduct(e_r) + gains.K_v.cwiseProduct(e_v) +
         gravity * Vector3<Scalar>::UnitZ() + sample.a_d;
}

/// SO(3) tracking error of the F-frame, W_R_F = R_WS * R_SF, against R_WF_d.
template <typename Scalar>
AttitudeError<Scalar> attitude_error(const Matrix3<Scalar>& R_WS, const Matrix3<Scalar>& R_SF,
                                     const Matrix3<Scalar>& R_WF_d, const Vector3<Scalar>& omega,
                                     const Vector3<Scalar>& omega_d) {
  const Matrix3<Scalar> R_WF = R_WS * R_SF;
  const Matrix3<Scalar> E = R_WF_d.transpose() * R_WF - R_WF.transpose() * R_WF_d;
  AttitudeError<Scalar> err;
  err.e_R = Scalar(0.5) * vee(E);
  err.e_omega = omega - R_WF.transpose() * R_WF_d * omega_d;
  return err;
}

/// a_R = -K_R e_R - K_omega e_omega.
template <typename Scalar>
Vector3<Scalar> attitude_accel(const AttitudeError<Scalar>& err, const Gains<Scalar>& gains) {
  return -gains.K_R.cwiseProduct(err.e_R) - gains.K_omega.cwiseProduct(err.e_omega);
}

/// tau = I_S a_R + omega x I_S omega. When the error is expressed in F-frame
/// coordinates, pass R_SF to map a_R into {S} before applying the inertia.
template <typename Scalar>
Vector3<Scalar> attitude_torque(const AttitudeError<Scalar>& err, const Gains<Scalar>& gains,
                                const Matrix3<Scalar>& I_S, const Vector3<Scalar>& omega,
                                const Matrix3<Scalar>& R_SF = Matrix3<Scalar>::Identity()) {
  const Vector3<Scalar> a_R = R_SF * attitude_accel(err, gains);
  return I_S * a_R + omega.cross(I_S * omega);
}

// ---------------------------------------------------------------------------
// Desired attitudes
// ---------------------------------------------------------------------------

/// Under-actuated desired attitude: z^d along a_r, x^d the projection of the
/// yaw heading onto the plane normal to z^d.
template <typename Scalar>
Matrix3<Scalar> desired_attitude_4dof(const Vector3<Scalar>& a_r, Scalar yaw_d) {
  using std::cos;
  using std::sin;
  const Scalar norm = a_r.norm();
  if (!(norm > Scalar(kThrustEpsilon))) {
    throw DegenerateThrustError("desired_attitude_4dof: commanded acceleration vanishes");
  }
  const Vector3<Scalar> z = a_r / norm;
  const Vector3<Scalar> x_c(cos(yaw_d), sin(yaw_d), 0);
  const Vector3<Scalar> zx = z.cross(x_c);
  const Scalar zx_norm = zx.norm();
  if (!(zx_norm > Scalar(kYawDegeneracy))) {
    throw DegenerateYawError("desired_attitude_4dof: thrust direction aligned with yaw heading");
  }
  const Vector3<Scalar> y = zx / zx_norm;
  Matrix3<Scalar> R;
  R.col(0) = y.cross(z);
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

/// Heading with pitch: Rot(z, yaw) Rot(y, pitch) e1.
template <typename Scalar>
Vector3<Scalar> pitched_heading(Scalar yaw_d, Scalar pitch_d) {
  return rot_axis_angle(Axis::Z, yaw_d) * rot_axis_angle(Axis::Y, pitch_d) *
         Vector3<Scalar>::UnitX();
}

/// 5-DOF desired attitude: x^d fixed by yaw and pitch, z^d the component of
/// a_r normal to x^d.
template <typename Scalar>
Matrix3<Scalar> desired_attitude_5dof(const Vector3<Scalar>& a_r, Scalar yaw_d, Scalar pitch_d) {
  const Scalar norm = a_r.norm();
  if (!(norm > Scalar(kThrustEpsilon))) {
    throw DegenerateThrustError("desired_attitude_5dof: commanded acceleration vanishes");
  }
  const Vector3<Scalar> z_c = a_r / norm;
  const Vector3<Scalar> x = pitched_heading(yaw_d, pitch_d);
  const Vector3<Scalar> zx = z_c.cross(x);
  const Scalar zx_norm = zx.norm();
  if (!(zx_norm > Scalar(kYawDegeneracy))) {
    throw DegenerateYawError("desired_attitude_5dof: thrust direction aligned with heading");
  }
  const Vector3<Scalar> y = zx / zx_norm;
  Matrix3<Scalar> R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = x.cross(y);
  return R;
}

/// f = nm a_r . (W_R_S S_R_F e3).
template <typename Scalar>
Scalar thrust_4dof(const Vector3<Scalar>& a_r, const Matrix3<Scalar>& R_WS,
                   const Matrix3<Scalar>& R_SF, Scalar total_mass) {
  return total_mass * a_r.dot(R_WS * R_SF.col(2));
}

// ---------------------------------------------------------------------------
// Allocation
// ---------------------------------------------------------------------------

/// Reduced design matrix with its cached Moore-Penrose inverse.
template <typename Scalar>
struct Allocator {
  MatrixX<Scalar> matrix;
  MatrixX<Scalar> pinv;

  template <typename Derived>
  VectorX<Scalar> solve(const Eigen::MatrixBase<Derived>& command) const {
    return pinv * command;
  }
};

/// Builds an allocator, requiring full row rank.
template <typename Scalar>
Allocator<Scalar> make_allocator(MatrixX<Scalar> matrix, const std::string& name) {
  auto pi = pseudo_inverse(matrix);
  if (pi.rank < matrix.rows()) {
    throw AllocationError(name + ": reduced design matrix has row rank " +
                          std::to_string(pi.rank) + " < " + std::to_string(matrix.rows()));
  }
  return Allocator<Scalar>{std::move(matrix), std::move(pi.matrix)};
}

template <typename Scalar>
struct ClampResult {
  VectorX<Scalar> u;
  bool saturated = false;
};

template <typename Scalar>
ClampResult<Scalar> clamp_thrusts(const VectorX<Scalar>& raw, const VectorX<Scalar>& u_max) {
  ClampResult<Scalar> out;
  out.u = raw.cwiseMax(Scalar(0)).cwiseMin(u_max);
  out.saturated = (out.u.array() != raw.array()).any();
  return out;
}

template <typename Scalar>
struct A4Matrix {
  Eigen::Matrix<Scalar, 4, Eigen::Dynamic> matrix;
  VectorX<Scalar> v_4f;
};

/// Row 1: v_4f^T with entries sign(A_f column . z_F); rows 2-4: A_tau.
template <typename Scalar>
A4Matrix<Scalar> build_A4(const DesignMatrix<Scalar>& A, const Vector3<Scalar>& z_F) {
  A4Matrix<Scalar> out;
  out.v_4f.resize(A.cols());
  out.matrix.resize(4, A.cols());
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    const Vector3<Scalar> axis = A.col(k).template head<3>();
    const Scalar along = axis.dot(z_F);
    if (std::abs(along) <= Scalar(1e-9) * axis.norm()) {
      throw AllocationError("build_A4: rotor " + std::to_string(k + 1) +
                            " is orthogonal to z_F; structure is not rank 1");
    }
    out.v_4f(k) = along > 0 ? Scalar(1) : Scalar(-1);
  }
  out.matrix.row(0) = out.v_4f.transpose();
  out.matrix.template bottomRows<3>() = A.template bottomRows<3>();
  return out;
}

template <typename Scalar>
A4Matrix<Scalar> build_A4(const StructureModel<Scalar>& structure) {
  if (structure.rank_f != 1) {
    throw AllocationError("build_A4: requires rank(A_f) = 1, structure has rank " +
                          std::to_string(structure.rank_f));
  }
  return build_A4(structure.A, Vector3<Scalar>(structure.R_SF.col(2)));
}

template <typename Scalar>
Allocator<Scalar> make_allocator_4dof(const StructureModel<Scalar>& structure) {
  return make_allocator<Scalar>(build_A4(structure).matrix, "allocate_4dof");
}

/// Which F-frame force row the 5-DOF allocator keeps besides z_F.
enum class SecondaryAxis { X, Y };

template <typename Scalar>
struct FiveDofAllocator {
  Allocator<Scalar> allocator;
  SecondaryAxis secondary = SecondaryAxis::X;
};

/// A_5: force rows re-expressed in F-frame coordinates, ordered (z_F, x_F),
/// over A_tau. Falls back to (z_F, y_F) when the x_F variant loses rank.
template <typename Scalar>
FiveDofAllocator<Scalar> make_allocator_5dof(const StructureModel<Scalar>& structure) {
  if (structure.rank_f != 2) {
    throw AllocationError("allocate_5dof: requires rank(A_f) = 2, structure has rank " +
                          std::to_string(structure.rank_f));
  }
  const ForceMatrix<Scalar> F = structure.R_SF.transpose() * structure.A_f();
  const auto reduced = [&](int secondary_row) {
    MatrixX<Scalar> M(5, structure.A.cols());
    M.row(0) = F.row(2);
    M.row(1) = F.row(secondary_row);
    M.template bottomRows<3>() = structure.A_tau();
    return M;
  };
  MatrixX<Scalar> primary = reduced(0);
  if (pseudo_inverse(primary).rank == 5) {
    return {make_allocator<Scalar>(std::move(primary), "allocate_5dof"), SecondaryAxis::X};
  }
  MatrixX<Scalar> fallback = reduced(1);
  if (pseudo_inverse(fallback).rank == 5) {
    return {make_allocator<Scalar>(std::move(fallback), "allocate_5dof"), SecondaryAxis::Y};
  }
  throw AllocationError("allocate_5dof: both row-removal variants of A_5 are rank deficient");
}

template <typename Scalar>
Allocator<Scalar> make_allocator_6dof(const StructureModel<Scalar>& structure) {
  return make_allocator<Scalar>(MatrixX<Scalar>(structure.A), "allocate_6dof");
}

namespace detail {

template <typename Scalar>
ControlOutput<Scalar> finish_allocation(const Allocator<Scalar>& alloc,
                                        const VectorX<Scalar>& command,
                                        const StructureModel<Scalar>& structure) {
  ControlOutput<Scalar> out;
  out.u_unclamped = alloc.solve(command);
  auto clamped = clamp_thrusts(out.u_unclamped, structure.u_max);
  out.u = std::move(clamped.u);
  out.saturated = clamped.saturated;
  return out;
}

}  // namespace detail

/// u = A_4^+ [f; tau], clamped to [0, f_max].
template <typename Scalar>
ControlOutput<Scalar> allocate_4dof(const Allocator<Scalar>& alloc, Scalar f,
                                    const Vector3<Scalar>& tau,
                                    const StructureModel<Scalar>& structure) {
  VectorX<Scalar> command(4);
  command << f, tau;
  auto out = detail::finish_allocation(alloc, command, structure);
  out.mode = ControlMode::FourDof;
  out.desired_wrench.force = f * structure.R_SF.col(2);
  out.desired_wrench.torque = tau;
  return out;
}

template <typename Scalar>
ControlOutput<Scalar> allocate_4dof(Scalar f, const Vector3<Scalar>& tau,
                                    const StructureModel<Scalar>& structure) {
  return allocate_4dof(make_allocator_4dof(structure), f, tau, structure);
}

/// u = A_5^+ [f_z; f_s; tau]. f_s is the force along x_F, or along y_F when
/// the allocator had to fall back to keeping the y_F row.
template <typename Scalar>
ControlOutput<Scalar> allocate_5dof(const FiveDofAllocator<Scalar>& alloc, Scalar f_z,
                                    Scalar f_s, const Vector3<Scalar>& tau,
                                    const StructureModel<Scalar>& structure) {
  VectorX<Scalar> command(5);
  command << f_z, f_s, tau;
  auto out = detail::finish_allocation(alloc.allocator, command, structure);
  out.mode = ControlMode::FiveDof;
  const int secondary_col = alloc.secondary == SecondaryAxis::X ? 0 : 1;
  out.desired_wrench.force =
      f_z * structure.R_SF.col(2) + f_s * structure.R_SF.col(secondary_col);
  out.desired_wrench.torque = tau;
  return out;
}

template <typename Scalar>
ControlOutput<Scalar> allocate_5dof(Scalar f_z, Scalar f_x, const Vector3<Scalar>& tau,
                                    const StructureModel<Scalar>& structure) {
  return allocate_5dof(make_allocator_5dof(structure), f_z, f_x, tau, structure);
}

/// Fully actuated allocation: u = A^+ [nm R_WS^T a_r; I_S a_R + omega x I_S omega].
/// a_R is taken in {S} coordinates.
template <typename Scalar>
ControlOutput<Scalar> allocate_6dof(const Allocator<Scalar>& alloc, const Vector3<Scalar>& a_r,
                                    const Vector3<Scalar>& a_R, const RigidState<Scalar>& state,
                                    const StructureModel<Scalar>& structure) {
  const Matrix3<Scalar>& I = structure.inertia;
  VectorX<Scalar> command(6);
  command.template head<3>() = structure.total_mass * state.R_WS.transpose() * a_r;
  command.template tail<3>() = I * a_R + state.omega.cross(I * state.omega);
  auto out = detail::finish_allocation(alloc, command, structure);
  out.mode = ControlMode::SixDof;
  out.desired_wrench.force = command.template head<3>();
  out.desired_wrench.torque = command.template tail<3>();
  return out;
}

template <typename Scalar>
ControlOutput<Scalar> allocate_6dof(const Vector3<Scalar>& a_r, const Vector3<Scalar>& a_R,
                                    const RigidState<Scalar>& state,
                                    const StructureModel<Scalar>& structure) {
  return allocate_6dof(make_allocator_6dof(structure), a_r, a_R, state, structure);
}

// ---------------------------------------------------------------------------
// Rank-dispatched controller
// ---------------------------------------------------------------------------

/// Tracks r^d(t) and the F-frame attitude reference with the controller that
/// matches rank(A_f). Allocation matrices are factored once at construction.
///
/// The attitude loop runs in F-frame coordinates: the body rate fed to the
/// error is the F-frame rate R_SF^T omega, and the resulting angular
/// acceleration is mapped back into {S} before the inertia is applied.
template <typename Scalar>
class Controller {
 public:
  Controller(const StructureModel<Scalar>& structure, Gains<Scalar> gains,
             Scalar gravity = Scalar(kGravity))
      : structure_(&structure), gains_(std::move(gains)), gravity_(gravity) {
    gains_.validate();
    switch (structure.rank_f) {
      case 1:
        alloc4_ = make_allocator_4dof(structure);
        break;
      case 2:
        alloc5_ = make_allocator_5dof(structure);
        break;
      case 3:
        alloc6_ = make_allocator_6dof(structure);
        break;
      default:
        throw AllocationError("controller: unsupported rank(A_f) = " +
                              std::to_string(structure.rank_f));
    }
  }

  ControlMode mode() const {
    return static_cast<ControlMode>(structure_->controllable_dof());
  }
  const Gains<Scalar>& gains() const { return gains_; }

  ControlOutput<Scalar> operator()(const RigidState<Scalar>& state,
                                   const TrajectorySample<Scalar>& sample) const {
    const StructureModel<Scalar>& s = *structure_;
    const Vector3<Scalar> a_r = position_accel(state, sample, gains_, gravity_);
    const Vector3<Scalar> omega_F = s.R_SF.transpose() * state.omega;

    if (alloc6_) {
      const auto err = attitude_error(state.R_WS, s.R_SF, sample.R_WF_d, omega_F, sample.omega_d);
      const Vector3<Scalar> a_R = s.R_SF * attitude_accel(err, gains_);
      auto out = allocate_6dof(*alloc6_, a_r, a_R, state, s);
      out.desired_attitude = sample.R_WF_d;
      out.error = err;
      return out;
    }

    const Matrix3<Scalar> R_d = alloc5_ ? desired_attitude_5dof(a_r, sample.yaw_d, sample.pitch_d)
                                        : desired_attitude_4dof(a_r, sample.yaw_d);
    const Vector3<Scalar> omega_d =
        sample.yaw_rate_d * R_d.transpose() * Vector3<Scalar>::UnitZ();
    const auto err = attitude_error(state.R_WS, s.R_SF, R_d, omega_F, omega_d);
    const Vector3<Scalar> tau = attitude_torque(err, gains_, s.inertia, state.omega, s.R_SF);

    ControlOutput<Scalar> out;
    if (alloc5_) {
      const Matrix3<Scalar> R_WF = state.R_WS * s.R_SF;
      const int secondary_col = alloc5_->secondary == SecondaryAxis::X ? 0 : 1;
      const Scalar f_z = s.total_mass * a_r.dot(R_WF.col(2));
      const Scalar f_s = s.total_mass * a_r.dot(R_WF.col(secondary_col));
      out = allocate_5dof(*alloc5_, f_z, f_s, tau, s);
    } else {
      // Rotors only push; a negative projected thrust is commanded as zero.
      const Scalar f = std::max(Scalar(0), thrust_4dof(a_r, state.R_WS, s.R_SF, s.total_mass));
      out = allocate_4dof(*alloc4_, f, tau, s);
    }
    out.desired_attitude = R_d;
    out.error = err;
    return out;
  }

 private:
  const StructureModel<Scalar>* structure_;
  Gains<Scalar> gains_;
  Scalar gravity_;
  std::optional<Allocator<Scalar>> alloc4_;
  std::optional<FiveDofAllocator<Scalar>> alloc5_;
  std::optional<Allocator<Scalar>> alloc6_;
};

/// One-shot controller evaluation; prefer a Controller instance in loops.
template <typename Scalar>
ControlOutput<Scalar> controller_step(const StructureModel<Scalar>& structure,
                                      const RigidState<Scalar>& state,
                                      const TrajectorySample<Scalar>& sample,
                                      const Gains<Scalar>& gains,
                                      Scalar gravity = Scalar(kGravity)) {
  return Controller<Scalar>(structure, gains, gravity)(state, sample);
}

}  // namespace hmodquad

#endif  // HMODQUAD_CONTROL_HPP_
