#ifndef HMODQUAD_MODULE_DESIGN_HPP_
#define HMODQUAD_MODULE_DESIGN_HPP_

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "hmodquad/errors.hpp"
#include "hmodquad/so3.hpp"

namespace hmodquad {

inline constexpr double kDefaultThrustCoefficient = 1.0;
// k_m / k_f in metres; typical for small rotors.
inline constexpr double kDefaultDragCoefficient = 0.006;
inline constexpr double kDefaultMaxThrust = 1.0;
inline constexpr double kDefaultBalanceTolerance = 1e-9;

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

template <typename Scalar>
struct PropellerSpec {
  Vector3<Scalar> position;     // module frame, metres
  Matrix3<Scalar> orientation;  // propeller frame in module frame
  int spin = 1;                 // (-1)^(j+1) for propeller j (1-based)
  Scalar k_f = Scalar(kDefaultThrustCoefficient);
  Scalar k_m = Scalar(kDefaultDragCoefficient);
  Scalar f_max = Scalar(kDefaultMaxThrust);

  Vector3<Scalar> thrust_axis() const { return orientation.col(2); }
  Scalar drag_ratio() const { return k_m / k_f; }
};

template <typename Scalar>
struct ModuleSpec {
  Scalar mass{};
  Matrix3<Scalar> inertia = Matrix3<Scalar>::Zero();
  Scalar length{};
  Scalar height{};
  std::array<PropellerSpec<Scalar>, 4> propellers;
  Matrix3<Scalar> declared_tilt = Matrix3<Scalar>::Identity();
};

template <typename Scalar>
struct Wrench {
  Vector3<Scalar> force = Vector3<Scalar>::Zero();
  Vector3<Scalar> torque = Vector3<Scalar>::Zero();
};

/// Residuals of the balanced-module constraints evaluated at unit thrust.
template <typename Scalar>
struct BalanceReport {
  Vector3<Scalar> torque_from_forces;
  Vector3<Scalar> torque_from_drag;
  Vector3<Scalar> total_force_axis;
  Scalar lambda{};
  bool is_balanced = false;
};

template <typename Scalar>
bool tilt_angle_in_range(Scalar angle) {
  using std::abs;
  return std::isfinite(static_cast<double>(angle)) &&
         abs(angle) <= Scalar(std::numbers::pi / 2) + Scalar(1e-12);
}

/// Rot(y, beta) * Rot(x, alpha); both angles must lie in [-pi/2, pi/2].
template <typename Scalar>
Matrix3<Scalar> propeller_orientation(Scalar alpha, Scalar beta) {
  if (!tilt_angle_in_range(alpha) || !tilt_angle_in_range(beta)) {
    throw DomainError("propeller_orientation: tilt angles must lie in [-pi/2, pi/2]");
  }
  return rot_axis_angle(Axis::Y, beta) * rot_axis_angle(Axis::X, alpha);
}

/// Solid cuboid of footprint l x l and height h about its centroid.
template <typename Scalar>
Matrix3<Scalar> cuboid_inertia(Scalar mass, Scalar l, Scalar h) {
  const Scalar side = mass * (l * l + h * h) / Scalar(12);
  const Scalar yaw = mass * (l * l + l * l) / Scalar(12);
  return Vector3<Scalar>(side, side, yaw).asDiagonal();
}

/// Propeller positions of the x-configuration, numbered counterclockwise
/// from front-right, at half-diagonal offset d = l/4 on each axis.
template <typename Scalar>
std::array<Vector3<Scalar>, 4> square_propeller_positions(Scalar l) {
  const Scalar d = l / Scalar(4);
  return {Vector3<Scalar>(d, -d, 0), Vector3<Scalar>(d, d, 0),
          Vector3<Scalar>(-d, d, 0), Vector3<Scalar>(-d, -d, 0)};
}

/// Throws DomainError naming the first violated ModuleSpec invariant.
template <typename Scalar>
void validate_module(const ModuleSpec<Scalar>& module) {
  using std::abs;
  if (!(module.mass > 0)) throw DomainError("module: mass must be positive");
  if (!(module.length > 0) || !(module.height > 0)) {
    throw DomainError("module: length and height must be positive");
  }
  const auto& p = module.propellers;
  const Scalar tol = Scalar(1e-12) * (Scalar(1) + module.length);
  if ((p[0].position + p[2].position).norm() > tol ||
      (p[1].position + p[3].position).norm() > tol) {
    throw DomainError("module: propellers are not in square configuration (p1 = -p3, p2 = -p4)");
  }
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& prop = p[j];
    const int expected_spin = (j % 2 == 0) ? 1 : -1;
    if (prop.spin != expected_spin) {
      throw DomainError("module: propeller " + std::to_string(j + 1) +
                        " spin must be " + std::to_string(expected_spin));
    }
    if (!(prop.k_f > 0) || !(prop.k_m >= 0) || !(prop.f_max > 0)) {
      throw DomainError("module: propeller " + std::to_string(j + 1) +
                        " requires k_f > 0, k_m >= 0, f_max > 0");
    }
    if (!is_rotation(prop.orientation)) {
      throw DomainError("module: propeller " + std::to_string(j + 1) +
                        " orientation is not a rotation");
    }
  }
  if ((module.inertia - module.inertia.transpose()).norm() > Scalar(1e-12)) {
    throw DomainError("module: inertia is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix3<Scalar>> eig(module.inertia, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0)) {
    throw DomainError("module: inertia is not positive definite");
  }
  if (!is_rotation(module.declared_tilt)) {
    throw DomainError("module: declared tilt is not a rotation");
  }
}

/// Module whose four rotors share the orientation Rot(y, beta) Rot(x, alpha).
template <typename Scalar>
ModuleSpec<Scalar> build_r_module(Scalar mass, Scalar l, Scalar h, Scalar alpha, Scalar beta,
                                  Scalar k_f = Scalar(kDefaultThrustCoefficient),
                                  Scalar k_m = Scalar(kDefaultDragCoefficient),
                                  Scalar f_max = Scalar(kDefaultMaxThrust)) {
  if (!(mass > 0) || !(l > 0) || !(h > 0) || !(k_f > 0) || !(f_max > 0)) {
    throw DomainError("build_r_module: mass, l, h, k_f and f_max must be positive");
  }
  if (!(k_m >= 0)) throw DomainError("build_r_module: k_m must be non-negative");
  const Matrix3<Scalar> R = propeller_orientation(alpha, beta);
  const auto positions = square_propeller_positions(l);

  ModuleSpec<Scalar> module;
  module.mass = mass;
  module.length = l;
  module.height = h;
  module.inertia = cuboid_inertia(mass, l, h);
  module.declared_tilt = R;
  for (std::size_t j = 0; j < 4; ++j) {
    module.propellers[j] = PropellerSpec<Scalar>{positions[j], R, (j % 2 == 0) ? 1 : -1,
                                                 k_f, k_m, f_max};
  }
  return module;
}

/// Evaluates the torque-from-force, torque-from-drag and force-direction
/// constraints with every rotor at unit thrust.
template <typename Scalar>
BalanceReport<Scalar> check_balanced(const ModuleSpec<Scalar>& module,
                                     Scalar tol = Scalar(kDefaultBalanceTolerance)) {
  validate_module(module);
  BalanceReport<Scalar> report;
  report.torque_from_forces.setZero();
  report.torque_from_drag.setZero();
  report.total_force_axis.setZero();
  for (const auto& prop : module.propellers) {
    const Vector3<Scalar> axis = prop.thrust_axis();
    report.torque_from_forces += prop.position.cross(axis);
    report.torque_from_drag += Scalar(prop.spin) * axis;
    report.total_force_axis += axis;
  }
  report.lambda = report.total_force_axis.norm();

  const Vector3<Scalar> desired = module.declared_tilt.col(2);
  const Vector3<Scalar> off_axis = report.total_force_axis - report.lambda * desired;
  report.is_balanced = report.torque_from_forces.cwiseAbs().maxCoeff() < tol &&
                       report.torque_from_drag.cwiseAbs().maxCoeff() < tol &&
                       off_axis.cwiseAbs().maxCoeff() < tol && report.lambda > tol;
  return report;
}

/// Force and torque about the module centre of mass, in the module frame.
template <typename Scalar, typename Derived>
Wrench<Scalar> module_wrench(const ModuleSpec<Scalar>& module,
                             const Eigen::MatrixBase<Derived>& u) {
  if (u.size() != 4) throw DomainError("module_wrench: expected four thrusts");
  Wrench<Scalar> w;
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& prop = module.propellers[j];
    const Scalar uj = u(static_cast<Eigen::Index>(j));
    if (!(uj >= 0) || !(uj <= prop.f_max)) {
      throw DomainError("module_wrench: thrust " + std::to_string(j + 1) +
                        " outside [0, f_max]");
    }
    const Vector3<Scalar> f = uj * prop.thrust_axis();
    w.force += f;
    w.torque += prop.position.cross(f) + Scalar(prop.spin) * prop.drag_ratio() * f;
  }
  return w;
}

}  // namespace hmodquad

#endif  // HMODQUAD_MODULE_DESIGN_HPP_
