#ifndef HMODQUAD_SO3_HPP_
#define HMODQUAD_SO3_HPP_

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hmodquad/errors.hpp"

namespace hmodquad {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

enum class Axis { X, Y, Z };

/// Right-handed rotation by `angle` radians about a principal axis.
template <typename Scalar>
Matrix3<Scalar> rot_axis_angle(Axis axis, Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(angle);
  const Scalar s = sin(angle);
  Matrix3<Scalar> R;
  switch (axis) {
    case Axis::X:
      R << 1, 0, 0,
           0, c, -s,
           0, s, c;
      break;
    case Axis::Y:
      R << c, 0, s,
           0, 1, 0,
           -s, 0, c;
      break;
    case Axis::Z:
      R << c, -s, 0,
           s, c, 0,
           0, 0, 1;
      break;
  }
  return R;
}

/// Rot(z, k*pi/2) with exact integer entries.
template <typename Scalar>
Matrix3<Scalar> quarter_turn_z(int quarter_turns) {
  const int k = ((quarter_turns % 4) + 4) % 4;
  static constexpr int kCos[4] = {1, 0, -1, 0};
  static constexpr int kSin[4] = {0, 1, 0, -1};
  Matrix3<Scalar> R;
  R << Scalar(kCos[k]), Scalar(-kSin[k]), 0,
       Scalar(kSin[k]), Scalar(kCos[k]), 0,
       0, 0, 1;
  return R;
}

/// Skew-symmetric matrix with hat(v) * w == v.cross(w).
template <typename Derived>
Matrix3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  Matrix3<typename Derived::Scalar> M;
  M << 0, -v(2), v(1),
       v(2), 0, -v(0),
       -v(1), v(0), 0;
  return M;
}

inline constexpr double kSkewTolerance = 1e-9;

/// Inverse of hat. Throws DomainError when M is not skew-symmetric.
template <typename Derived>
Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& M) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 3, 3);
  using Scalar = typename Derived::Scalar;
  if (!((M + M.transpose()).norm() < Scalar(kSkewTolerance))) {
    throw DomainError("vee: matrix is not skew-symmetric (malformed attitude error)");
  }
  return Vector3<Scalar>(M(2, 1), M(0, 2), M(1, 0));
}

/// Rodrigues exponential map from a rotation vector to SO(3).
template <typename Derived>
Matrix3<typename Derived::Scalar> exp_map(const Eigen::MatrixBase<Derived>& rotvec) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  using std::sin;
  const Scalar theta = rotvec.norm();
  const Matrix3<Scalar> K = hat(rotvec);
  if (theta < Scalar(1e-8)) {
    return Matrix3<Scalar>::Identity() + K + Scalar(0.5) * K * K;
  }
  const Scalar a = sin(theta) / theta;
  const Scalar half_sin = sin(Scalar(0.5) * theta);
  const Scalar b = Scalar(2) * half_sin * half_sin / (theta * theta);
  return Matrix3<Scalar>::Identity() + a * K + b * K * K;
}

/// Frobenius residuals of R*R^T - I and det(R) - 1 both below tol.
template <typename Derived>
bool is_rotation(const Eigen::MatrixBase<Derived>& R,
                 typename Derived::Scalar tol = typename Derived::Scalar(1e-9)) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  if (!R.allFinite()) return false;
  const Scalar ortho = (R * R.transpose() - Matrix3<Scalar>::Identity()).norm();
  return ortho < tol && abs(R.determinant() - Scalar(1)) < tol;
}

/// Closest rotation in the Frobenius sense.
template <typename Derived>
Matrix3<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& R) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<Matrix3<Scalar>> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3<Scalar> U = svd.matrixU();
  const Matrix3<Scalar> V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0) U.col(2) *= Scalar(-1);
  return U * V.transpose();
}

/// Rotation angle in [0, pi].
template <typename Derived>
typename Derived::Scalar rotation_angle(const Eigen::MatrixBase<Derived>& R) {
  using Scalar = typename Derived::Scalar;
  using std::atan2;
  // atan2 form stays accurate near 0 and pi, where acos of the trace does not.
  const Scalar s = Scalar(0.5) *
                   Vector3<Scalar>(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)).norm();
  const Scalar c = Scalar(0.5) * (R.trace() - Scalar(1));
  return atan2(s, c);
}

/// Z-Y-X Euler angles (yaw, pitch, roll) with R = Rz(yaw) Ry(pitch) Rx(roll).
template <typename Derived>
Vector3<typename Derived::Scalar> yaw_pitch_roll(const Eigen::MatrixBase<Derived>& R) {
  using Scalar = typename Derived::Scalar;
  using std::asin;
  using std::atan2;
  const Scalar yaw = atan2(R(1, 0), R(0, 0));
  const Scalar pitch = asin(std::clamp(-R(2, 0), Scalar(-1), Scalar(1)));
  const Scalar roll = atan2(R(2, 1), R(2, 2));
  return Vector3<Scalar>(yaw, pitch, roll);
}

/// Wraps an angle to (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  using std::atan2;
  using std::cos;
  using std::sin;
  return atan2(sin(a), cos(a));
}

}  // namespace hmodquad

#endif  // HMODQUAD_SO3_HPP_
