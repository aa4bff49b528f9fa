#ifndef HMODQUAD_STRUCTURE_HPP_
#define HMODQUAD_STRUCTURE_HPP_

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hmodquad/errors.hpp"
#include "hmodquad/linalg.hpp"
#include "hmodquad/module_design.hpp"
#include "hmodquad/so3.hpp"

namespace hmodquad {

template <typename Scalar>
using DesignMatrix = Eigen::Matrix<Scalar, 6, Eigen::Dynamic>;
template <typename Scalar>
using ForceMatrix = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

// Relative gap under which two singular values of A_f count as equal when
// choosing F-frame axes.
inline constexpr double kDegenerateSigmaTolerance = 1e-9;

template <typename Scalar>
struct ModulePlacement {
  ModuleSpec<Scalar> module;
  int col = 0;  // grid offset along the structure x-axis, in module lengths
  int row = 0;  // grid offset along the structure y-axis
  int yaw_quarter_turns = 0;
};

/// Principal semi-axes of the force ellipsoid A_f * {|u| <= 1}. Column k of
/// `axes` pairs with singular_values(k); columns are (z_F, x_F, y_F).
template <typename Scalar>
struct ActuationEllipsoid {
  Vector3<Scalar> singular_values;
  Matrix3<Scalar> axes;
};

template <typename Scalar>
struct StructureModel {
  std::vector<ModulePlacement<Scalar>> placements;
  Scalar total_mass{};
  Vector3<Scalar> com = Vector3<Scalar>::Zero();  // relative to module 1 centre
  Matrix3<Scalar> inertia = Matrix3<Scalar>::Zero();
  DesignMatrix<Scalar> A;
  int rank_f = 0;
  int rank = 0;
  Matrix3<Scalar> R_SF = Matrix3<Scalar>::Identity();
  Vector3<Scalar> lambda_axes = Vector3<Scalar>::Zero();
  VectorX<Scalar> u_max;  // per-rotor f_max, same ordering as the columns of A

  Eigen::Index num_modules() const { return static_cast<Eigen::Index>(placements.size()); }
  Eigen::Index num_rotors() const { return 4 * num_modules(); }
  auto A_f() const { return A.template topRows<3>(); }
  auto A_tau() const { return A.template bottomRows<3>(); }
  int controllable_dof() const { return 3 + rank_f; }
};

/// Orientation of module i in the structure frame, whose axes follow module 1.
template <typename Scalar>
Matrix3<Scalar> module_rotation(const std::vector<ModulePlacement<Scalar>>& placements,
                                std::size_t i) {
  return quarter_turn_z<Scalar>(placements[i].yaw_quarter_turns -
                                placements.front().yaw_quarter_turns);
}

template <typename Scalar>
Vector3<Scalar> module_centre(const ModulePlacement<Scalar>& placement) {
  const Scalar l = placement.module.length;
  return Vector3<Scalar>(Scalar(placement.col) * l, Scalar(placement.row) * l, 0);
}

template <typename Scalar>
Vector3<Scalar> centre_of_mass(const std::vector<ModulePlacement<Scalar>>& placements) {
  Vector3<Scalar> weighted = Vector3<Scalar>::Zero();
  Scalar mass = 0;
  for (const auto& p : placements) {
    weighted += p.module.mass * module_centre(p);
    mass += p.module.mass;
  }
  return weighted / mass;
}

/// 6 x 4n map from rotor thrusts to force and torque about `com`, in {S}.
template <typename Scalar>
DesignMatrix<Scalar> design_matrix(const std::vector<ModulePlacement<Scalar>>& placements,
                                   const Vector3<Scalar>& com) {
  DesignMatrix<Scalar> A(6, 4 * static_cast<Eigen::Index>(placements.size()));
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const Matrix3<Scalar> R_SM = module_rotation(placements, i);
    const Vector3<Scalar> offset = module_centre(placements[i]) - com;
    for (std::size_t j = 0; j < 4; ++j) {
      const auto& prop = placements[i].module.propellers[j];
      const Vector3<Scalar> axis = R_SM * prop.thrust_axis();
      const Vector3<Scalar> p = R_SM * prop.position + offset;
      const Eigen::Index k = static_cast<Eigen::Index>(4 * i + j);
      A.col(k).template head<3>() = axis;
      A.col(k).template tail<3>() = p.cross(axis) + Scalar(prop.spin) * prop.drag_ratio() * axis;
    }
  }
  return A;
}

template <typename Scalar>
DesignMatrix<Scalar> design_matrix(const StructureModel<Scalar>& structure) {
  return design_matrix(structure.placements, structure.com);
}

template <typename Scalar>
Matrix3<Scalar> structure_inertia(const std::vector<ModulePlacement<Scalar>>& placements,
                                  const Vector3<Scalar>& com) {
  Matrix3<Scalar> I = Matrix3<Scalar>::Zero();
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& module = placements[i].module;
    const Matrix3<Scalar> R = module_rotation(placements, i);
    const Vector3<Scalar> d = module_centre(placements[i]) - com;
    I += R * module.inertia * R.transpose() +
         module.mass * (d.squaredNorm() * Matrix3<Scalar>::Identity() - d * d.transpose());
  }
  return I;
}

template <typename Scalar>
Matrix3<Scalar> structure_inertia(const StructureModel<Scalar>& structure) {
  return structure_inertia(structure.placements, structure.com);
}

namespace detail {

template <typename Scalar>
Vector3<Scalar> unit_or(const Vector3<Scalar>& v, const Vector3<Scalar>& fallback) {
  const Scalar n = v.norm();
  return n > Scalar(1e-12) ? Vector3<Scalar>(v / n) : fallback;
}

// Picks a unit vector in the orthogonal complement of z, preferring e1 and
// then e2 (projected), and fixes its sign the same way.
template <typename Scalar>
Vector3<Scalar> preferred_perpendicular(const Vector3<Scalar>& z) {
  const Matrix3<Scalar> P = Matrix3<Scalar>::Identity() - z * z.transpose();
  const Vector3<Scalar> from_e1 = P * Vector3<Scalar>::UnitX();
  if (from_e1.norm() > Scalar(1e-6)) return from_e1.normalized();
  return (P * Vector3<Scalar>::UnitY()).normalized();
}

template <typename Scalar>
void orient_x_axis(Vector3<Scalar>& x) {
  const Scalar tie = Scalar(1e-12);
  if (x.x() < -tie || (std::abs(x.x()) <= tie && x.y() < -tie) ||
      (std::abs(x.x()) <= tie && std::abs(x.y()) <= tie && x.z() < 0)) {
    x = -x;
  }
}

}  // namespace detail

/// F-frame axes from the SVD of A_f for rank(A_f) >= 2.
///
/// z_F is the left singular vector of the largest singular value, signed so
/// that it agrees with the total thrust at uniform input. x_F is the dominant
/// direction of A_f once z_F is projected out, signed toward +e1 (then +e2).
/// Ties between singular values are broken toward e3 for z_F and e1 for x_F.
template <typename Scalar>
Matrix3<Scalar> f_frame_from_svd(const ForceMatrix<Scalar>& A_f) {
  using Mat3X = ForceMatrix<Scalar>;
  const Scalar degenerate = Scalar(kDegenerateSigmaTolerance);
  Eigen::JacobiSVD<Mat3X> svd(A_f, Eigen::ComputeFullU);
  const Vector3<Scalar> sigma = svd.singularValues().template head<3>();
  const Matrix3<Scalar> U = svd.matrixU();
  if (!(sigma(0) > 0)) throw AssemblyError("f_frame: A_f is zero");

  Vector3<Scalar> z = U.col(0);
  if (sigma(1) >= sigma(0) * (Scalar(1) - degenerate)) {
    Matrix3<Scalar> P = U.col(0) * U.col(0).transpose();
    for (int k = 1; k < 3; ++k) {
      if (sigma(k) >= sigma(0) * (Scalar(1) - degenerate)) P += U.col(k) * U.col(k).transpose();
    }
    z = detail::unit_or<Scalar>(P * Vector3<Scalar>::UnitZ(), U.col(0));
  }
  const Vector3<Scalar> total_thrust = A_f.rowwise().sum();
  const Scalar along = z.dot(total_thrust);
  if (along < 0 || (along == 0 && z.z() < 0)) z = -z;

  const Mat3X A_perp = (Matrix3<Scalar>::Identity() - z * z.transpose()) * A_f;
  Eigen::JacobiSVD<Mat3X> svd_perp(A_perp, Eigen::ComputeFullU);
  const auto& sp = svd_perp.singularValues();
  Vector3<Scalar> x;
  if (!(sp(0) > 0) || sp(1) >= sp(0) * (Scalar(1) - degenerate)) {
    x = detail::preferred_perpendicular(z);
  } else {
    x = svd_perp.matrixU().col(0);
    x = (x - x.dot(z) * z).normalized();
  }
  detail::orient_x_axis(x);
  const Vector3<Scalar> y = z.cross(x);

  Matrix3<Scalar> R;
  R.col(0) = x;
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

/// Shared rotor rotation of a rank-1 structure, expressed in {S}. Every rotor
/// force axis must coincide.
template <typename Scalar>
Matrix3<Scalar> f_frame_rank_one(const std::vector<ModulePlacement<Scalar>>& placements,
                                 const ForceMatrix<Scalar>& A_f) {
  const Vector3<Scalar> reference = A_f.col(0).normalized();
  for (Eigen::Index k = 1; k < A_f.cols(); ++k) {
    if ((A_f.col(k).normalized() - reference).norm() > Scalar(1e-9)) {
      throw AssemblyError("f_frame: rank-1 structure has rotor " + std::to_string(k + 1) +
                          " not aligned with rotor 1");
    }
  }
  return module_rotation(placements, 0) * placements.front().module.propellers[0].orientation;
}

template <typename Scalar>
Matrix3<Scalar> f_frame(const StructureModel<Scalar>& structure) {
  const ForceMatrix<Scalar> A_f = structure.A_f();
  const int rank_f = numerical_rank(A_f);
  if (rank_f == 0) throw AssemblyError("f_frame: structure produces no force");
  if (rank_f == 1) return f_frame_rank_one(structure.placements, A_f);
  return f_frame_from_svd(A_f);
}

template <typename Scalar>
ActuationEllipsoid<Scalar> actuation_ellipsoid(const StructureModel<Scalar>& structure) {
  const ForceMatrix<Scalar> A_f = structure.A_f();
  Eigen::JacobiSVD<ForceMatrix<Scalar>> svd(A_f);
  ActuationEllipsoid<Scalar> e;
  e.singular_values = svd.singularValues().template head<3>();
  e.axes.col(0) = structure.R_SF.col(2);
  e.axes.col(1) = structure.R_SF.col(0);
  e.axes.col(2) = structure.R_SF.col(1);
  return e;
}

/// Assembles docked modules into a rigid structure and derives its design
/// matrix, inertia, rank and F-frame.
template <typename Scalar>
StructureModel<Scalar> assemble(std::vector<ModulePlacement<Scalar>> placements) {
  if (placements.empty()) throw AssemblyError("assemble: structure needs at least one module");
  const Scalar l = placements.front().module.length;
  const Scalar h = placements.front().module.height;
  std::set<std::pair<int, int>> cells;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& p = placements[i];
    validate_module(p.module);
    if (std::abs(p.module.length - l) > Scalar(1e-12) ||
        std::abs(p.module.height - h) > Scalar(1e-12)) {
      throw AssemblyError("assemble: module " + std::to_string(i + 1) +
                          " differs in length or height from module 1");
    }
    if (p.yaw_quarter_turns < 0 || p.yaw_quarter_turns > 3) {
      throw AssemblyError("assemble: module " + std::to_string(i + 1) +
                          " yaw_quarter_turns must be in {0,1,2,3}");
    }
    if (!cells.insert({p.col, p.row}).second) {
      for (std::size_t k = 0; k < i; ++k) {
        if (placements[k].col == p.col && placements[k].row == p.row) {
          throw AssemblyError("assemble: modules " + std::to_string(k + 1) + " and " +
                              std::to_string(i + 1) + " share grid cell (" +
                              std::to_string(p.col) + ", " + std::to_string(p.row) + ")");
        }
      }
    }
  }

  StructureModel<Scalar> s;
  s.placements = std::move(placements);
  s.total_mass = 0;
  for (const auto& p : s.placements) s.total_mass += p.module.mass;
  s.com = centre_of_mass(s.placements);
  s.inertia = structure_inertia(s.placements, s.com);
  s.A = design_matrix(s.placements, s.com);

  s.u_max.resize(s.num_rotors());
  for (std::size_t i = 0; i < s.placements.size(); ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      s.u_max(static_cast<Eigen::Index>(4 * i + j)) = s.placements[i].module.propellers[j].f_max;
    }
  }

  if (numerical_rank(s.A_tau()) != 3) {
    throw AssemblyError("assemble: torque rows of the design matrix are not full rank");
  }
  s.rank_f = numerical_rank(s.A_f());
  s.rank = numerical_rank(s.A);
  s.R_SF = f_frame(s);
  Eigen::JacobiSVD<ForceMatrix<Scalar>> svd(ForceMatrix<Scalar>(s.A_f()));
  s.lambda_axes = svd.singularValues().template head<3>();
  return s;
}

}  // namespace hmodquad

#endif  // HMODQUAD_STRUCTURE_HPP_
