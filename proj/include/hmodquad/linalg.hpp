#ifndef HMODQUAD_LINALG_HPP_
#define HMODQUAD_LINALG_HPP_

#include <Eigen/Dense>

namespace hmodquad {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kDefaultRankTolerance = 1e-9;
inline constexpr double kPseudoInverseTolerance = 1e-10;

/// Number of singular values above rel_tol * sigma_max; 0 for a zero matrix.
template <typename Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& M,
                   typename Derived::Scalar rel_tol = typename Derived::Scalar(kDefaultRankTolerance)) {
  using Scalar = typename Derived::Scalar;
  if (M.size() == 0) return 0;
  const MatrixX<Scalar> dense = M;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(dense);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma(0) > 0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > rel_tol * sigma(0)) ++rank;
  }
  return rank;
}

/// Moore-Penrose inverse of M through its SVD, together with the number of
/// singular values kept (those above rel_tol * sigma_max).
template <typename Scalar>
struct PseudoInverse {
  MatrixX<Scalar> matrix;
  int rank = 0;
};

template <typename Derived>
PseudoInverse<typename Derived::Scalar> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& M,
    typename Derived::Scalar rel_tol = typename Derived::Scalar(kPseudoInverseTolerance)) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> dense = M;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  VectorX<Scalar> inv_sigma = VectorX<Scalar>::Zero(sigma.size());
  int rank = 0;
  if (sigma.size() > 0 && sigma(0) > 0) {
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > rel_tol * sigma(0)) {
        inv_sigma(i) = Scalar(1) / sigma(i);
        ++rank;
      }
    }
  }
  PseudoInverse<Scalar> out;
  out.matrix = svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
  out.rank = rank;
  return out;
}

}  // namespace hmodquad

#endif  // HMODQUAD_LINALG_HPP_
