#ifndef HMODQUAD_TESTS_FIXTURES_HPP_
#define HMODQUAD_TESTS_FIXTURES_HPP_

#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hmodquad/hmodquad.hpp"

namespace fixtures {

using namespace hmodquad;

inline constexpr double kDeg = std::numbers::pi / 180.0;
inline constexpr double kMass = 0.135;
inline constexpr double kLength = 0.12;
inline constexpr double kHeight = 0.06;

inline ModulePlacement<double> place(double alpha_deg, double beta_deg, int col, int row,
                                     int yaw_quarter_turns = 0) {
  return {build_r_module(kMass, kLength, kHeight, alpha_deg * kDeg, beta_deg * kDeg), col, row,
          yaw_quarter_turns};
}

struct Layout {
  std::string name;
  std::vector<ModulePlacement<double>> placements;
};

inline Layout flat() { return {"flat", {place(0, 0, 0, 0)}}; }
inline Layout experiment1() { return {"experiment1", {place(0, 10, 0, 0)}}; }
inline Layout experiment2() { return {"experiment2", {place(0, 30, 0, 0), place(0, -30, 1, 0)}}; }
inline Layout experiment3() {
  return {"experiment3",
          {place(0, 30, 0, 0), place(0, -30, 1, 1), place(30, 0, 1, 0), place(-30, 0, 0, 1)}};
}
inline Layout asymmetric() { return {"asymmetric", {place(0, 30, 0, 0), place(0, 0, 1, 0)}}; }

inline std::vector<Layout> all_layouts() {
  return {flat(), experiment1(), experiment2(), experiment3(), asymmetric()};
}

inline VectorX<double> random_thrusts(std::mt19937_64& rng, Eigen::Index n, double f_max = 1.0) {
  std::uniform_real_distribution<double> d(0.0, f_max);
  VectorX<double> u(n);
  for (Eigen::Index k = 0; k < n; ++k) u(k) = d(rng);
  return u;
}

inline Vector3<double> random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector3<double> v;
  do {
    v = Vector3<double>(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Matrix3<double> random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, std::numbers::pi);
  return exp_map(Vector3<double>(a(rng) * random_unit(rng)));
}

// Brute-force aggregation: every module's wrench about its own centre, rotated
// into {S} and shifted to the centre of mass. Shares nothing with the design
// matrix code beyond module_wrench.
inline Eigen::Matrix<double, 6, 1> aggregate_wrench(const StructureModel<double>& s,
                                                    const VectorX<double>& u) {
  const int k0 = s.placements.front().yaw_quarter_turns;
  Vector3<double> com = Vector3<double>::Zero();
  double mass = 0;
  for (const auto& p : s.placements) {
    com += p.module.mass * Vector3<double>(p.col * p.module.length, p.row * p.module.length, 0);
    mass += p.module.mass;
  }
  com /= mass;
  Eigen::Matrix<double, 6, 1> w = Eigen::Matrix<double, 6, 1>::Zero();
  for (std::size_t i = 0; i < s.placements.size(); ++i) {
    const auto& p = s.placements[i];
    const Matrix3<double> R =
        Eigen::AngleAxisd(std::numbers::pi / 2 * (p.yaw_quarter_turns - k0),
                          Vector3<double>::UnitZ())
            .toRotationMatrix();
    const auto mw = module_wrench(p.module, u.segment<4>(4 * static_cast<Eigen::Index>(i)));
    const Vector3<double> c =
        Vector3<double>(p.col * p.module.length, p.row * p.module.length, 0) - com;
    w.head<3>() += R * mw.force;
    w.tail<3>() += R * mw.torque + c.cross(R * mw.force);
  }
  return w;
}

inline int oracle_rank(const MatrixX<double>& M, double rel_tol = 1e-9) {
  Eigen::BDCSVD<MatrixX<double>> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  return static_cast<int>((s.array() > rel_tol * s(0)).count());
}

// Least-squares oracle: the minimum-norm exact solution M^T (M M^T)^-1 c.
inline VectorX<double> min_norm(const MatrixX<double>& M, const VectorX<double>& c) {
  return M.transpose() * (M * M.transpose()).ldlt().solve(c);
}

// Reduced allocation matrix for the structure's rank mode.
inline Allocator<double> mode_allocator(const StructureModel<double>& s) {
  if (s.rank_f == 1) return make_allocator_4dof(s);
  if (s.rank_f == 2) return make_allocator_5dof(s).allocator;
  return make_allocator_6dof(s);
}

}  // namespace fixtures

#endif  // HMODQUAD_TESTS_FIXTURES_HPP_
