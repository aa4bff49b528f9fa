#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace hmodquad::cli {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  // Avoid printing "-0".
  if (std::string(buf) == "-0") return "0";
  return buf;
}

std::string fmt_vec(const Vector3<double>& v) {
  return "[" + fmt(v.x()) + ", " + fmt(v.y()) + ", " + fmt(v.z()) + "]";
}

void write_row(std::ostream& out, const std::vector<double>& values, bool saturated) {
  char buf[32];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.17g,", v);
    out << buf;
  }
  out << (saturated ? 1 : 0) << '\n';
}

}  // namespace

std::string describe_rotation(const Matrix3<double>& R, double tol) {
  const double angle = rotation_angle(R);
  if (angle < tol) return "identity";
  Vector3<double> axis(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  if (axis.norm() < 1e-6) {
    // Half turn: the axis is the dominant column of (R + I) / 2.
    const Matrix3<double> B = 0.5 * (R + Matrix3<double>::Identity());
    Eigen::Index c;
    B.colwise().norm().maxCoeff(&c);
    axis = B.col(c);
  }
  axis.normalize();
  double deg = angle * kRadToDeg;
  static const char* names[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    Vector3<double> rest = axis;
    rest(i) = 0;
    if (rest.norm() < tol) {
      if (axis(i) < 0) deg = -deg;
      return std::string("Rot(") + names[i] + ", " + fmt(deg) + "°)";
    }
  }
  return "Rot(" + fmt_vec(axis) + ", " + fmt(deg) + "°)";
}

int run_check(const StructureConfig& config, std::ostream& report) {
  bool all_balanced = true;
  for (const auto& m : config.modules) {
    const auto module = build_module(m);
    const auto b = check_balanced(module);
    all_balanced = all_balanced && b.is_balanced;
    report << "module " << m.name << ": " << (b.is_balanced ? "balanced" : "UNBALANCED")
           << "\n  torque from forces " << fmt_vec(b.torque_from_forces)
           << "\n  torque from drag   " << fmt_vec(b.torque_from_drag)
           << "\n  force axis sum     " << fmt_vec(b.total_force_axis) << " (lambda "
           << fmt(b.lambda, "%.12g") << ")\n";
  }

  const auto s = build_structure(config);
  const std::string frame = describe_rotation(s.R_SF);
  report << "structure: " << s.num_modules() << " module(s), mass " << fmt(s.total_mass)
         << " kg\n"
         << "  rank(A_f) " << s.rank_f << ", rank(A) " << s.rank << "\n"
         << "  singular values of A_f " << fmt_vec(s.lambda_axes) << "\n"
         << "  S_R_F " << frame << "\n"
         << "  controllable DOF " << s.controllable_dof() << "\n"
         << "rank " << s.rank << ", F-frame = " << frame << "\n";
  if (!all_balanced) {
    report << "error: structure contains unbalanced modules\n";
    return kExitValidation;
  }
  return kExitOk;
}

std::vector<std::array<double, 2>> ellipsoid_xz_polygon(const StructureModel<double>& structure,
                                                        int samples) {
  MatrixX<double> M(2, structure.num_rotors());
  M.row(0) = structure.A.row(0);
  M.row(1) = structure.A.row(2);
  Eigen::JacobiSVD<MatrixX<double>> svd(M, Eigen::ComputeThinU);
  const Eigen::Matrix2d U = svd.matrixU();
  const Eigen::Vector2d sigma = svd.singularValues();
  std::vector<std::array<double, 2>> out;
  out.reserve(static_cast<std::size_t>(samples) + 1);
  for (int k = 0; k <= samples; ++k) {
    const double th = 2 * std::numbers::pi * (k % samples) / samples;
    const Eigen::Vector2d p = U * Eigen::Vector2d(sigma(0) * std::cos(th), sigma(1) * std::sin(th));
    out.push_back({p(0), p(1)});
  }
  return out;
}

int run_ellipsoid(const StructureConfig& config, std::ostream& report, std::ostream* csv) {
  const auto s = build_structure(config);
  const auto e = actuation_ellipsoid(s);
  static const char* labels[] = {"z_F", "x_F", "y_F"};
  report << "actuation ellipsoid of A_f (" << s.num_rotors() << " rotors)\n";
  for (int i = 0; i < 3; ++i) {
    report << "  sigma" << i + 1 << " " << fmt(e.singular_values(i), "%.12g") << " along "
           << labels[i] << " " << fmt_vec(e.axes.col(i)) << "\n";
  }
  report << "  S_R_F " << describe_rotation(s.R_SF) << "\n";
  if (csv) {
    *csv << "x,z\n";
    char buf[80];
    for (const auto& p : ellipsoid_xz_polygon(s)) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p[0], p[1]);
      *csv << buf;
    }
  }
  return kExitOk;
}

std::vector<std::string> csv_header(const StructureModel<double>& structure) {
  std::vector<std::string> h = {"t",   "x",     "y",    "z", "x_d", "y_d",
                                "z_d", "yaw", "pitch", "roll", "e_r"};
  for (Eigen::Index k = 0; k < structure.num_rotors(); ++k) h.push_back("u" + std::to_string(k + 1));
  h.push_back("saturated");
  return h;
}

SimulationSummary run_simulation(const StructureConfig& config, std::ostream* csv) {
  const auto structure = build_structure(config);
  const auto trajectory = build_trajectory(config.trajectory);
  const auto params = build_sim_params(config.sim);
  const Controller<double> controller(structure, build_gains(config.gains), params.gravity);
  const auto x0 = initial_state(config, structure, trajectory);

  if (csv) {
    const auto header = csv_header(structure);
    for (std::size_t i = 0; i < header.size(); ++i) *csv << (i ? "," : "") << header[i];
    *csv << '\n';
  }

  SimulationSummary sum;
  long saturated_steps = 0;
  long measured = 0;
  double sq_error = 0;
  double pitch_total = 0;
  std::vector<double> row;
  simulate(structure, controller, trajectory, x0, params,
           [&](long k, double t, const RigidState<double>& state,
               const TrajectorySample<double>& sample, const ControlOutput<double>& control) {
             const Matrix3<double> R_WF = state.R_WS * structure.R_SF;
             const Vector3<double> ypr = yaw_pitch_roll(R_WF);
             const double e_r = (sample.r_d - state.r).norm();
             sum.steps = k + 1;
             if (control.saturated) ++saturated_steps;
             sum.final_attitude_error_deg =
                 rotation_angle(Matrix3<double>(control.desired_attitude.transpose() * R_WF)) *
                 kRadToDeg;
             if (t >= config.sim.transient_s - 1e-12) {
               ++measured;
               sq_error += e_r * e_r;
               sum.max_position_error = std::max(sum.max_position_error, e_r);
               pitch_total += ypr(1);
               sum.max_abs_pitch_deg = std::max(sum.max_abs_pitch_deg, std::abs(ypr(1)) * kRadToDeg);
               sum.max_abs_roll_deg = std::max(sum.max_abs_roll_deg, std::abs(ypr(2)) * kRadToDeg);
               sum.max_yaw_error_deg = std::max(
                   sum.max_yaw_error_deg, std::abs(wrap_angle(ypr(0) - sample.yaw_d)) * kRadToDeg);
             }
             if (csv) {
               row.assign({t, state.r.x(), state.r.y(), state.r.z(), sample.r_d.x(),
                           sample.r_d.y(), sample.r_d.z(), ypr(0), ypr(1), ypr(2), e_r});
               row.insert(row.end(), control.u.data(), control.u.data() + control.u.size());
               write_row(*csv, row, control.saturated);
             }
           });
  if (measured > 0) {
    sum.rms_position_error = std::sqrt(sq_error / double(measured));
    sum.mean_pitch_deg = pitch_total / double(measured) * kRadToDeg;
  }
  sum.saturation_fraction = double(saturated_steps) / double(sum.steps);
  return sum;
}

int run_simulate(const StructureConfig& config, std::ostream& report, std::ostream* csv) {
  SimulationSummary s;
  try {
    s = run_simulation(config, csv);
  } catch (const SimulationError& e) {
    report << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  report << "steps " << s.steps << " (dt " << fmt(config.sim.dt_s) << " s, duration "
         << fmt(config.sim.duration_s) << " s, trajectory "
         << trajectory_type_name(config.trajectory.type) << ")\n"
         << "after " << fmt(config.sim.transient_s) << " s transient:\n"
         << "  rms position error  " << fmt(s.rms_position_error) << " m\n"
         << "  max position error  " << fmt(s.max_position_error) << " m\n"
         << "  mean pitch          " << fmt(s.mean_pitch_deg) << " deg\n"
         << "  max |pitch|         " << fmt(s.max_abs_pitch_deg) << " deg\n"
         << "  max |roll|          " << fmt(s.max_abs_roll_deg) << " deg\n"
         << "  max yaw error       " << fmt(s.max_yaw_error_deg) << " deg\n"
         << "final attitude error  " << fmt(s.final_attitude_error_deg) << " deg\n"
         << "saturation fraction   " << fmt(s.saturation_fraction) << "\n";
  return kExitOk;
}

}  // namespace hmodquad::cli
