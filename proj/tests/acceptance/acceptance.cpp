// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails. Thresholds are fixed here, not read from configs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "fixtures.hpp"

using namespace hmodquad;
using M3 = Matrix3<double>;
using V3 = Vector3<double>;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Result {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const Result& r) {
  std::printf("[%s] %s %s: %s\n", r.pass ? "PASS" : "FAIL", id, title, r.detail.c_str());
  if (!r.pass) ++failures;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string config_path(const char* name) {
  return std::string(HMODQUAD_CONFIG_DIR) + "/" + name;
}

const char* kFixtures[] = {"flat_hover.yaml",
                           "experiment1_helix.yaml",
                           "experiment2_rectangle_pitch0.yaml",
                           "experiment2_rectangle_pitch_m5.yaml",
                           "experiment3_rectangle.yaml",
                           "asymmetric_pair.yaml"};

StructureModel<double> fixture_structure(const char* name) {
  return cli::build_structure(cli::load_config(config_path(name)));
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Result balanced_modules() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> tilt(-std::numbers::pi / 2, std::numbers::pi / 2);
  double worst_residual = 0, worst_lambda = 0;
  bool all_balanced = true;
  for (int i = 0; i < 200; ++i) {
    const auto m = build_r_module(0.135, 0.12, 0.06, tilt(rng), tilt(rng));
    const auto b = check_balanced(m);
    all_balanced = all_balanced && b.is_balanced;
    const V3 off_axis = b.total_force_axis - b.lambda * m.declared_tilt.col(2);
    worst_residual = std::max({worst_residual, b.torque_from_forces.cwiseAbs().maxCoeff(),
                               b.torque_from_drag.cwiseAbs().maxCoeff(),
                               off_axis.cwiseAbs().maxCoeff()});
    worst_lambda = std::max(worst_lambda, std::abs(b.lambda - 4));
  }
  const double t = elapsed_s(t0);
  Result r;
  r.pass = all_balanced && worst_residual < 1e-9 && worst_lambda < 1e-9 && t < 1.0;
  r.detail = "200 random R-modules, max residual " + fmt("%.2e", worst_residual) +
             ", max |lambda-4| " + fmt("%.2e", worst_lambda) + ", " + fmt("%.3f", t) + " s";
  return r;
}

Result rank_detection() {
  struct Case {
    const char* file;
    int expected;
  };
  const Case cases[] = {{"flat_hover.yaml", 4},
                        {"experiment2_rectangle_pitch0.yaml", 5},
                        {"experiment3_rectangle.yaml", 6}};
  Result r;
  for (const auto& c : cases) {
    const auto s = fixture_structure(c.file);
    const int oracle = fixtures::oracle_rank(MatrixX<double>(s.A));
    const bool ok = s.rank == c.expected && oracle == c.expected;
    r.pass = r.pass && ok;
    r.detail += std::string(r.detail.empty() ? "" : ", ") + c.file + " rank " +
                std::to_string(s.rank) + " (oracle " + std::to_string(oracle) + ", expected " +
                std::to_string(c.expected) + ")";
  }
  return r;
}

Result f_frame_exactness() {
  const double e1 =
      (fixture_structure("experiment1_helix.yaml").R_SF - rot_axis_angle(Axis::Y, std::numbers::pi / 18)).norm();
  const double e2 = (fixture_structure("experiment2_rectangle_pitch0.yaml").R_SF - M3::Identity()).norm();
  const double e3 = (fixture_structure("experiment3_rectangle.yaml").R_SF - M3::Identity()).norm();
  Result r;
  r.pass = e1 < 1e-9 && e2 < 1e-9 && e3 < 1e-9;
  r.detail = "|R_SF - Rot(y,pi/18)| " + fmt("%.2e", e1) + ", |R_SF - I| exp2 " + fmt("%.2e", e2) +
             ", exp3 " + fmt("%.2e", e3);
  return r;
}

Result design_matrix_oracle() {
  std::mt19937_64 rng(7);
  double worst = 0;
  for (const char* f : kFixtures) {
    const auto s = fixture_structure(f);
    for (int i = 0; i < 100; ++i) {
      const VectorX<double> u = fixtures::random_thrusts(rng, s.num_rotors());
      worst = std::max(worst, (s.A * u - fixtures::aggregate_wrench(s, u)).cwiseAbs().maxCoeff());
    }
  }
  Result r;
  r.pass = worst <= 1e-12;
  r.detail = "6 fixtures x 100 inputs, max |A u - brute force| " + fmt("%.2e", worst);
  return r;
}

Result allocation_minimality() {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0, 1);
  double worst_residual = 0, worst_norm_gap = 0;
  bool modes[4] = {false, false, false, false};
  for (const char* f : kFixtures) {
    const auto s = fixture_structure(f);
    modes[s.rank_f] = true;
    const auto alloc = fixtures::mode_allocator(s);
    for (int i = 0; i < 100; ++i) {
      VectorX<double> c(alloc.matrix.rows());
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = n(rng);
      const VectorX<double> u = alloc.solve(c);
      worst_residual = std::max(worst_residual, (alloc.matrix * u - c).norm());
      worst_norm_gap =
          std::max(worst_norm_gap, std::abs(u.norm() - fixtures::min_norm(alloc.matrix, c).norm()));
    }
  }
  Result r;
  r.pass = modes[1] && modes[2] && modes[3] && worst_residual < 1e-9 && worst_norm_gap < 1e-9;
  r.detail = "4/5/6-DOF modes covered, max residual " + fmt("%.2e", worst_residual) +
             ", max norm gap to oracle " + fmt("%.2e", worst_norm_gap);
  return r;
}

Result closed_loop_hover() {
  Result r;
  double worst_er = 0, worst_angle = 0, worst_time = 0, lean_error = -1;
  for (const char* f : kFixtures) {
    auto config = cli::load_config(config_path(f));
    config.trajectory = cli::TrajectoryConfig{};  // hover at (0, 0, 1)
    config.sim.dt_s = 1e-3;
    config.sim.duration_s = 5;
    config.sim.initial_offset_m = {0.1, 0, 0};
    config.sim.initial_tilt_deg = {5, 0, 0};
    const auto s = cli::build_structure(config);
    const auto traj = cli::build_trajectory(config.trajectory);
    const Controller<double> ctl(s, cli::build_gains(config.gains));
    const auto t0 = std::chrono::steady_clock::now();
    double er = 0, angle = 0;
    M3 final_R;
    simulate(s, ctl, traj, cli::initial_state(config, s, traj), cli::build_sim_params(config.sim),
             [&](long, double, const RigidState<double>& x, const TrajectorySample<double>& smp,
                 const ControlOutput<double>& out) {
               er = (smp.r_d - x.r).norm();
               angle = rotation_angle(M3(out.desired_attitude.transpose() * x.R_WS * s.R_SF));
               final_R = x.R_WS;
             });
    worst_time = std::max(worst_time, elapsed_s(t0));
    worst_er = std::max(worst_er, er);
    worst_angle = std::max(worst_angle, angle / kDeg);
    if (std::string(f) == "experiment1_helix.yaml") {
      lean_error = rotation_angle(M3(s.R_SF * final_R)) / kDeg;
    }
  }
  r.pass = worst_er < 1e-3 && worst_angle < 0.1 && lean_error >= 0 && lean_error < 0.5 &&
           worst_time < 10;
  r.detail = "worst |e_r| at 5 s " + fmt("%.2e", worst_er) + " m, worst angle error " +
             fmt("%.2e", worst_angle) + " deg, tilted module |W_R_S - S_R_F^T| " +
             fmt("%.2e", lean_error) + " deg, slowest run " + fmt("%.2f", worst_time) + " s";
  return r;
}

Result experiment1() {
  auto config = cli::load_config(config_path("experiment1_helix.yaml"));
  config.sim.transient_s = 3;
  config.sim.duration_s = 17;
  const auto s = cli::run_simulation(config, nullptr);
  Result r;
  r.pass = s.rms_position_error < 0.05 && s.max_yaw_error_deg < 3;
  r.detail = "helix RMS e_r " + fmt("%.2e", s.rms_position_error) + " m over [3, 17] s, max yaw error " +
             fmt("%.2e", s.max_yaw_error_deg) + " deg";
  return r;
}

Result experiment2() {
  Result r;
  for (const auto& [file, hold] : {std::pair{"experiment2_rectangle_pitch0.yaml", 0.0},
                                   std::pair{"experiment2_rectangle_pitch_m5.yaml", -5.0}}) {
    auto config = cli::load_config(config_path(file));
    const auto structure = cli::build_structure(config);
    const auto traj = cli::build_trajectory(config.trajectory);
    const Controller<double> ctl(structure, cli::build_gains(config.gains));
    double worst_dev = 0, sq = 0;
    long n = 0;
    simulate(structure, ctl, traj, cli::initial_state(config, structure, traj),
             cli::build_sim_params(config.sim),
             [&](long, double t, const RigidState<double>& x, const TrajectorySample<double>& smp,
                 const ControlOutput<double>&) {
               if (t < config.sim.transient_s) return;
               const double pitch = yaw_pitch_roll(M3(x.R_WS * structure.R_SF))(1) / kDeg;
               worst_dev = std::max(worst_dev, std::abs(pitch - hold));
               sq += (smp.r_d - x.r).squaredNorm();
               ++n;
             });
    const double rms = std::sqrt(sq / double(n));
    r.pass = r.pass && worst_dev < 0.5 && rms < 0.05;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "hold " + fmt("%g", hold) +
                " deg: max pitch deviation " + fmt("%.2e", worst_dev) + " deg, RMS e_r " +
                fmt("%.2e", rms) + " m";
  }
  return r;
}

Result experiment3() {
  auto config = cli::load_config(config_path("experiment3_rectangle.yaml"));
  config.sim.transient_s = 0;  // the run starts on the reference
  const auto s = cli::run_simulation(config, nullptr);
  Result r;
  r.pass = s.max_abs_roll_deg < 0.5 && s.max_abs_pitch_deg < 0.5 && s.rms_position_error < 0.05;
  r.detail = "max |roll| " + fmt("%.2e", s.max_abs_roll_deg) + " deg, max |pitch| " +
             fmt("%.2e", s.max_abs_pitch_deg) + " deg, RMS e_r " + fmt("%.2e", s.rms_position_error) +
             " m";
  return r;
}

Result integrator_order() {
  const auto flat = fixture_structure("flat_hover.yaml");
  const double g = kGravity;

  // Free fall is quadratic in t, so RK4 reproduces it to round-off.
  const auto free_fall = [&](double dt) {
    RigidState<double> x;
    x.r = V3(0.3, -0.2, 10);
    x.v = V3(1, 2, 3);
    const double T = 2;
    const long n = std::lround(T / dt);
    for (long k = 0; k < n; ++k) x = step_wrench(flat, x, Wrench<double>{}, dt, g);
    const V3 exact = V3(0.3, -0.2, 10) + V3(1, 2, 3) * T - 0.5 * g * T * T * V3::UnitZ();
    return (x.r - exact).norm();
  };

  // Axisymmetric torque-free top: omega precesses about e3 at Om and
  // R(t) = exp(t (w0 + Om e3)) Rz(-Om t).
  const double I1 = flat.inertia(0, 0), I3 = flat.inertia(2, 2);
  const V3 w0(1.5, -0.8, 6.0);
  const double T = 2;
  const double Om = (I3 - I1) * w0.z() / I1;
  const M3 R_exact = exp_map(V3(T * (w0 + Om * V3::UnitZ()))) * rot_axis_angle(Axis::Z, -Om * T);
  const V3 w_exact = rot_axis_angle(Axis::Z, Om * T) * w0;
  const auto top = [&](double dt) {
    RigidState<double> x;
    x.omega = w0;
    const long n = std::lround(T / dt);
    for (long k = 0; k < n; ++k) x = step_wrench(flat, x, Wrench<double>{}, dt, 0.0);
    return (x.R_WS - R_exact).norm() + (x.omega - w_exact).norm();
  };

  // Fall under a constant tilted body force while spinning about the
  // principal z axis at w: the world force rotates, position has a closed form.
  const double w = 10, m = flat.total_mass;
  const V3 F(0.5, 0, 1.0);
  const auto spin_fall = [&](double dt) {
    RigidState<double> x;
    x.omega = V3(0, 0, w);
    const long n = std::lround(T / dt);
    for (long k = 0; k < n; ++k) x = step_wrench(flat, x, Wrench<double>{F, V3::Zero()}, dt, g);
    const V3 exact((F.x() / m) * (1 - std::cos(w * T)) / (w * w),
                   (F.x() / m) * (T / w - std::sin(w * T) / (w * w)),
                   (F.z() / m - g) * T * T / 2);
    return (x.r - exact).norm();
  };

  const double ff = free_fall(0.01);
  const double top_ratio = top(0.01) / top(0.005);
  const double fall_ratio = spin_fall(0.01) / spin_fall(0.005);

  RigidState<double> x;
  x.omega = V3(2, -3, 5);
  const auto s3 = fixture_structure("experiment3_rectangle.yaml");
  double drift = 0;
  for (int k = 0; k < 100000; ++k) {
    x = step_wrench(s3, x, Wrench<double>{}, 1e-3, g);
    if (k % 1000 == 999) {
      drift = std::max({drift, (x.R_WS * x.R_WS.transpose() - M3::Identity()).norm(),
                        std::abs(x.R_WS.determinant() - 1)});
    }
  }
  drift = std::max({drift, (x.R_WS * x.R_WS.transpose() - M3::Identity()).norm(),
                    std::abs(x.R_WS.determinant() - 1)});

  Result r;
  r.pass = ff <= 1e-12 && top_ratio >= 8 && fall_ratio >= 8 && drift < 1e-9;
  r.detail = "free fall error " + fmt("%.2e", ff) + " (exact), torque-free top ratio " +
             fmt("%.1f", top_ratio) + "x, spinning fall ratio " + fmt("%.1f", fall_ratio) +
             "x, SO(3) drift over 1e5 steps " + fmt("%.2e", drift);
  return r;
}

template <typename F>
void run(const char* id, const char* title, F&& criterion) {
  try {
    report(id, title, criterion());
  } catch (const std::exception& e) {
    report(id, title, Result{false, std::string("exception: ") + e.what()});
  }
}

}  // namespace

int main() {
  run("AC1", "balanced-module suite", balanced_modules);
  run("AC2", "rank detection", rank_detection);
  run("AC3", "F-frame exactness", f_frame_exactness);
  run("AC4", "design-matrix oracle equivalence", design_matrix_oracle);
  run("AC5", "allocation consistency and minimality", allocation_minimality);
  run("AC6", "closed-loop hover", closed_loop_hover);
  run("AC7", "experiment 1 helix", experiment1);
  run("AC8", "experiment 2 rectangle with pitch hold", experiment2);
  run("AC9", "experiment 3 fixed-attitude rectangle", experiment3);
  run("AC10", "integrator order", integrator_order);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
