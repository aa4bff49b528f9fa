#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "fixtures.hpp"

using namespace hmodquad;
using namespace hmodquad::cli;

namespace {

std::string fixture(const std::string& name) {
  return std::string(HMODQUAD_CONFIG_DIR) + "/" + name;
}

std::vector<std::string> fixture_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(HMODQUAD_CONFIG_DIR)) {
    if (e.path().extension() == ".yaml") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

const char* kMinimal = R"(modules:
  - name: solo
    grid: [0, 0]
)";

}  // namespace

TEST_CASE("minimal config applies defaults") {
  const auto c = parse_config(kMinimal);
  REQUIRE(c.modules.size() == 1);
  CHECK(c.modules[0].name == "solo");
  CHECK(c.modules[0].mass_kg == 0.135);
  CHECK(c.gains == GainsConfig{});
  CHECK(c.sim == SimConfig{});
  CHECK(c.trajectory.type == TrajectoryType::Hover);
}

TEST_CASE("module_defaults fill unspecified fields") {
  const auto c = parse_config(R"(module_defaults:
  mass_kg: 0.2
  beta_deg: 5
modules:
  - {name: a, grid: [0, 0]}
  - {name: b, grid: [1, 0], beta_deg: -5}
)");
  CHECK(c.modules[0].mass_kg == 0.2);
  CHECK(c.modules[0].beta_deg == 5);
  CHECK(c.modules[1].beta_deg == -5);
}

TEST_CASE("grid collision names both modules") {
  try {
    parse_config(R"(modules:
  - {name: left, grid: [0, 0]}
  - {name: right, grid: [0, 0]}
)");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'left'") != std::string::npos);
    CHECK(msg.find("'right'") != std::string::npos);
    CHECK(e.line() == 3);
  }
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_config("modules:\n  - name: a\n    grid: [0, 0\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() > 0);
    CHECK(e.column() > 0);
    CHECK(std::string(e.what()).find("syntax error") != std::string::npos);
  }
}

TEST_CASE("unknown keys and bad values are rejected with a location") {
  try {
    parse_config(std::string(kMinimal) + "sim:\n  dt: 0.001\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("unknown key 'dt'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("modules:\n  - {grid: [0, 0], mass_kg: -1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("modules:\n  - {grid: [0, 0], beta_deg: 95}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("modules:\n  - {grid: [0, 0], kf: abc}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("modules: []\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(""), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "trajectory: {type: spiral}\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(std::string(kMinimal) + "trajectory: {type: hover, radius_m: 1}\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "gains: {K_R: [1, 2]}\n"), ConfigError);
}

TEST_CASE("experiment 3 fixture") {
  const auto c = load_config(fixture("experiment3_rectangle.yaml"));
  REQUIRE(c.modules.size() == 4);
  std::vector<std::pair<double, double>> tilts;
  for (const auto& m : c.modules) tilts.emplace_back(m.alpha_deg, m.beta_deg);
  CHECK(tilts[0] == std::pair{0.0, 30.0});
  CHECK(tilts[1] == std::pair{0.0, -30.0});
  CHECK(tilts[2] == std::pair{30.0, 0.0});
  CHECK(tilts[3] == std::pair{-30.0, 0.0});
  CHECK(c.trajectory.type == TrajectoryType::RectangleFixedAttitude);
}

TEST_CASE("parse, serialize, parse round-trips") {
  for (const auto& path : fixture_files()) {
    CAPTURE(path);
    const auto a = load_config(path);
    const auto b = parse_config(serialize_config(a));
    CHECK(a == b);
    CHECK(serialize_config(b) == serialize_config(a));
  }
  auto c = parse_config(kMinimal);
  c.modules[0].alpha_deg = 0.1;
  c.modules[0].inertia_kgm2 = std::array<double, 9>{1e-4, 0, 0, 0, 2e-4, 0, 0, 0, 3.0000000000000001e-4};
  c.modules[0].propeller_tilts_deg =
      std::array<std::array<double, 2>, 4>{{{1, 2}, {3, 4}, {5, 6}, {7, 8.123456789012345}}};
  c.gains.K_R = {1.0 / 3.0, 2, 3};
  c.sim.initial_offset_m = {0.1, -0.2, 1e-17};
  c.trajectory.type = TrajectoryType::Helix;
  c.trajectory.yaw_rate_dps = 360.0 / 14.0;
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("check reports rank and F-frame") {
  std::ostringstream flat, exp1, exp2;
  CHECK(run_check(load_config(fixture("flat_hover.yaml")), flat) == kExitOk);
  CHECK(flat.str().find("rank 4, F-frame = identity") != std::string::npos);
  CHECK(run_check(load_config(fixture("experiment1_helix.yaml")), exp1) == kExitOk);
  CHECK(exp1.str().find("rank 4, F-frame = Rot(y, 10°)") != std::string::npos);
  CHECK(run_check(load_config(fixture("experiment2_rectangle_pitch0.yaml")), exp2) == kExitOk);
  CHECK(exp2.str().find("rank 5") != std::string::npos);
}

TEST_CASE("check fails on an unbalanced module") {
  const auto c = parse_config(R"(modules:
  - name: bent
    grid: [0, 0]
    propeller_tilts_deg: [[11.459155902616464, 0], [0, 0], [0, 0], [0, 0]]
)");
  std::ostringstream out;
  CHECK(run_check(c, out) == kExitValidation);
  CHECK(out.str().find("UNBALANCED") != std::string::npos);
}

TEST_CASE("every fixture passes check") {
  for (const auto& path : fixture_files()) {
    CAPTURE(path);
    std::ostringstream out;
    CHECK(run_check(load_config(path), out) == kExitOk);
  }
}

TEST_CASE("describe_rotation") {
  CHECK(describe_rotation(Matrix3<double>::Identity()) == "identity");
  CHECK(describe_rotation(rot_axis_angle(Axis::Z, -0.5)) == "Rot(z, -28.6479°)");
  CHECK(describe_rotation(rot_axis_angle(Axis::X, std::numbers::pi)) == "Rot(x, 180°)");
  const auto general = describe_rotation(exp_map(Vector3<double>(0.1, 0.2, 0.0)));
  CHECK(general.rfind("Rot([", 0) == 0);
}

TEST_CASE("ellipsoid report and polygon") {
  std::ostringstream report, csv;
  const auto flat = load_config(fixture("flat_hover.yaml"));
  CHECK(run_ellipsoid(flat, report, &csv) == kExitOk);
  const auto e = actuation_ellipsoid(build_structure(flat));
  CHECK(e.singular_values(0) > 0);
  CHECK(e.singular_values(1) < 1e-12);
  CHECK(csv.str().rfind("x,z\n", 0) == 0);

  // Plus/minus thirty pair: elongated along e3 in the xz-projection.
  const auto pair = build_structure(load_config(fixture("experiment2_rectangle_pitch0.yaml")));
  double xr = 0, zr = 0;
  for (const auto& p : ellipsoid_xz_polygon(pair)) {
    xr = std::max(xr, std::abs(p[0]));
    zr = std::max(zr, std::abs(p[1]));
  }
  CHECK(zr > xr);
  CHECK(zr == doctest::Approx(std::sqrt(8.0) * std::cos(std::numbers::pi / 6)).epsilon(1e-3));

  const auto asym = build_structure(load_config(fixture("asymmetric_pair.yaml")));
  const auto ea = actuation_ellipsoid(asym);
  CHECK(std::abs(ea.axes.col(0).dot(Vector3<double>::UnitZ())) < 0.99);
  std::ostringstream asym_report;
  run_ellipsoid(load_config(fixture("asymmetric_pair.yaml")), asym_report, nullptr);
  CHECK(asym_report.str().find("Rot(y, 15°)") != std::string::npos);
}

TEST_CASE("simulate: CSV header and determinism") {
  auto c = load_config(fixture("experiment2_rectangle_pitch_m5.yaml"));
  c.sim.duration_s = 0.5;
  std::ostringstream a, b, report;
  CHECK(run_simulate(c, report, &a) == kExitOk);
  run_simulate(c, report, &b);
  CHECK(a.str() == b.str());
  const std::string header = a.str().substr(0, a.str().find('\n'));
  CHECK(header == "t,x,y,z,x_d,y_d,z_d,yaw,pitch,roll,e_r,u1,u2,u3,u4,u5,u6,u7,u8,saturated");
  std::istringstream rows(a.str());
  std::string line;
  long count = 0;
  while (std::getline(rows, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 19);
    ++count;
  }
  CHECK(count == 502);
}

TEST_CASE("simulate: flat hover settles below a millimetre") {
  const auto s = run_simulation(load_config(fixture("flat_hover.yaml")), nullptr);
  CHECK(s.rms_position_error < 1e-3);
  CHECK(s.steps == 10001);
}

TEST_CASE("simulate: experiment 2 holds the commanded pitch") {
  const auto s = run_simulation(load_config(fixture("experiment2_rectangle_pitch_m5.yaml")), nullptr);
  CHECK(std::abs(s.mean_pitch_deg + 5) < 0.5);
}

TEST_CASE("simulate: experiment 3 stays level") {
  const auto s = run_simulation(load_config(fixture("experiment3_rectangle.yaml")), nullptr);
  CHECK(s.max_abs_roll_deg < 0.5);
  CHECK(s.max_abs_pitch_deg < 0.5);
}

TEST_CASE("simulate: runtime failure reports the step") {
  auto c = parse_config(kMinimal);
  c.sim.dt_s = 1e160;  // g dt^2 / 2 overflows on the first step
  c.sim.duration_s = 1e160;
  std::ostringstream report;
  CHECK(run_simulate(c, report, nullptr) == kExitRuntime);
  CHECK(report.str().find("failed at step 0") != std::string::npos);
  CHECK(report.str().find("non-finite") != std::string::npos);
}
