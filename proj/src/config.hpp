#ifndef HMODQUAD_CLI_CONFIG_HPP_
#define HMODQUAD_CLI_CONFIG_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hmodquad/hmodquad.hpp"

namespace hmodquad::cli {

// Parse or validation failure in a config file. line and column are 1-based;
// zero when the problem is not tied to a location.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ModuleConfig {
  std::string name;
  double mass_kg = 0.135;
  double length_m = 0.12;
  double height_m = 0.06;
  double alpha_deg = 0;
  double beta_deg = 0;
  double kf = kDefaultThrustCoefficient;
  double km = kDefaultDragCoefficient;
  double fmax_n = kDefaultMaxThrust;
  std::array<int, 2> grid{0, 0};
  int yaw_quarter_turns = 0;
  std::optional<std::array<double, 9>> inertia_kgm2;  // row-major, replaces the cuboid model
  // Per-rotor (alpha, beta) overrides; when present the module is no longer
  // an R-module and may be unbalanced.
  std::optional<std::array<std::array<double, 2>, 4>> propeller_tilts_deg;

  bool operator==(const ModuleConfig&) const = default;
};

struct GainsConfig {
  std::array<double, 3> K_r{6, 6, 6};
  std::array<double, 3> K_v{4, 4, 4};
  std::array<double, 3> K_R{100, 100, 100};
  std::array<double, 3> K_omega{20, 20, 20};

  bool operator==(const GainsConfig&) const = default;
};

struct SimConfig {
  double dt_s = 1e-3;
  double duration_s = 10;
  double gravity_mps2 = kGravity;
  std::array<double, 3> initial_offset_m{0, 0, 0};
  std::array<double, 3> initial_tilt_deg{0, 0, 0};  // roll, pitch, yaw about {S}
  double transient_s = 2;

  bool operator==(const SimConfig&) const = default;
};

enum class TrajectoryType { Hover, Helix, Rectangle, RectangleFixedAttitude };

struct TrajectoryConfig {
  TrajectoryType type = TrajectoryType::Hover;
  // hover
  std::array<double, 3> position_m{0, 0, 1};
  double yaw_deg = 0;
  // helix
  std::array<double, 2> centre_m{-0.5, 0};
  double radius_m = 0.45;
  double z_low_m = 0.45;
  double z_high_m = 0.95;
  double period_s = 14;
  double yaw_rate_dps = 360.0 / 14.0;
  // rectangle
  std::array<double, 2> rect_centre_m{0, 0};
  double length_m = 0.8;
  double width_m = 0.6;
  double altitude_m = 0.7;
  double speed_mps = 0.25;
  double blend_s = 0.5;
  bool clockwise = false;
  double pitch_hold_deg = 0;

  bool operator==(const TrajectoryConfig&) const = default;
};

struct StructureConfig {
  std::vector<ModuleConfig> modules;
  GainsConfig gains;
  SimConfig sim;
  TrajectoryConfig trajectory;

  bool operator==(const StructureConfig&) const = default;
};

StructureConfig parse_config(const std::string& text);
StructureConfig load_config(const std::string& path);
std::string serialize_config(const StructureConfig& config);

const char* trajectory_type_name(TrajectoryType type);

ModuleSpec<double> build_module(const ModuleConfig& module);
StructureModel<double> build_structure(const StructureConfig& config);
Gains<double> build_gains(const GainsConfig& gains);
Trajectory<double> build_trajectory(const TrajectoryConfig& trajectory);
SimParams<double> build_sim_params(const SimConfig& sim);

// Reference state at t = 0 displaced by the configured position offset and
// attitude tilt.
RigidState<double> initial_state(const StructureConfig& config,
                                 const StructureModel<double>& structure,
                                 const Trajectory<double>& trajectory);

}  // namespace hmodquad::cli

#endif  // HMODQUAD_CLI_CONFIG_HPP_
