#ifndef HMODQUAD_CLI_COMMANDS_HPP_
#define HMODQUAD_CLI_COMMANDS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace hmodquad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

// "identity", "Rot(y, 10°)" for coordinate axes, "Rot([ax, ay, az], deg°)" otherwise.
std::string describe_rotation(const Matrix3<double>& R, double tol = 1e-9);

int run_check(const StructureConfig& config, std::ostream& report);

// Closed polygon tracing the boundary of the actuation ellipsoid's projection
// onto the xz-plane of {S}; rows are (x, z).
std::vector<std::array<double, 2>> ellipsoid_xz_polygon(const StructureModel<double>& structure,
                                                        int samples = 72);

int run_ellipsoid(const StructureConfig& config, std::ostream& report, std::ostream* csv);

struct SimulationSummary {
  long steps = 0;
  double rms_position_error = 0;  // after the transient
  double max_position_error = 0;  // after the transient
  double final_attitude_error_deg = 0;
  double saturation_fraction = 0;  // over every step
  double mean_pitch_deg = 0;       // F-frame pitch after the transient
  double max_abs_pitch_deg = 0;
  double max_abs_roll_deg = 0;
  double max_yaw_error_deg = 0;
};

std::vector<std::string> csv_header(const StructureModel<double>& structure);

// Runs the configured closed loop; when csv is non-null every step is written
// as a row under csv_header. Errors propagate as SimulationError.
SimulationSummary run_simulation(const StructureConfig& config, std::ostream* csv);

int run_simulate(const StructureConfig& config, std::ostream& report, std::ostream* csv);

}  // namespace hmodquad::cli

#endif  // HMODQUAD_CLI_COMMANDS_HPP_
