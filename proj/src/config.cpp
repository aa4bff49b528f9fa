#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hmodquad::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string located(const std::string& message, int line, int column) {
  if (line <= 0) return message;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& message) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ConfigError(message);
  throw ConfigError(message, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& where) {
  require_map(node, where);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

double to_double(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(n, field + " must be a number");
  double v;
  try {
    v = n.as<double>();
  } catch (const YAML::BadConversion&) {
    fail(n, field + " must be a number, got '" + n.Scalar() + "'");
  }
  if (!std::isfinite(v)) fail(n, field + " must be finite");
  return v;
}

void read(const YAML::Node& map, const char* key, const std::string& where, double& out) {
  if (const YAML::Node n = map[key]) out = to_double(n, where + "." + key);
}

void read(const YAML::Node& map, const char* key, const std::string& where, int& out) {
  const YAML::Node n = map[key];
  if (!n) return;
  const std::string field = where + "." + key;
  if (!n.IsScalar()) fail(n, field + " must be an integer");
  try {
    out = n.as<int>();
  } catch (const YAML::BadConversion&) {
    fail(n, field + " must be an integer, got '" + n.Scalar() + "'");
  }
}

void read(const YAML::Node& map, const char* key, const std::string& where, bool& out) {
  const YAML::Node n = map[key];
  if (!n) return;
  const std::string field = where + "." + key;
  if (!n.IsScalar()) fail(n, field + " must be true or false");
  try {
    out = n.as<bool>();
  } catch (const YAML::BadConversion&) {
    fail(n, field + " must be true or false, got '" + n.Scalar() + "'");
  }
}

void read(const YAML::Node& map, const char* key, const std::string& where, std::string& out) {
  const YAML::Node n = map[key];
  if (!n) return;
  if (!n.IsScalar()) fail(n, where + "." + key + " must be a string");
  out = n.Scalar();
}

template <std::size_t N>
std::array<double, N> to_array(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence() || n.size() != N) {
    fail(n, field + " must be a list of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = to_double(n[i], field);
  return out;
}

template <std::size_t N>
void read(const YAML::Node& map, const char* key, const std::string& where,
          std::array<double, N>& out) {
  if (const YAML::Node n = map[key]) out = to_array<N>(n, where + "." + key);
}

// Gains accept a scalar (applied to all three axes) or a list of three.
void read_gain(const YAML::Node& map, const char* key, std::array<double, 3>& out) {
  const YAML::Node n = map[key];
  if (!n) return;
  const std::string field = std::string("gains.") + key;
  if (n.IsScalar()) {
    const double v = to_double(n, field);
    out = {v, v, v};
  } else {
    out = to_array<3>(n, field);
  }
  for (double v : out) {
    if (!(v > 0)) fail(n, field + " entries must be positive");
  }
}

void require_positive(const YAML::Node& map, const char* key, const std::string& where,
                      double value) {
  if (!(value > 0)) {
    const YAML::Node n = map[key];
    const std::string msg = where + "." + key + " must be positive";
    if (n) fail(n, msg);
    throw ConfigError(msg);
  }
}

const std::set<std::string> kModuleFieldKeys = {
    "mass_kg", "length_m", "height_m", "alpha_deg", "beta_deg", "kf", "km",
    "fmax_n",  "inertia_kgm2", "propeller_tilts_deg"};

void read_module_fields(const YAML::Node& node, const std::string& where, ModuleConfig& m) {
  read(node, "mass_kg", where, m.mass_kg);
  read(node, "length_m", where, m.length_m);
  read(node, "height_m", where, m.height_m);
  read(node, "alpha_deg", where, m.alpha_deg);
  read(node, "beta_deg", where, m.beta_deg);
  read(node, "kf", where, m.kf);
  read(node, "km", where, m.km);
  read(node, "fmax_n", where, m.fmax_n);
  if (const YAML::Node n = node["inertia_kgm2"]) {
    const std::string field = where + ".inertia_kgm2";
    if (!n.IsSequence() || n.size() != 3) fail(n, field + " must be a 3x3 list of rows");
    std::array<double, 9> I{};
    for (std::size_t r = 0; r < 3; ++r) {
      const auto row = to_array<3>(n[r], field);
      for (std::size_t c = 0; c < 3; ++c) I[3 * r + c] = row[c];
    }
    m.inertia_kgm2 = I;
  }
  if (const YAML::Node n = node["propeller_tilts_deg"]) {
    const std::string field = where + ".propeller_tilts_deg";
    if (!n.IsSequence() || n.size() != 4) fail(n, field + " must list four [alpha, beta] pairs");
    std::array<std::array<double, 2>, 4> tilts{};
    for (std::size_t j = 0; j < 4; ++j) tilts[j] = to_array<2>(n[j], field);
    m.propeller_tilts_deg = tilts;
  }
}

void validate_module_fields(const YAML::Node& node, const std::string& where,
                            const ModuleConfig& m) {
  require_positive(node, "mass_kg", where, m.mass_kg);
  require_positive(node, "length_m", where, m.length_m);
  require_positive(node, "height_m", where, m.height_m);
  require_positive(node, "kf", where, m.kf);
  require_positive(node, "fmax_n", where, m.fmax_n);
  if (!(m.km >= 0)) fail(node["km"] ? node["km"] : node, where + ".km must be non-negative");
  for (const char* key : {"alpha_deg", "beta_deg"}) {
    const double v = std::string(key) == "alpha_deg" ? m.alpha_deg : m.beta_deg;
    if (std::abs(v) > 90) {
      fail(node[key] ? node[key] : node, where + "." + key + " must lie in [-90, 90]");
    }
  }
}

ModuleConfig parse_module(const YAML::Node& node, std::size_t index, const ModuleConfig& defaults) {
  const std::string where = "modules[" + std::to_string(index) + "]";
  std::set<std::string> keys = kModuleFieldKeys;
  keys.insert({"name", "grid", "yaw_quarter_turns"});
  check_keys(node, keys, where);

  ModuleConfig m = defaults;
  m.name = "m" + std::to_string(index + 1);
  read(node, "name", where, m.name);
  read_module_fields(node, where, m);
  const YAML::Node grid = node["grid"];
  if (!grid) fail(node, where + ".grid is required");
  if (!grid.IsSequence() || grid.size() != 2) fail(grid, where + ".grid must be [col, row]");
  for (std::size_t i = 0; i < 2; ++i) {
    try {
      m.grid[i] = grid[i].as<int>();
    } catch (const YAML::BadConversion&) {
      fail(grid[i], where + ".grid entries must be integers");
    }
  }
  read(node, "yaw_quarter_turns", where, m.yaw_quarter_turns);
  if (m.yaw_quarter_turns < 0 || m.yaw_quarter_turns > 3) {
    fail(node["yaw_quarter_turns"], where + ".yaw_quarter_turns must be 0, 1, 2 or 3");
  }
  validate_module_fields(node, where, m);
  return m;
}

TrajectoryType parse_trajectory_type(const YAML::Node& n) {
  const std::string s = n.Scalar();
  if (s == "hover") return TrajectoryType::Hover;
  if (s == "helix") return TrajectoryType::Helix;
  if (s == "rectangle") return TrajectoryType::Rectangle;
  if (s == "rectangle_fixed_attitude") return TrajectoryType::RectangleFixedAttitude;
  fail(n, "trajectory.type must be hover, helix, rectangle or rectangle_fixed_attitude, got '" +
              s + "'");
}

TrajectoryConfig parse_trajectory(const YAML::Node& node) {
  const std::string where = "trajectory";
  require_map(node, where);
  TrajectoryConfig t;
  const YAML::Node type = node["type"];
  if (!type) fail(node, "trajectory.type is required");
  if (!type.IsScalar()) fail(type, "trajectory.type must be a string");
  t.type = parse_trajectory_type(type);

  switch (t.type) {
    case TrajectoryType::Hover:
      check_keys(node, {"type", "position_m", "yaw_deg"}, where);
      read(node, "position_m", where, t.position_m);
      read(node, "yaw_deg", where, t.yaw_deg);
      break;
    case TrajectoryType::Helix:
      check_keys(node, {"type", "centre_m", "radius_m", "z_low_m", "z_high_m", "period_s",
                        "yaw_deg", "yaw_rate_dps"},
                 where);
      read(node, "centre_m", where, t.centre_m);
      read(node, "radius_m", where, t.radius_m);
      read(node, "z_low_m", where, t.z_low_m);
      read(node, "z_high_m", where, t.z_high_m);
      read(node, "period_s", where, t.period_s);
      read(node, "yaw_deg", where, t.yaw_deg);
      read(node, "yaw_rate_dps", where, t.yaw_rate_dps);
      require_positive(node, "radius_m", where, t.radius_m);
      require_positive(node, "period_s", where, t.period_s);
      if (!(t.z_high_m >= t.z_low_m)) fail(node, "trajectory.z_high_m must be >= z_low_m");
      break;
    case TrajectoryType::Rectangle:
    case TrajectoryType::RectangleFixedAttitude: {
      std::set<std::string> keys = {"type",      "centre_m",  "length_m", "width_m",
                                    "altitude_m", "speed_mps", "blend_s",  "clockwise"};
      if (t.type == TrajectoryType::Rectangle) keys.insert("pitch_hold_deg");
      check_keys(node, keys, where);
      read(node, "centre_m", where, t.rect_centre_m);
      read(node, "length_m", where, t.length_m);
      read(node, "width_m", where, t.width_m);
      read(node, "altitude_m", where, t.altitude_m);
      read(node, "speed_mps", where, t.speed_mps);
      read(node, "blend_s", where, t.blend_s);
      read(node, "clockwise", where, t.clockwise);
      read(node, "pitch_hold_deg", where, t.pitch_hold_deg);
      require_positive(node, "length_m", where, t.length_m);
      require_positive(node, "width_m", where, t.width_m);
      require_positive(node, "speed_mps", where, t.speed_mps);
      require_positive(node, "blend_s", where, t.blend_s);
      if (std::abs(t.pitch_hold_deg) >= 90) {
        fail(node["pitch_hold_deg"], "trajectory.pitch_hold_deg must lie in (-90, 90)");
      }
      try {
        validate_rectangle(RectangleParams<double>{t.rect_centre_m[0], t.rect_centre_m[1],
                                                   t.length_m, t.width_m, t.altitude_m,
                                                   t.speed_mps, t.blend_s, t.clockwise});
      } catch (const DomainError& e) {
        fail(node, std::string("trajectory: ") + e.what());
      }
      break;
    }
  }
  return t;
}

SimConfig parse_sim(const YAML::Node& node) {
  const std::string where = "sim";
  check_keys(node, {"dt_s", "duration_s", "gravity_mps2", "initial_offset_m", "initial_tilt_deg",
                    "transient_s"},
             where);
  SimConfig s;
  read(node, "dt_s", where, s.dt_s);
  read(node, "duration_s", where, s.duration_s);
  read(node, "gravity_mps2", where, s.gravity_mps2);
  read(node, "initial_offset_m", where, s.initial_offset_m);
  read(node, "initial_tilt_deg", where, s.initial_tilt_deg);
  read(node, "transient_s", where, s.transient_s);
  require_positive(node, "dt_s", where, s.dt_s);
  if (!(s.duration_s >= s.dt_s)) fail(node, "sim.duration_s must be at least dt_s");
  if (!(s.gravity_mps2 >= 0)) fail(node["gravity_mps2"], "sim.gravity_mps2 must be non-negative");
  if (!(s.transient_s >= 0)) fail(node["transient_s"], "sim.transient_s must be non-negative");
  return s;
}

GainsConfig parse_gains(const YAML::Node& node) {
  check_keys(node, {"K_r", "K_v", "K_R", "K_omega"}, "gains");
  GainsConfig g;
  read_gain(node, "K_r", g.K_r);
  read_gain(node, "K_v", g.K_v);
  read_gain(node, "K_R", g.K_R);
  read_gain(node, "K_omega", g.K_omega);
  return g;
}

void emit_array(YAML::Emitter& out, const auto& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& v : values) out << v;
  out << YAML::EndSeq;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, int line, int column)
    : Error(located(message, line, column)), line_(line), column_(column) {}

const char* trajectory_type_name(TrajectoryType type) {
  switch (type) {
    case TrajectoryType::Hover:
      return "hover";
    case TrajectoryType::Helix:
      return "helix";
    case TrajectoryType::Rectangle:
      return "rectangle";
    case TrajectoryType::RectangleFixedAttitude:
      return "rectangle_fixed_attitude";
  }
  return "?";
}

StructureConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("syntax error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("config is empty");
  check_keys(root, {"module_defaults", "modules", "gains", "sim", "trajectory"}, "config");

  StructureConfig config;
  ModuleConfig defaults;
  if (const YAML::Node d = root["module_defaults"]) {
    check_keys(d, kModuleFieldKeys, "module_defaults");
    read_module_fields(d, "module_defaults", defaults);
  }
  const YAML::Node modules = root["modules"];
  if (!modules) throw ConfigError("config: 'modules' is required");
  if (!modules.IsSequence() || modules.size() == 0) {
    fail(modules, "modules must be a non-empty list");
  }
  for (std::size_t i = 0; i < modules.size(); ++i) {
    config.modules.push_back(parse_module(modules[i], i, defaults));
  }
  for (std::size_t i = 0; i < config.modules.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (config.modules[k].name == config.modules[i].name) {
        fail(modules[i], "duplicate module name '" + config.modules[i].name + "'");
      }
      if (config.modules[k].grid == config.modules[i].grid) {
        fail(modules[i]["grid"], "modules '" + config.modules[k].name + "' and '" +
                                     config.modules[i].name + "' both occupy grid cell (" +
                                     std::to_string(config.modules[i].grid[0]) + ", " +
                                     std::to_string(config.modules[i].grid[1]) + ")");
      }
    }
  }
  if (const YAML::Node g = root["gains"]) config.gains = parse_gains(g);
  if (const YAML::Node s = root["sim"]) config.sim = parse_sim(s);
  if (const YAML::Node t = root["trajectory"]) config.trajectory = parse_trajectory(t);

  try {
    (void)build_structure(config);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("structure: ") + e.what());
  }
  return config;
}

StructureConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const StructureConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "modules" << YAML::Value << YAML::BeginSeq;
  for (const auto& m : config.modules) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << m.name;
    out << YAML::Key << "grid" << YAML::Value;
    emit_array(out, m.grid);
    out << YAML::Key << "yaw_quarter_turns" << YAML::Value << m.yaw_quarter_turns;
    out << YAML::Key << "mass_kg" << YAML::Value << m.mass_kg;
    out << YAML::Key << "length_m" << YAML::Value << m.length_m;
    out << YAML::Key << "height_m" << YAML::Value << m.height_m;
    out << YAML::Key << "alpha_deg" << YAML::Value << m.alpha_deg;
    out << YAML::Key << "beta_deg" << YAML::Value << m.beta_deg;
    out << YAML::Key << "kf" << YAML::Value << m.kf;
    out << YAML::Key << "km" << YAML::Value << m.km;
    out << YAML::Key << "fmax_n" << YAML::Value << m.fmax_n;
    if (m.inertia_kgm2) {
      const auto& I = *m.inertia_kgm2;
      out << YAML::Key << "inertia_kgm2" << YAML::Value << YAML::BeginSeq;
      for (std::size_t r = 0; r < 3; ++r) emit_array(out, std::array{I[3 * r], I[3 * r + 1], I[3 * r + 2]});
      out << YAML::EndSeq;
    }
    if (m.propeller_tilts_deg) {
      out << YAML::Key << "propeller_tilts_deg" << YAML::Value << YAML::BeginSeq;
      for (const auto& ab : *m.propeller_tilts_deg) emit_array(out, ab);
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  const auto& g = config.gains;
  out << YAML::Key << "gains" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "K_r" << YAML::Value;
  emit_array(out, g.K_r);
  out << YAML::Key << "K_v" << YAML::Value;
  emit_array(out, g.K_v);
  out << YAML::Key << "K_R" << YAML::Value;
  emit_array(out, g.K_R);
  out << YAML::Key << "K_omega" << YAML::Value;
  emit_array(out, g.K_omega);
  out << YAML::EndMap;

  const auto& s = config.sim;
  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt_s" << YAML::Value << s.dt_s;
  out << YAML::Key << "duration_s" << YAML::Value << s.duration_s;
  out << YAML::Key << "gravity_mps2" << YAML::Value << s.gravity_mps2;
  out << YAML::Key << "initial_offset_m" << YAML::Value;
  emit_array(out, s.initial_offset_m);
  out << YAML::Key << "initial_tilt_deg" << YAML::Value;
  emit_array(out, s.initial_tilt_deg);
  out << YAML::Key << "transient_s" << YAML::Value << s.transient_s;
  out << YAML::EndMap;

  const auto& t = config.trajectory;
  out << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value << trajectory_type_name(t.type);
  switch (t.type) {
    case TrajectoryType::Hover:
      out << YAML::Key << "position_m" << YAML::Value;
      emit_array(out, t.position_m);
      out << YAML::Key << "yaw_deg" << YAML::Value << t.yaw_deg;
      break;
    case TrajectoryType::Helix:
      out << YAML::Key << "centre_m" << YAML::Value;
      emit_array(out, t.centre_m);
      out << YAML::Key << "radius_m" << YAML::Value << t.radius_m;
      out << YAML::Key << "z_low_m" << YAML::Value << t.z_low_m;
      out << YAML::Key << "z_high_m" << YAML::Value << t.z_high_m;
      out << YAML::Key << "period_s" << YAML::Value << t.period_s;
      out << YAML::Key << "yaw_deg" << YAML::Value << t.yaw_deg;
      out << YAML::Key << "yaw_rate_dps" << YAML::Value << t.yaw_rate_dps;
      break;
    case TrajectoryType::Rectangle:
    case TrajectoryType::RectangleFixedAttitude:
      out << YAML::Key << "centre_m" << YAML::Value;
      emit_array(out, t.rect_centre_m);
      out << YAML::Key << "length_m" << YAML::Value << t.length_m;
      out << YAML::Key << "width_m" << YAML::Value << t.width_m;
      out << YAML::Key << "altitude_m" << YAML::Value << t.altitude_m;
      out << YAML::Key << "speed_mps" << YAML::Value << t.speed_mps;
      out << YAML::Key << "blend_s" << YAML::Value << t.blend_s;
      out << YAML::Key << "clockwise" << YAML::Value << t.clockwise;
      if (t.type == TrajectoryType::Rectangle) {
        out << YAML::Key << "pitch_hold_deg" << YAML::Value << t.pitch_hold_deg;
      }
      break;
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ModuleSpec<double> build_module(const ModuleConfig& m) {
  ModuleSpec<double> module = build_r_module(m.mass_kg, m.length_m, m.height_m, m.alpha_deg * kDeg,
                                             m.beta_deg * kDeg, m.kf, m.km, m.fmax_n);
  if (m.inertia_kgm2) {
    module.inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(
        m.inertia_kgm2->data());
  }
  if (m.propeller_tilts_deg) {
    for (std::size_t j = 0; j < 4; ++j) {
      const auto& ab = (*m.propeller_tilts_deg)[j];
      module.propellers[j].orientation = propeller_orientation(ab[0] * kDeg, ab[1] * kDeg);
    }
  }
  validate_module(module);
  return module;
}

StructureModel<double> build_structure(const StructureConfig& config) {
  std::vector<ModulePlacement<double>> placements;
  placements.reserve(config.modules.size());
  for (const auto& m : config.modules) {
    try {
      placements.push_back({build_module(m), m.grid[0], m.grid[1], m.yaw_quarter_turns});
    } catch (const Error& e) {
      throw ConfigError("module '" + m.name + "': " + e.what());
    }
  }
  return assemble(std::move(placements));
}

Gains<double> build_gains(const GainsConfig& g) {
  Gains<double> out;
  out.K_r = Vector3<double>(g.K_r.data());
  out.K_v = Vector3<double>(g.K_v.data());
  out.K_R = Vector3<double>(g.K_R.data());
  out.K_omega = Vector3<double>(g.K_omega.data());
  out.validate();
  return out;
}

Trajectory<double> build_trajectory(const TrajectoryConfig& t) {
  switch (t.type) {
    case TrajectoryType::Hover: {
      const Vector3<double> r0(t.position_m.data());
      const double yaw = t.yaw_deg * kDeg;
      return [r0, yaw](double time) { return hover(r0, yaw, time); };
    }
    case TrajectoryType::Helix: {
      HelixParams<double> p;
      p.centre_x = t.centre_m[0];
      p.centre_y = t.centre_m[1];
      p.radius = t.radius_m;
      p.z_low = t.z_low_m;
      p.z_high = t.z_high_m;
      p.period = t.period_s;
      p.yaw0 = t.yaw_deg * kDeg;
      p.yaw_rate = t.yaw_rate_dps * kDeg;
      return [p](double time) { return helix(p, time); };
    }
    case TrajectoryType::Rectangle:
    case TrajectoryType::RectangleFixedAttitude: {
      const RectangleParams<double> p{t.rect_centre_m[0], t.rect_centre_m[1], t.length_m,
                                      t.width_m,          t.altitude_m,       t.speed_mps,
                                      t.blend_s,          t.clockwise};
      validate_rectangle(p);
      if (t.type == TrajectoryType::RectangleFixedAttitude) {
        return [p](double time) { return rectangle_fixed_attitude(p, time); };
      }
      const double pitch = t.pitch_hold_deg * kDeg;
      return [p, pitch](double time) { return rectangle(p, time, pitch); };
    }
  }
  throw ConfigError("unknown trajectory type");
}

SimParams<double> build_sim_params(const SimConfig& sim) {
  SimParams<double> p;
  p.dt = sim.dt_s;
  p.duration = sim.duration_s;
  p.gravity = sim.gravity_mps2;
  return p;
}

RigidState<double> initial_state(const StructureConfig& config,
                                 const StructureModel<double>& structure,
                                 const Trajectory<double>& trajectory) {
  const auto sample = trajectory(0.0);
  const auto& tilt = config.sim.initial_tilt_deg;
  RigidState<double> x0;
  x0.r = sample.r_d + Vector3<double>(config.sim.initial_offset_m.data());
  x0.v = sample.v_d;
  x0.R_WS = reference_attitude(structure, sample, config.sim.gravity_mps2) *
            rot_axis_angle(Axis::Z, tilt[2] * kDeg) * rot_axis_angle(Axis::Y, tilt[1] * kDeg) *
            rot_axis_angle(Axis::X, tilt[0] * kDeg);
  return x0;
}

}  // namespace hmodquad::cli
