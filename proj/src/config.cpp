// Copyright 2026 The dualrope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualrope/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "dualrope/errors.hpp"

namespace dualrope {

namespace {

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

template <class T>
const char* type_name();
template <>
const char* type_name<double>() { return "a number"; }
template <>
const char* type_name<int>() { return "an integer"; }
template <>
const char* type_name<bool>() { return "true or false"; }
template <>
const char* type_name<std::uint64_t>() { return "a non-negative integer"; }
template <>
const char* type_name<std::string>() { return "a string"; }

class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError(label() + " must be a mapping", line_of(node_));
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    out = convert<T>(node_[key], key);
  }

  void get_vec(const std::string& key, Eigen::Vector3d& out) {
    seen_.insert(key);
    if (!has(key)) return;
    out = vector3(node_[key], key);
  }

  template <class T>
  void require(const std::string& key, T& out) {
    if (!has(key)) throw ConfigError("missing required field '" + name(key) + "'", line_of(node_));
    get(key, out);
  }

  void require_vec(const std::string& key, Eigen::Vector3d& out) {
    if (!has(key)) throw ConfigError("missing required field '" + name(key) + "'", line_of(node_));
    get_vec(key, out);
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    return Section(has(key) ? node_[key] : YAML::Node(), name(key));
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? node_[key] : YAML::Node();
  }

  /// Rejects keys that were never asked for.
  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError("unknown field '" + name(key) + "'", line_of(kv.first));
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <class T>
  T convert(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar())
      throw ConfigError("field '" + name(key) + "' must be " + type_name<T>(), line_of(n));
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("field '" + name(key) + "' must be " + type_name<T>(), line_of(n));
    }
  }

  Eigen::Vector3d vector3(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence() || n.size() != 3)
      throw ConfigError("field '" + name(key) + "' must be a list of 3 numbers", line_of(n));
    Eigen::Vector3d v;
    for (std::size_t i = 0; i < 3; ++i) v(static_cast<int>(i)) = convert<double>(n[i], key);
    return v;
  }

 private:
  std::string label() const { return path_.empty() ? "document" : "'" + path_ + "'"; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

TrajectorySpec::Kind parse_kind(const std::string& s, int line) {
  if (s == "straight") return TrajectorySpec::Kind::kStraight;
  if (s == "circular") return TrajectorySpec::Kind::kCircular;
  if (s == "waypoints") return TrajectorySpec::Kind::kWaypoints;
  if (s == "hover") return TrajectorySpec::Kind::kHover;
  throw ConfigError("trajectory.type must be straight, circular, waypoints or hover", line);
}

ScenarioConfig from_yaml(const YAML::Node& doc) {
  ScenarioConfig cfg;
  Section top(doc, "");
  top.get("name", cfg.name);
  top.get("seed", cfg.seed);
  top.get("control_rate_hz", cfg.control_rate);
  top.get("contact_threshold_m", cfg.contact_threshold);
  top.get("servo_enabled", cfg.servo_enabled);
  top.get_vec("drone2_bias_m", cfg.drone2_bias);

  {
    Section s = top.child("rope");
    s.get("length_m", cfg.rope.length);
    s.get("mass_kg", cfg.rope.mass);
    s.get("hook_length_m", cfg.rope.hook_length);
    s.get("attach_offset_m", cfg.rope.attach_offset);
    s.get("gravity_mps2", cfg.rope.gravity);
    s.finish();
  }
  {
    Section s = top.child("planner");
    s.get("w", cfg.planner.w);
    s.get("k_gr_per_m", cfg.planner.k_gr);
    s.get("k_pos_m", cfg.planner.k_pos);
    s.get("d_min_m", cfg.planner.d_min);
    s.get("h_min_m", cfg.planner.h_min);
    s.get("phi_max_rad", cfg.planner.phi_max);
    s.get("robot_mass_kg", cfg.planner.robot_mass);
    s.get("v_sep_max_mps", cfg.planner.v_sep_max);
    s.finish();
  }
  {
    if (!top.has("litter")) throw ConfigError("missing required field 'litter.position_m'");
    Section s = top.child("litter");
    s.require_vec("position_m", cfg.litter.position);
    s.get("lateral_jitter_m", cfg.litter.lateral_jitter);
    Section dw = s.child("downwash");
    dw.get("enabled", cfg.litter.downwash.enabled);
    dw.get("gain_mps", cfg.litter.downwash.gain);
    dw.get("decay_length_m", cfg.litter.downwash.decay_length);
    dw.finish();
    s.finish();
    cfg.planner.litter = cfg.litter.position;
  }
  {
    if (!top.has("trajectory")) throw ConfigError("missing required field 'trajectory.type'");
    Section s = top.child("trajectory");
    std::string type;
    s.require("type", type);
    cfg.trajectory.kind = parse_kind(type, line_of(doc["trajectory"]["type"]));
    s.get_vec("start_m", cfg.trajectory.start);
    s.get_vec("center_m", cfg.trajectory.center);
    s.get("speed_mps", cfg.trajectory.speed);
    s.get("ascent_rate_mps", cfg.trajectory.ascent_rate);
    s.get("ascent_duration_s", cfg.trajectory.ascent_duration);
    s.get("duration_s", cfg.trajectory.duration);
    const YAML::Node wps = s.raw("waypoints");
    if (wps && !wps.IsNull()) {
      if (!wps.IsSequence()) throw ConfigError("'trajectory.waypoints' must be a list", line_of(wps));
      for (std::size_t i = 0; i < wps.size(); ++i) {
        Section w(wps[i], "trajectory.waypoints[" + std::to_string(i) + "]");
        Waypoint wp;
        w.require("t_s", wp.t);
        w.require_vec("position_m", wp.position);
        w.finish();
        cfg.trajectory.waypoints.push_back(wp);
      }
    }
    if (cfg.trajectory.kind == TrajectorySpec::Kind::kWaypoints && cfg.trajectory.waypoints.size() < 2)
      throw ConfigError("trajectory.waypoints needs at least two entries", line_of(doc["trajectory"]));
    if ((cfg.trajectory.kind == TrajectorySpec::Kind::kStraight ||
         cfg.trajectory.kind == TrajectorySpec::Kind::kCircular ||
         cfg.trajectory.kind == TrajectorySpec::Kind::kHover) &&
        !s.has("start_m"))
      throw ConfigError("missing required field 'trajectory.start_m'", line_of(doc["trajectory"]));
    if (cfg.trajectory.kind == TrajectorySpec::Kind::kCircular && !s.has("center_m"))
      throw ConfigError("missing required field 'trajectory.center_m'", line_of(doc["trajectory"]));
    s.finish();
  }
  {
    Section s = top.child("servo");
    s.get("k_c_per_s", cfg.servo.k_c);
    s.get("k_i_per_s", cfg.servo.k_i);
    s.get("window_samples", cfg.servo.n_w);
    s.get("v_corr_max_mps", cfg.servo.v_corr_max);
    s.get("fd_step_m", cfg.servo.fd_step);
    s.get("max_condition", cfg.servo.max_condition);
    s.get("flip_split", cfg.servo.flip_split);
    s.finish();
  }
  {
    Section s = top.child("estimation");
    s.get("voxel_size_m", cfg.estimation.voxel_size);
    s.get("ransac_iterations", cfg.estimation.ransac_iterations);
    s.get("ransac_inlier_tol_m", cfg.estimation.ransac_inlier_tol);
    s.get("w_manual", cfg.estimation.w_manual);
    s.get("w_depth", cfg.estimation.w_depth);
    s.get("w_gps", cfg.estimation.w_gps);
    s.get_vec("process_var", cfg.estimation.process_var);
    s.get_vec("measurement_var", cfg.estimation.measurement_var);
    s.finish();
  }
  {
    Section s = top.child("drone");
    s.get("omega_radps", cfg.drone.omega);
    s.get("zeta", cfg.drone.zeta);
    s.get("v_max_mps", cfg.drone.v_max);
    s.get("a_max_mps2", cfg.drone.a_max);
    s.finish();
  }
  {
    Section s = top.child("sensor");
    s.get("samples_per_frame", cfg.sensor.samples_per_frame);
    s.get("noise_sigma_m", cfg.sensor.noise_sigma);
    s.get("dropout_prob", cfg.sensor.dropout_prob);
    s.get("outlier_count", cfg.sensor.outlier_count);
    s.get("outlier_offset_m", cfg.sensor.outlier_offset);
    s.get("gps_sigma_m", cfg.sensor.gps_sigma);
    s.get("frame_rate_hz", cfg.sensor.frame_rate);
    s.finish();
  }
  top.finish();

  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
  YAML::Node doc;
  try {
    doc = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  if (!doc || doc.IsNull()) throw ConfigError("empty configuration");
  return from_yaml(doc);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace dualrope
