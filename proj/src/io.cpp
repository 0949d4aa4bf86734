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

#include "dualrope/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dualrope/errors.hpp"
#include "json.hpp"

namespace dualrope::io {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const char* constraint_name(LengthConstraint c) {
  switch (c) {
    case LengthConstraint::kInactive: return "inactive";
    case LengthConstraint::kLower: return "lower";
    case LengthConstraint::kUpper: return "upper";
    case LengthConstraint::kPinned: return "pinned";
  }
  return "?";
}

void put(std::ostringstream& os, double v) { os << fmt_double(v); }

void put3(std::ostringstream& os, const Eigen::Vector3d& v) {
  os << fmt_double(v.x()) << ',' << fmt_double(v.y()) << ',' << fmt_double(v.z());
}

ordered_json vec_json(const Eigen::Vector3d& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

const char* kind_name(TrajectorySpec::Kind k) {
  switch (k) {
    case TrajectorySpec::Kind::kStraight: return "straight";
    case TrajectorySpec::Kind::kCircular: return "circular";
    case TrajectorySpec::Kind::kWaypoints: return "waypoints";
    case TrajectorySpec::Kind::kHover: return "hover";
  }
  return "?";
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string plan_csv(const PlannedTrajectory& plan) {
  std::ostringstream os;
  os << "t_s,hook_x_m,hook_y_m,hook_z_m,r1_x_m,r1_y_m,r1_z_m,r2_x_m,r2_y_m,r2_z_m,"
        "yaw1_rad,yaw2_rad,a_ref_per_m,b_ref,d_ref_m,d_unlimited_m,psi_ref_rad,w_gr,"
        "litter_distance_m\n";
  for (const auto& s : plan.steps) {
    put(os, s.t);
    os << ',';
    put3(os, s.hook);
    os << ',';
    put3(os, s.robot1);
    os << ',';
    put3(os, s.robot2);
    for (double v : {s.yaw1, s.yaw2, s.a, s.b, s.d, s.d_unlimited, s.psi, s.w_gr, s.litter_distance}) {
      os << ',';
      put(os, v);
    }
    os << '\n';
  }
  return os.str();
}

std::string plan_metadata_json(const PlannedTrajectory& plan, const ScenarioConfig& cfg) {
  const auto& b = plan.stats.bounds;
  ordered_json j;
  j["scenario"] = cfg.name;
  j["steps"] = plan.steps.size();
  j["dt_s"] = plan.dt;
  j["d_min_m"] = cfg.planner.d_min;
  j["d_max"] = {{"by_height_m", b.by_height},
                {"by_roll_m", b.by_roll},
                {"d_max_m", b.d_max},
                {"height_bisection_iterations", b.height_iterations},
                {"roll_bisection_iterations", b.roll_iterations},
                {"binding", b.by_height <= b.by_roll ? "height" : "roll"}};
  j["solver"] = {{"grid_points", kPlannerGridPoints},
                 {"tolerance_m", kPlannerTolerance},
                 {"objective_evaluations", plan.stats.objective_evaluations},
                 {"rate_limited_steps", plan.stats.rate_limited_steps},
                 {"max_length_residual_m", plan.stats.max_length_residual}};
  double d_peak = 0.0, t_peak = 0.0;
  for (const auto& s : plan.steps) {
    if (s.d > d_peak) {
      d_peak = s.d;
      t_peak = s.t;
    }
  }
  j["d_ref_peak"] = {{"d_m", d_peak}, {"t_s", t_peak}};
  j["weights"] = {{"w", cfg.planner.w}, {"k_gr_per_m", cfg.planner.k_gr}, {"k_pos_m", cfg.planner.k_pos}};
  return j.dump(2) + "\n";
}

std::string log_csv(const ScenarioRunLog& log) {
  std::ostringstream os;
  os << "t_s,phase,hook_ref_x_m,hook_ref_y_m,hook_ref_z_m,hook_x_m,hook_y_m,hook_z_m,"
        "a_true,b_true,psi_true,a_est,b_est,psi_est,a_ref,b_ref,psi_ref,est_valid,est_stale,frame,"
        "r1_x_m,r1_y_m,r1_z_m,r2_x_m,r2_y_m,r2_z_m,cmd1_x_m,cmd1_y_m,cmd1_z_m,cmd2_x_m,cmd2_y_m,"
        "cmd2_z_m,corr1_x_m,corr1_y_m,corr1_z_m,corr2_x_m,corr2_y_m,corr2_z_m,vrel_x_mps,"
        "vrel_y_mps,vrel_z_mps,litter_x_m,litter_y_m,litter_z_m,d_ref_m,d_true_m\n";
  for (const auto& r : log.rows) {
    put(os, r.t);
    os << ',' << r.phase;
    for (const Eigen::Vector3d* v : {&r.hook_ref, &r.hook_true, &r.s_true, &r.s_est, &r.s_ref}) {
      os << ',';
      put3(os, *v);
    }
    os << ',' << int(r.estimate_valid) << ',' << int(r.estimate_stale) << ',' << int(r.frame);
    for (const Eigen::Vector3d* v : {&r.robot1, &r.robot2, &r.command1, &r.command2, &r.correction1,
                                     &r.correction2, &r.v_rel, &r.litter}) {
      os << ',';
      put3(os, *v);
    }
    os << ',';
    put(os, r.d_ref);
    os << ',';
    put(os, r.d_true);
    os << '\n';
  }
  return os.str();
}

std::string summary_json(const ScenarioRunLog& log, const ScenarioConfig& cfg) {
  const auto& s = log.summary;
  ordered_json j;
  j["scenario"] = cfg.name;
  j["seed"] = cfg.seed;
  j["trajectory"] = kind_name(cfg.trajectory.kind);
  j["steps"] = log.rows.size();
  j["frames"] = s.frames;
  j["stale_frames"] = s.stale_frames;
  ordered_json g;
  g["passed"] = s.grasp.passed;
  g["success"] = s.grasp.success;
  if (s.grasp.passed) {
    g["margin_m"] = s.grasp.margin;
    g["time_s"] = s.grasp.time;
    g["lateral_offset_m"] = s.grasp.lateral_offset;
    g["hook_height_m"] = s.grasp.hook_height;
    g["d_hook_m"] = s.grasp.d_hook;
  } else {
    g["error"] = s.grasp_error;
  }
  j["grasp"] = g;
  j["hook_rmse_cruise_m"] = s.hook_rmse_cruise;
  j["hook_rmse_m"] = s.hook_rmse;
  j["shape_error_cruise"] = s.shape_error_cruise;
  j["max_correction_sum_m"] = s.max_correction_sum;
  j["litter_initial_m"] = vec_json(s.litter_initial);
  if (!log.rows.empty()) j["litter_final_m"] = vec_json(log.rows.back().litter);
  return j.dump(2) + "\n";
}

std::string frame_text(double t, const RopePointCloud& cloud) {
  std::ostringstream os;
  os << "kind,t_s,x_m,y_m,z_m\n";
  auto record = [&](const char* kind, const Vec3& p) {
    os << kind << ',' << fmt_double(t) << ',';
    put3(os, p);
    os << '\n';
  };
  record("A1", cloud.attach1);
  record("A2", cloud.attach2);
  for (const auto& p : cloud.points) record("point", p);
  return os.str();
}

RecordedFrame parse_frame(const std::string& text) {
  RecordedFrame frame;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have1 = false, have2 = false, have_t = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("kind", 0) == 0) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw ConfigError("frame record needs 5 fields", line_no);
    double v[4];
    for (int i = 0; i < 4; ++i) {
      std::size_t used = 0;
      try {
        v[i] = std::stod(cells[static_cast<std::size_t>(i) + 1], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[static_cast<std::size_t>(i) + 1].size())
        throw ConfigError("frame record has a malformed number", line_no);
    }
    if (!have_t) {
      frame.t = v[0];
      have_t = true;
    }
    const Vec3 p(v[1], v[2], v[3]);
    if (cells[0] == "point") {
      frame.cloud.points.push_back(p);
    } else if (cells[0] == "A1") {
      frame.cloud.attach1 = p;
      have1 = true;
    } else if (cells[0] == "A2") {
      frame.cloud.attach2 = p;
      have2 = true;
    } else {
      throw ConfigError("unknown frame record kind '" + cells[0] + "'", line_no);
    }
  }
  if (!have1 || !have2) throw ConfigError("frame lacks A1/A2 attachment records");
  return frame;
}

std::string frame_file_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06llu.csv", static_cast<unsigned long long>(index));
  return buf;
}

std::vector<std::string> list_frame_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("frames directory '" + dir + "' does not exist");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("frame_", 0) == 0 && entry.path().extension() == ".csv")
      files.push_back(entry.path().string());
  }
  if (files.empty()) throw ConfigError("frames directory '" + dir + "' holds no frame files");
  std::sort(files.begin(), files.end());
  return files;
}

std::string estimates_header() {
  return "frame,t_s,a_p,b_p,psi_p,c_p,phi_p,a_raw,b_raw,psi_raw,var_a,var_b,var_psi,y_end_m,"
         "z_end_m,inliers,constraint,stale,valid\n";
}

std::string estimate_row(std::uint64_t index, double t, const EstimatedShape& est) {
  std::ostringstream os;
  os << index << ',';
  put(os, t);
  for (double v : {est.shape.a, est.shape.b, est.shape.psi, est.shape.c, est.shape.phi}) {
    os << ',';
    put(os, v);
  }
  os << ',';
  put3(os, est.raw);
  os << ',';
  put3(os, est.variance);
  os << ',';
  put(os, est.y_end);
  os << ',';
  put(os, est.z_end);
  os << ',' << est.inliers << ',' << constraint_name(est.constraint) << ',' << int(est.stale) << ','
     << int(est.valid) << '\n';
  return os.str();
}

std::string ablation_csv(const AblationResult& result) {
  std::ostringstream os;
  os << "weight,successes,failures,rate\n";
  for (const auto& r : result.table) {
    os << fmt_double(r.weight) << ',' << r.successes << ',' << r.failures << ',' << fmt_double(r.rate)
       << '\n';
  }
  return os.str();
}

std::string ablation_text(const AblationResult& result) {
  std::ostringstream os;
  char buf[128];
  os << "weight  successes  failures   rate\n";
  for (const auto& r : result.table) {
    std::snprintf(buf, sizeof buf, "%6.2f  %9d  %8d  %5.1f%%\n", r.weight, r.successes, r.failures,
                  100.0 * r.rate);
    os << buf;
  }
  return os.str();
}

std::string ablation_runs_csv(const AblationResult& result) {
  std::ostringstream os;
  os << "weight,seed,passed,success,margin_m,lateral_offset_m,hook_height_m,d_hook_m,error\n";
  for (const auto& r : result.runs) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    os << fmt_double(r.weight) << ',' << r.seed << ',' << int(r.grasp.passed) << ','
       << int(r.grasp.success) << ',' << fmt_double(r.grasp.margin) << ','
       << fmt_double(r.grasp.lateral_offset) << ',' << fmt_double(r.grasp.hook_height) << ','
       << fmt_double(r.grasp.d_hook) << ',' << err << '\n';
  }
  return os.str();
}

}  // namespace dualrope::io
