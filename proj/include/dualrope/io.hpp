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

// CSV / JSON writers and the sensor-frame file format.
//
// Frame files hold one record per line, "kind,t_s,x_m,y_m,z_m" with kind one
// of point, A1, A2. Numbers are printed with 17 significant digits so a
// frame read back is bit-identical to the one written.

#pragma once

#include <string>
#include <vector>

#include "dualrope/sim.hpp"

namespace dualrope::io {

/// 17 significant digits ("%.17g"); parses back to the same double.
std::string fmt_double(double v);

void write_text(const std::string& path, const std::string& text);

std::string plan_csv(const PlannedTrajectory& plan);
std::string plan_metadata_json(const PlannedTrajectory& plan, const ScenarioConfig& cfg);

std::string log_csv(const ScenarioRunLog& log);
std::string summary_json(const ScenarioRunLog& log, const ScenarioConfig& cfg);

std::string frame_text(double t, const RopePointCloud& cloud);
/// Parses a frame file's contents. ConfigError with the line on malformed
/// input or missing attachment records.
RecordedFrame parse_frame(const std::string& text);
std::string frame_file_name(std::uint64_t index);

/// Frame files of a directory in index order. ConfigError when none exist.
std::vector<std::string> list_frame_files(const std::string& dir);

std::string estimates_header();
std::string estimate_row(std::uint64_t index, double t, const EstimatedShape& est);

std::string ablation_csv(const AblationResult& result);
std::string ablation_text(const AblationResult& result);
std::string ablation_runs_csv(const AblationResult& result);

}  // namespace dualrope::io
