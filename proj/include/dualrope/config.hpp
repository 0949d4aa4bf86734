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

// YAML scenario configuration. Keys carry their unit as a suffix (_m, _mps,
// _rad, ...). Unknown keys, wrong types and missing required fields raise
// ConfigError with the offending line.

#pragma once

#include <cstdint>
#include <string>

#include "dualrope/sim.hpp"

namespace dualrope {

/// Parses and validates a scenario from YAML text.
ScenarioConfig parse_config(const std::string& yaml_text);

/// Reads and parses a file. ConfigError when unreadable.
ScenarioConfig load_config(const std::string& path);

/// Reads a whole file into a string. ConfigError when unreadable.
std::string read_text_file(const std::string& path);

/// 64-bit FNV-1a of the given bytes.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace dualrope
