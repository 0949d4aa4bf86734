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

// `dualrope` command line: plan, simulate, estimate, ablate, report.

#pragma once

#include <string>
#include <vector>

namespace dualrope {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTaskFailure = 3;
inline constexpr int kExitNumeric = 4;

/// Runs the CLI; args[0] is the program name. Never throws.
int run_cli(const std::vector<std::string>& args);

const char* version();

}  // namespace dualrope
