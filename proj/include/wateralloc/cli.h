// Copyright 2026 The wateralloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The wateralloc command line: solve, pareto, sweep and validate.
//
// Exit status: 0 success, 1 usage, 2 validation, parse or I/O failure,
// 3 solver failure.

#ifndef WATERALLOC_CLI_H_
#define WATERALLOC_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace wateralloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

// Default output directory when --out is absent.
inline constexpr char kOutDirEnv[] = "WATERALLOC_OUT_DIR";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace wateralloc

#endif  // WATERALLOC_CLI_H_
