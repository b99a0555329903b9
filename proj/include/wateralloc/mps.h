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

// Free-format MPS, so a lowering can be checked with an outside solver.
// Integer columns sit between MARKER lines and always carry both bounds.
// The objective offset goes on the objective row's RHS, negated.

#ifndef WATERALLOC_MPS_H_
#define WATERALLOC_MPS_H_

#include <string>
#include <string_view>

#include "wateralloc/lp.h"

namespace wateralloc {

std::string to_mps(const LinearProgram& lp);

// Reads what to_mps writes (plus FR/MI/PL/BV/FX bounds and ranges-free
// files). Throws ParseError.
LinearProgram parse_mps(std::string_view text);

}  // namespace wateralloc

#endif  // WATERALLOC_MPS_H_
