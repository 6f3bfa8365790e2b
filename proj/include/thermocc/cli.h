// Copyright 2026 The thermocc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef THERMOCC_CLI_H_
#define THERMOCC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace thermocc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

// Entry point of the `thermocc` tool. `args` excludes the program name.
// Subcommands: synth, split, detect, eval, occupancy, pipeline.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace thermocc

#endif  // THERMOCC_CLI_H_
