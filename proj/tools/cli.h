// Copyright 2026 The pkpram Authors
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

#ifndef PKPRAM_TOOLS_CLI_H_
#define PKPRAM_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace pkpram::cli {

inline constexpr char kToolVersion[] = "1.0.0";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitVerificationFailed = 2;

// Runs the tool on `args` (without the program name). Machine-readable
// key=value lines go to `out`, the human-readable summary and diagnostics to
// `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace pkpram::cli

#endif  // PKPRAM_TOOLS_CLI_H_
