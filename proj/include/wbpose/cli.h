// Copyright 2026 The wbpose Authors.
//
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

#ifndef WBPOSE_CLI_H_
#define WBPOSE_CLI_H_

#include <string>
#include <vector>

namespace wbpose {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Unqualified --out paths resolve against this directory when it is set.
inline constexpr const char* kOutDirEnv = "WBPOSE_OUT_DIR";

int RunCli(int argc, const char* const* argv);
// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args);

}  // namespace wbpose

#endif  // WBPOSE_CLI_H_
