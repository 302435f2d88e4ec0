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

#ifndef WBPOSE_IO_H_
#define WBPOSE_IO_H_

#include <filesystem>
#include <string>

namespace wbpose {

inline constexpr int kSchemaVersion = 1;

std::string ReadFile(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it into place, so a failed write
// never leaves a partial file at `path`.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

// Shortest round-trip decimal representation.
std::string FormatDouble(double value);

}  // namespace wbpose

#endif  // WBPOSE_IO_H_
