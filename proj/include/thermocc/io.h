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
#ifndef THERMOCC_IO_H_
#define THERMOCC_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace thermocc {

// Whole-file helpers; failures raise IoError carrying the path.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);
void EnsureDirectory(const std::filesystem::path& dir);

}  // namespace thermocc

#endif  // THERMOCC_IO_H_
