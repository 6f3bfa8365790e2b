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
#ifndef THERMOCC_MANIFEST_H_
#define THERMOCC_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace thermocc {

// One JSON-lines manifest entry:
//   {"frame": path, "labels": path-or-null, "occupied": bool, "ts": int}
// Paths are stored resolved; on disk they are relative to the manifest file.
struct ManifestRecord {
  std::filesystem::path frame;
  std::optional<std::filesystem::path> labels;
  bool occupied = false;
  std::int64_t ts = 0;

  friend bool operator==(const ManifestRecord&,
                         const ManifestRecord&) = default;
};

using Manifest = std::vector<ManifestRecord>;

// Parses manifest text; relative paths resolve against `base_dir`.
Manifest ParseManifest(const std::string& text,
                       const std::filesystem::path& base_dir);
Manifest ReadManifest(const std::filesystem::path& path);

// Serializes with paths relative to `base_dir`.
std::string SerializeManifest(const Manifest& manifest,
                              const std::filesystem::path& base_dir);
void WriteManifest(const std::filesystem::path& path,
                   const Manifest& manifest);

// Prediction file for a frame: <preds_dir>/<frame stem>.txt
std::filesystem::path PredictionPathFor(const ManifestRecord& record,
                                        const std::filesystem::path& preds_dir);

}  // namespace thermocc

#endif  // THERMOCC_MANIFEST_H_
