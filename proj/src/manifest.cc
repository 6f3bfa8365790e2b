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
#include "thermocc/manifest.h"

#include <sstream>

#include "json.hpp"
#include "thermocc/errors.h"
#include "thermocc/io.h"

namespace thermocc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path Resolve(const fs::path& p, const fs::path& base_dir) {
  const fs::path joined = p.is_absolute() ? p : base_dir / p;
  return fs::absolute(joined).lexically_normal();
}

std::string Relativize(const fs::path& p, const fs::path& base_dir) {
  const fs::path base = fs::absolute(base_dir).lexically_normal();
  const fs::path rel = fs::absolute(p).lexically_normal().lexically_relative(base);
  return (rel.empty() ? p : rel).generic_string();
}

}  // namespace

Manifest ParseManifest(const std::string& text, const fs::path& base_dir) {
  Manifest manifest;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("manifest: ") + e.what());
    }
    if (!j.is_object() || !j.contains("frame") || !j["frame"].is_string() ||
        !j.contains("occupied") || !j["occupied"].is_boolean() ||
        !j.contains("ts") || !j["ts"].is_number_integer()) {
      throw ParseError(line_no,
                       "manifest record needs string 'frame', bool "
                       "'occupied' and integer 'ts'");
    }
    ManifestRecord record;
    record.frame = Resolve(j["frame"].get<std::string>(), base_dir);
    if (j.contains("labels") && !j["labels"].is_null()) {
      if (!j["labels"].is_string()) {
        throw ParseError(line_no, "manifest 'labels' must be a path or null");
      }
      record.labels = Resolve(j["labels"].get<std::string>(), base_dir);
    }
    record.occupied = j["occupied"].get<bool>();
    record.ts = j["ts"].get<std::int64_t>();
    manifest.push_back(std::move(record));
  }
  return manifest;
}

Manifest ReadManifest(const fs::path& path) {
  const std::string text = ReadFile(path);
  try {
    return ParseManifest(text, fs::absolute(path).parent_path());
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

std::string SerializeManifest(const Manifest& manifest,
                              const fs::path& base_dir) {
  std::string out;
  for (const ManifestRecord& record : manifest) {
    json j;
    j["frame"] = Relativize(record.frame, base_dir);
    j["labels"] = record.labels ? json(Relativize(*record.labels, base_dir))
                                : json(nullptr);
    j["occupied"] = record.occupied;
    j["ts"] = record.ts;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void WriteManifest(const fs::path& path, const Manifest& manifest) {
  WriteFile(path,
            SerializeManifest(manifest, fs::absolute(path).parent_path()));
}

fs::path PredictionPathFor(const ManifestRecord& record,
                           const fs::path& preds_dir) {
  return preds_dir / (record.frame.stem().string() + ".txt");
}

}  // namespace thermocc
