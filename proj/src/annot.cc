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
#include "thermocc/annot.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "thermocc/errors.h"

namespace thermocc {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    pos = line.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    const std::size_t end = std::min(line.find_first_of(" \t\r", pos), line.size());
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

double ParseReal(std::string_view token, std::size_t line, const char* name) {
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw ParseError(line, std::string("invalid ") + name + " '" +
                               std::string(token) + "'");
  }
  return value;
}

int ParseClass(std::string_view token, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "invalid class id '" + std::string(token) + "'");
  }
  if (value != kFaceClass) {
    throw RangeError(line, "class id " + std::to_string(value) +
                               " (only class 0 is defined)");
  }
  return value;
}

void CheckBox(const NormalizedBox& b, std::size_t line) {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  auto extent = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!unit(b.cx) || !unit(b.cy)) {
    throw RangeError(line, "box center outside [0, 1]");
  }
  if (!extent(b.w) || !extent(b.h)) {
    throw RangeError(line, "box extent outside (0, 1]");
  }
}

// Calls `fn(fields, line_no)` for every non-blank line.
template <typename Fn>
void ForEachLine(std::string_view text, Fn fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto fields = SplitFields(text.substr(pos, end - pos));
    if (!fields.empty()) fn(fields, line_no);
    pos = end + 1;
  }
}

NormalizedBox ParseGeometry(const std::vector<std::string_view>& f,
                            std::size_t line) {
  NormalizedBox box{ParseReal(f[1], line, "cx"), ParseReal(f[2], line, "cy"),
                    ParseReal(f[3], line, "w"), ParseReal(f[4], line, "h")};
  CheckBox(box, line);
  return box;
}

void AppendFixed(std::string* out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), " %.6f", v);
  *out += buf;
}

// Extents must stay positive after rounding to six decimals.
void AppendExtent(std::string* out, double v) {
  AppendFixed(out, std::max(v, 0.000001));
}

void AppendGeometry(std::string* out, int class_id, const NormalizedBox& b) {
  *out += std::to_string(class_id);
  AppendFixed(out, b.cx);
  AppendFixed(out, b.cy);
  AppendExtent(out, b.w);
  AppendExtent(out, b.h);
}

}  // namespace

void NormalizedBox::Validate() const { CheckBox(*this, 0); }

std::vector<GroundTruthBox> ParseLabels(std::string_view text) {
  std::vector<GroundTruthBox> boxes;
  ForEachLine(text, [&](const std::vector<std::string_view>& f,
                        std::size_t line) {
    if (f.size() != 5) {
      throw ParseError(line, "label line needs 5 fields, got " +
                                 std::to_string(f.size()));
    }
    boxes.push_back({ParseClass(f[0], line), ParseGeometry(f, line)});
  });
  return boxes;
}

std::string SerializeLabels(const std::vector<GroundTruthBox>& boxes) {
  std::string out;
  for (const GroundTruthBox& b : boxes) {
    AppendGeometry(&out, b.class_id, b.box);
    out += '\n';
  }
  return out;
}

std::vector<Detection> ParsePredictions(std::string_view text) {
  std::vector<Detection> dets;
  ForEachLine(text, [&](const std::vector<std::string_view>& f,
                        std::size_t line) {
    if (f.size() != 6) {
      throw ParseError(line, "prediction line needs 6 fields, got " +
                                 std::to_string(f.size()));
    }
    Detection d{ParseClass(f[0], line), ParseGeometry(f, line),
                ParseReal(f[5], line, "confidence")};
    if (d.confidence < 0.0 || d.confidence > 1.0) {
      throw RangeError(line, "confidence outside [0, 1]");
    }
    dets.push_back(d);
  });
  return dets;
}

std::string SerializePredictions(const std::vector<Detection>& dets) {
  std::string out;
  for (const Detection& d : dets) {
    AppendGeometry(&out, d.class_id, d.box);
    AppendFixed(&out, d.confidence);
    out += '\n';
  }
  return out;
}

PixelBox ToPixelBox(const NormalizedBox& box, int width, int height) {
  const double w = width;
  const double h = height;
  PixelBox p{std::clamp((box.cx - box.w / 2) * w, 0.0, w),
             std::clamp((box.cy - box.h / 2) * h, 0.0, h),
             std::clamp((box.cx + box.w / 2) * w, 0.0, w),
             std::clamp((box.cy + box.h / 2) * h, 0.0, h)};
  if (!(p.x0 < p.x1) || !(p.y0 < p.y1)) {
    throw DegenerateBoxError("box has zero area after clamping");
  }
  return p;
}

NormalizedBox ToNormalizedBox(const PixelBox& box, int width, int height) {
  return NormalizedBox{(box.x0 + box.x1) / 2 / width,
                       (box.y0 + box.y1) / 2 / height, box.width() / width,
                       box.height() / height};
}

}  // namespace thermocc
