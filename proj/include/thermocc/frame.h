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
#ifndef THERMOCC_FRAME_H_
#define THERMOCC_FRAME_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thermocc/manifest.h"

namespace thermocc {

inline constexpr int kDefaultFrameWidth = 128;
inline constexpr int kDefaultFrameHeight = 96;
inline constexpr double kDefaultFramePeriodSeconds = 10.0;

// Pixel samples are absolute temperature in centi-kelvin.
inline constexpr int kCentiKelvinAtZeroCelsius = 27315;

inline double CentiKelvinToCelsius(std::uint16_t v) {
  return (static_cast<int>(v) - kCentiKelvinAtZeroCelsius) / 100.0;
}

// Nearest centi-kelvin sample, saturating to the 16-bit range.
std::uint16_t CelsiusToCentiKelvin(double celsius);

// A radiometric frame. Immutable once constructed.
class ThermalFrame {
 public:
  ThermalFrame(int width, int height, std::vector<std::uint16_t> temps,
               std::int64_t timestamp);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t timestamp() const { return timestamp_; }
  const std::vector<std::uint16_t>& temps() const { return temps_; }

  std::uint16_t raw(int x, int y) const { return temps_[y * width_ + x]; }
  double celsius(int x, int y) const { return CentiKelvinToCelsius(raw(x, y)); }
  int area() const { return width_ * height_; }

  friend bool operator==(const ThermalFrame&, const ThermalFrame&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint16_t> temps_;
  std::int64_t timestamp_;
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Normalization window in degrees Celsius; lo < hi.
struct TempRange {
  double lo = 15.0;
  double hi = 40.0;

  void Validate() const;
};

struct FrameSequence {
  std::vector<ThermalFrame> frames;
  double nominal_period = kDefaultFramePeriodSeconds;
};

// Header fields of an encoded frame, available without decoding the samples.
struct FrameHeader {
  int width = 0;
  int height = 0;
  std::int64_t timestamp = 0;
  std::size_t data_offset = 0;
};

// Canonical frame file layout (big-endian samples):
//
//   P5\n# ts=<epoch seconds>\n<width> <height>\n65535\n<width*height*2 bytes>
//
// Exactly one comment line sits between the magic and the dimensions. The
// decoder accepts only this layout, so encode/decode are mutual inverses.
FrameHeader DecodeFrameHeader(std::string_view bytes);
ThermalFrame DecodeFrame(std::string_view bytes);
std::string EncodeFrame(const ThermalFrame& frame);

// pixel = round(255 * clamp((T - lo) / (hi - lo), 0, 1)), halves away from
// zero.
GrayImage Normalize(const ThermalFrame& frame, const TempRange& range);

// Per-frame min-max stretch. Opt-in only; amplifies noise on empty scenes.
GrayImage NormalizeMinMax(const ThermalFrame& frame);

// 8-bit P5 preview of a normalized image.
std::string EncodeGrayPgm(const GrayImage& image);

// Decodes every record's frame, sorts by timestamp and rejects duplicates.
// The nominal period is the median timestamp step (10 s for a single frame).
FrameSequence LoadSequence(const std::vector<ManifestRecord>& records);

// Median of successive timestamp differences; `fallback` when < 2 frames.
double EstimatePeriod(const std::vector<std::int64_t>& timestamps,
                      double fallback = kDefaultFramePeriodSeconds);

}  // namespace thermocc

#endif  // THERMOCC_FRAME_H_
