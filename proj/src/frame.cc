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
#include "thermocc/frame.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "thermocc/errors.h"
#include "thermocc/io.h"

namespace thermocc {
namespace {

constexpr std::string_view kMagic = "P5\n";
constexpr std::string_view kTsPrefix = "# ts=";
constexpr std::int64_t kMaxPixels = std::int64_t{1} << 28;

// Reads a decimal integer terminated by `stop`, rejecting anything a
// canonical encoder would not emit (signs on positives, leading zeros).
template <typename Int, typename Err>
Int ReadCanonicalInt(std::string_view bytes, std::size_t* pos, char stop,
                     const char* what) {
  const std::size_t end = bytes.find(stop, *pos);
  if (end == std::string_view::npos) {
    throw Err(std::string("unterminated ") + what);
  }
  std::string_view token = bytes.substr(*pos, end - *pos);
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
  const bool canonical =
      !digits.empty() &&
      std::all_of(digits.begin(), digits.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      (digits.size() == 1 || digits.front() != '0') &&
      !(token.front() == '-' && digits == "0");
  Int value{};
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (!canonical || ec != std::errc() || ptr != token.data() + token.size()) {
    throw Err(std::string("malformed ") + what + " '" + std::string(token) +
              "'");
  }
  *pos = end + 1;
  return value;
}

}  // namespace

std::uint16_t CelsiusToCentiKelvin(double celsius) {
  const double v = std::round(celsius * 100.0) + kCentiKelvinAtZeroCelsius;
  return static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
}

ThermalFrame::ThermalFrame(int width, int height,
                           std::vector<std::uint16_t> temps,
                           std::int64_t timestamp)
    : width_(width),
      height_(height),
      temps_(std::move(temps)),
      timestamp_(timestamp) {
  if (width < 1 || height < 1) {
    throw FormatError("frame dimensions must be >= 1, got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  if (temps_.size() != static_cast<std::size_t>(width) * height) {
    throw TruncationError("frame has " + std::to_string(temps_.size()) +
                          " samples, expected " +
                          std::to_string(std::size_t(width) * height));
  }
}

void TempRange::Validate() const {
  if (!(lo < hi)) {
    throw ConfigError("temperature range requires lo < hi");
  }
}

FrameHeader DecodeFrameHeader(std::string_view bytes) {
  if (!bytes.starts_with(kMagic)) {
    throw FormatError("not a binary PGM (expected 'P5' magic)");
  }
  std::size_t pos = kMagic.size();
  if (bytes.substr(pos, kTsPrefix.size()) != kTsPrefix) {
    throw MetadataError("missing '# ts=<epoch-seconds>' comment");
  }
  pos += kTsPrefix.size();

  FrameHeader header;
  header.timestamp =
      ReadCanonicalInt<std::int64_t, MetadataError>(bytes, &pos, '\n', "ts");
  header.width = ReadCanonicalInt<int, FormatError>(bytes, &pos, ' ', "width");
  header.height =
      ReadCanonicalInt<int, FormatError>(bytes, &pos, '\n', "height");
  const int maxval =
      ReadCanonicalInt<int, FormatError>(bytes, &pos, '\n', "maxval");
  if (maxval != 65535) {
    throw FormatError("maxval must be 65535, got " + std::to_string(maxval));
  }
  if (header.width < 1 || header.height < 1 ||
      std::int64_t{header.width} * header.height > kMaxPixels) {
    throw FormatError("unsupported frame dimensions");
  }
  header.data_offset = pos;
  return header;
}

ThermalFrame DecodeFrame(std::string_view bytes) {
  const FrameHeader header = DecodeFrameHeader(bytes);
  const std::size_t count =
      static_cast<std::size_t>(header.width) * header.height;
  const std::size_t available = bytes.size() - header.data_offset;
  if (available != count * 2) {
    throw TruncationError("expected " + std::to_string(count * 2) +
                          " sample bytes, found " + std::to_string(available));
  }
  std::vector<std::uint16_t> temps(count);
  const auto* data =
      reinterpret_cast<const unsigned char*>(bytes.data() + header.data_offset);
  for (std::size_t i = 0; i < count; ++i) {
    temps[i] = static_cast<std::uint16_t>((data[2 * i] << 8) | data[2 * i + 1]);
  }
  return ThermalFrame(header.width, header.height, std::move(temps),
                      header.timestamp);
}

std::string EncodeFrame(const ThermalFrame& frame) {
  std::string out;
  out.reserve(32 + frame.temps().size() * 2);
  out += kMagic;
  out += kTsPrefix;
  out += std::to_string(frame.timestamp());
  out += '\n';
  out += std::to_string(frame.width());
  out += ' ';
  out += std::to_string(frame.height());
  out += "\n65535\n";
  for (std::uint16_t v : frame.temps()) {
    out += static_cast<char>(v >> 8);
    out += static_cast<char>(v & 0xFF);
  }
  return out;
}

GrayImage Normalize(const ThermalFrame& frame, const TempRange& range) {
  range.Validate();
  GrayImage image{frame.width(), frame.height(), {}};
  image.pixels.reserve(frame.temps().size());
  const double span = range.hi - range.lo;
  for (std::uint16_t v : frame.temps()) {
    const double t = std::clamp((CentiKelvinToCelsius(v) - range.lo) / span,
                                0.0, 1.0);
    // std::round rounds halves away from zero.
    image.pixels.push_back(static_cast<std::uint8_t>(std::round(255.0 * t)));
  }
  return image;
}

GrayImage NormalizeMinMax(const ThermalFrame& frame) {
  const auto [lo, hi] =
      std::minmax_element(frame.temps().begin(), frame.temps().end());
  if (*lo == *hi) {
    return GrayImage{frame.width(), frame.height(),
                     std::vector<std::uint8_t>(frame.temps().size(), 0)};
  }
  return Normalize(frame, TempRange{CentiKelvinToCelsius(*lo),
                                    CentiKelvinToCelsius(*hi)});
}

std::string EncodeGrayPgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

double EstimatePeriod(const std::vector<std::int64_t>& timestamps,
                      double fallback) {
  if (timestamps.size() < 2) return fallback;
  std::vector<std::int64_t> steps;
  steps.reserve(timestamps.size() - 1);
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    steps.push_back(timestamps[i] - timestamps[i - 1]);
  }
  const std::size_t mid = steps.size() / 2;
  std::nth_element(steps.begin(), steps.begin() + mid, steps.end());
  if (steps.size() % 2 == 1) return static_cast<double>(steps[mid]);
  const std::int64_t upper = steps[mid];
  const std::int64_t lower = *std::max_element(steps.begin(), steps.begin() + mid);
  return (lower + upper) / 2.0;
}

FrameSequence LoadSequence(const std::vector<ManifestRecord>& records) {
  FrameSequence seq;
  seq.frames.reserve(records.size());
  for (const ManifestRecord& record : records) {
    const std::string bytes = ReadFile(record.frame);
    try {
      seq.frames.push_back(DecodeFrame(bytes));
    } catch (const Error& e) {
      throw IoError(record.frame.string(), e.what());
    }
  }
  std::stable_sort(seq.frames.begin(), seq.frames.end(),
                   [](const ThermalFrame& a, const ThermalFrame& b) {
                     return a.timestamp() < b.timestamp();
                   });
  std::vector<std::int64_t> ts;
  ts.reserve(seq.frames.size());
  for (const ThermalFrame& f : seq.frames) {
    if (!ts.empty() && ts.back() == f.timestamp()) {
      throw SequenceError("duplicate frame timestamp " +
                          std::to_string(f.timestamp()));
    }
    ts.push_back(f.timestamp());
  }
  seq.nominal_period = EstimatePeriod(ts);
  return seq;
}

}  // namespace thermocc
