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
#ifndef THERMOCC_ANNOT_H_
#define THERMOCC_ANNOT_H_

#include <string>
#include <string_view>
#include <vector>

namespace thermocc {

// The only object class in this project.
inline constexpr int kFaceClass = 0;

// YOLO-style box: center and extent as fractions of the image dimensions.
struct NormalizedBox {
  double cx = 0;
  double cy = 0;
  double w = 0;
  double h = 0;

  // Throws RangeError unless 0 <= cx,cy <= 1 and 0 < w,h <= 1.
  void Validate() const;

  friend bool operator==(const NormalizedBox&, const NormalizedBox&) = default;
};

struct GroundTruthBox {
  int class_id = kFaceClass;
  NormalizedBox box;

  friend bool operator==(const GroundTruthBox&,
                         const GroundTruthBox&) = default;
};

struct Detection {
  int class_id = kFaceClass;
  NormalizedBox box;
  double confidence = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Continuous (unrounded) pixel-space box, x0 < x1 and y0 < y1.
struct PixelBox {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

// Label file: one `<class> <cx> <cy> <w> <h>` line per face. Blank text is an
// unoccupied frame. Errors carry the 1-based line number.
std::vector<GroundTruthBox> ParseLabels(std::string_view text);
std::string SerializeLabels(const std::vector<GroundTruthBox>& boxes);

// Prediction file: label line plus a trailing confidence in [0, 1].
std::vector<Detection> ParsePredictions(std::string_view text);
std::string SerializePredictions(const std::vector<Detection>& dets);

// Scales to a width x height image and clamps to its bounds. Throws
// DegenerateBoxError when nothing of positive area remains.
PixelBox ToPixelBox(const NormalizedBox& box, int width, int height);

// Inverse of ToPixelBox for boxes already inside the image.
NormalizedBox ToNormalizedBox(const PixelBox& box, int width, int height);

}  // namespace thermocc

#endif  // THERMOCC_ANNOT_H_
