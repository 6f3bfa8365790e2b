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
#ifndef THERMOCC_DETECT_H_
#define THERMOCC_DETECT_H_

#include <array>
#include <string>
#include <vector>

#include "thermocc/annot.h"
#include "thermocc/frame.h"

namespace thermocc {

// Knots a < b < c < d of a trapezoidal membership: 0 outside (a, d), 1 on
// [b, c], linear in between.
using Trapezoid = std::array<double, 4>;

double TrapezoidMembership(double x, const Trapezoid& knots);

struct DetectorConfig {
  double warm_threshold = 30.0;  // pixels at or above this (C) are candidates
  double t_warm = 28.0;          // mean temperature scoring zero
  double t_face = 34.0;          // mean temperature scoring one
  Trapezoid area{0.005, 0.02, 0.25, 0.60};  // fraction of image area
  Trapezoid aspect{0.6, 0.8, 1.6, 2.2};     // bounding box h / w
  double nms_iou = 0.5;

  // Throws ConfigError on violated invariants.
  void Validate() const;

  // Keys mirror the fields: warm_threshold, t_warm, t_face, min_area_frac,
  // lo_area_frac, hi_area_frac, max_area_frac, aspect_trapezoid (4 numbers),
  // nms_iou. Missing keys keep their defaults; unknown keys are rejected.
  static DetectorConfig FromJson(const std::string& text);
  std::string ToJson() const;
};

// A 4-connected component of warm pixels.
struct Blob {
  std::vector<int> pixels;  // row-major indices, ascending
  PixelBox box;             // tight, in pixel-edge coordinates
  int area = 0;
  double mean_temp = 0;     // C
  double aspect = 0;        // box height / width
};

// Raster-order labeling of pixels with T >= warm_threshold.
std::vector<Blob> FindBlobs(const ThermalFrame& frame, double warm_threshold);

// f_temp * f_area * f_aspect, each in [0, 1].
double ScoreBlob(const Blob& blob, const DetectorConfig& cfg, int image_area);

// Threshold -> components -> score -> drop zero scores -> NMS. Output is in
// descending confidence, ties by the box's top edge then left edge.
std::vector<Detection> DetectBlobs(const ThermalFrame& frame,
                                   const DetectorConfig& cfg);

// Confidence ranking shared by NMS and the detector output.
bool RanksBefore(const Detection& a, const Detection& b);

// Greedy suppression: keeps the best remaining detection, drops every other
// with IoU >= iou_thresh against it, repeats. Output follows RanksBefore.
std::vector<Detection> Nms(std::vector<Detection> dets, double iou_thresh);

// Keeps detections with confidence >= tau, preserving order.
std::vector<Detection> ThresholdFilter(const std::vector<Detection>& dets,
                                       double tau);

}  // namespace thermocc

#endif  // THERMOCC_DETECT_H_
