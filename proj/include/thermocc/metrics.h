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
#ifndef THERMOCC_METRICS_H_
#define THERMOCC_METRICS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermocc/annot.h"
#include "thermocc/manifest.h"

namespace thermocc {

inline constexpr int kNumIouThresholds = 10;
inline constexpr int kNumRecallPoints = 101;
inline constexpr double kDefaultOperatingTau = 0.9;

// 0.50, 0.55, ..., 0.95, each computed as an exact hundredth.
std::array<double, kNumIouThresholds> IouThresholds();

// Intersection over union; 0 for disjoint boxes.
double Iou(const PixelBox& a, const PixelBox& b);

struct PredictionMatch {
  std::size_t prediction = 0;         // index into the input predictions
  std::optional<std::size_t> ground_truth;  // index into the input gts
};

struct MatchResult {
  std::vector<PredictionMatch> matches;  // in matching (rank) order
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

// Greedy single-image matching. Predictions are visited by descending
// confidence (ties: top edge, then left edge, then input order); each takes
// the unmatched ground truth of highest IoU (ties: lowest index) if that IoU
// reaches iou_thresh, and is a false positive otherwise.
MatchResult MatchDetections(const std::vector<Detection>& preds,
                            const std::vector<GroundTruthBox>& gts,
                            double iou_thresh, int width, int height);

// precision = tp / (tp + fp), recall = tp / (tp + fn); an empty denominator
// yields 1.
std::pair<double, double> PrecisionRecall(std::int64_t tp, std::int64_t fp,
                                          std::int64_t fn);

// One image's predictions and ground truth.
struct ImageEval {
  std::vector<Detection> preds;
  std::vector<GroundTruthBox> gts;
  int width = 128;
  int height = 96;
};

struct PRPoint {
  double recall = 0;
  double precision = 0;
  std::int64_t tp = 0;  // cumulative at this rank
  std::int64_t fp = 0;
};

struct PRCurve {
  std::vector<PRPoint> points;  // one per prediction rank
  std::int64_t total_gt = 0;
};

// Ranks all predictions dataset-wide (descending confidence; ties by image
// index, then top edge, then left edge) and accumulates the per-image match
// outcome of each. With no ground truth every recall is 0.
PRCurve BuildPrCurve(const std::vector<ImageEval>& images, double iou_thresh);

// 101-point interpolated AP: mean over r in {0, 0.01, ..., 1} of the best
// precision among points with recall >= r (0 when none).
double AveragePrecision(const PRCurve& curve);

struct MapResult {
  double map50 = 0;
  double map50_95 = 0;
  std::array<double, kNumIouThresholds> ap_per_iou{};
};

// Throws Error when the dataset has neither ground truth nor predictions.
MapResult MapRange(const std::vector<ImageEval>& images);

struct EvalCounts {
  std::int64_t images = 0;
  std::int64_t gts = 0;
  std::int64_t preds = 0;      // at or above the operating threshold
  std::int64_t preds_all = 0;  // before thresholding
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

struct EvalReport {
  double precision = 0;
  double recall = 0;
  double map50 = 0;
  double map50_95 = 0;
  std::array<double, kNumIouThresholds> ap_per_iou{};
  EvalCounts counts;
  double operating_tau = kDefaultOperatingTau;
};

// Precision and recall come from detections with confidence >= tau matched
// at IoU 0.50; the mAP figures sweep every prediction regardless of tau.
EvalReport Evaluate(const std::vector<ImageEval>& images, double tau);

// Reads labels for each record and `<preds_dir>/<frame stem>.txt`. A missing
// prediction file means no detections; an unparseable one is an error. Image
// size comes from the frame header.
std::vector<ImageEval> LoadEvalSet(const Manifest& manifest,
                                   const std::filesystem::path& preds_dir);

std::string EvalReportToJson(const EvalReport& report);

}  // namespace thermocc

#endif  // THERMOCC_METRICS_H_
