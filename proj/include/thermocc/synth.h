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
#ifndef THERMOCC_SYNTH_H_
#define THERMOCC_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermocc/annot.h"
#include "thermocc/frame.h"
#include "thermocc/manifest.h"
#include "thermocc/metrics.h"

namespace thermocc {

enum class Orientation { kFrontal, kSide, kDown };

const char* OrientationName(Orientation o);
Orientation ParseOrientation(const std::string& name);

// Visible-extent scaling applied to the head ellipse per orientation: a side
// view narrows it, a downward view flattens it.
inline constexpr double kSideWidthScale = 0.45;
inline constexpr double kDownHeightScale = 0.5;

// Fraction of the head/background delta lost between the ellipse center and
// its rim. Small enough that the whole visible face clears the detector's
// warm threshold.
inline constexpr double kHeadRampDrop = 0.05;

struct HeadSpec {
  double cx = 0.5;  // fractions of width / height
  double cy = 0.5;
  double rx = 0.12;
  double ry = 0.16;
  double peak_temp = 34.0;
  double occlusion_frac = 0.0;  // [0, 1); masked from the bottom rows up
  Orientation orientation = Orientation::kFrontal;
};

struct SceneSpec {
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  std::int64_t timestamp = 0;
  double background_temp = 22.0;
  double noise_sigma = 0.3;
  std::optional<HeadSpec> head;
};

struct Scene {
  ThermalFrame frame;
  std::vector<GroundTruthBox> gts;
};

// Noiseless scene temperature (C) at pixel (x, y), sampled at its center.
// Drives GenerateScene and lets tests inspect the visible head region.
std::vector<double> SceneTemperatures(const SceneSpec& spec);

// Background plus seeded Gaussian noise; an occupied scene adds an elliptical
// head ramping to peak_temp at its center, with the occluded share of its
// pixels reset to background. Ground truth is the tight box of the visible
// head pixels. Throws SpecError when the spec is invalid or the head has no
// pixel inside the frame.
Scene GenerateScene(const SceneSpec& spec, std::uint64_t seed);

struct Scenario {
  Orientation orientation = Orientation::kFrontal;
  double occlusion = 0.0;
  double weight = 1.0;
};

struct DatasetSpec {
  std::int64_t frames = 100;
  double occupied_fraction = 3.75 / 4.75;
  std::uint64_t seed = 0;
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  std::int64_t start_ts = 1700000000;
  std::int64_t period = 10;
  double background_temp = 22.0;
  double noise_sigma = 0.3;
  double peak_temp = 34.0;
  // Mix over occupied frames; weights sum to 1.
  std::vector<Scenario> scenarios{{Orientation::kFrontal, 0.0, 1.0}};

  void Validate() const;
  // Keys mirror the fields; "scenarios" is a list of
  // {"orientation": "frontal"|"side"|"down", "occlusion": f, "weight": w}.
  static DatasetSpec FromJson(const std::string& text);
  std::string ToJson() const;
};

struct SyntheticFrame {
  Scene scene;
  bool occupied = false;
  std::optional<Scenario> scenario;
};

// round(frames * occupied_fraction), halves away from zero.
std::int64_t OccupiedCount(const DatasetSpec& spec);

// Occupied and vacant frames arranged in alternating runs at `period`
// cadence; scenario counts follow the weights by cumulative rounding.
// Deterministic per seed; frames are generated on up to `threads` workers.
std::vector<SyntheticFrame> SynthesizeDataset(const DatasetSpec& spec,
                                              unsigned threads = 1);

// Writes frames/frame_NNNNNN.pgm, labels/frame_NNNNNN.txt (blank when
// unoccupied) and manifest.jsonl under out_dir. Returns the manifest.
Manifest WriteDataset(const DatasetSpec& spec,
                      const std::filesystem::path& out_dir,
                      unsigned threads = 1);

inline constexpr std::size_t kOracleMaxPredictions = 8;
inline constexpr std::size_t kOracleMaxGroundTruths = 5;

// Test oracle for greedy matching: repeatedly selects the best unvisited
// prediction by linear scan and recomputes every IoU from raw coordinates.
// Shares no code with the metrics module. OracleScaleError beyond 8
// predictions or 5 ground truths.
MatchResult OracleMatch(const std::vector<Detection>& preds,
                        const std::vector<GroundTruthBox>& gts,
                        double iou_thresh, int width, int height);

}  // namespace thermocc

#endif  // THERMOCC_SYNTH_H_
