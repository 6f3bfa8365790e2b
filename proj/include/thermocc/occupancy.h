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
#ifndef THERMOCC_OCCUPANCY_H_
#define THERMOCC_OCCUPANCY_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thermocc/annot.h"
#include "thermocc/frame.h"

namespace thermocc {

struct OccupancyPoint {
  std::int64_t ts = 0;
  bool occupied = false;

  friend bool operator==(const OccupancyPoint&,
                         const OccupancyPoint&) = default;
};

// One point per frame, timestamps strictly increasing.
struct OccupancyTimeline {
  std::vector<OccupancyPoint> points;

  // Throws SequenceError on non-increasing timestamps.
  void Validate() const;
  std::size_t size() const { return points.size(); }
};

// True iff some detection has confidence >= tau.
bool FrameOccupancy(const std::vector<Detection>& dets, double tau);

// Element-wise FrameOccupancy; AlignmentError on length mismatch.
OccupancyTimeline BuildTimeline(
    const std::vector<std::int64_t>& timestamps,
    const std::vector<std::vector<Detection>>& per_frame, double tau);
OccupancyTimeline BuildTimeline(
    const FrameSequence& seq,
    const std::vector<std::vector<Detection>>& per_frame, double tau);

struct OccupancyConfusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  std::int64_t missed_occupied = 0;  // == fn
  double precision = 1.0;
  double recall = 1.0;
};

// Frame-level confusion of detected against actual occupancy.
OccupancyConfusion Compare(const OccupancyTimeline& actual,
                           const OccupancyTimeline& detected);

struct ControlPolicy {
  double on_delay = 0.0;    // seconds of continuous occupancy before on
  double off_hold = 900.0;  // seconds of continuous vacancy before off

  void Validate() const;
  // {"on_delay": s, "off_hold": s}; a null off_hold never switches off.
  static ControlPolicy FromJson(const std::string& text);
};

struct HvacPoint {
  std::int64_t ts = 0;
  bool on = false;

  friend bool operator==(const HvacPoint&, const HvacPoint&) = default;
};

struct HvacSchedule {
  std::vector<HvacPoint> points;
  double span_seconds = 0;
  double on_seconds = 0;
  double on_fraction = 0;
  double runtime_reduction = 0;  // 1 - on_fraction, vs. an always-on baseline
};

// Duration credited to each frame: the step to the next timestamp, and the
// median step for the last frame.
std::vector<double> FrameDurations(const OccupancyTimeline& timeline);

// Duration-weighted share of occupied frames.
double OccupiedFraction(const OccupancyTimeline& timeline);

// Hysteresis controller, initially off. A run's elapsed time is measured from
// the timestamp of its first frame: the HVAC switches on once occupancy has
// held for >= on_delay and off once vacancy has held for >= off_hold.
HvacSchedule SimulateControl(const OccupancyTimeline& detected,
                             const ControlPolicy& policy);

// "ts,actual,detected" rows with 0/1 flags.
std::string TimelineCsv(const OccupancyTimeline& actual,
                        const OccupancyTimeline& detected);
// "ts,hvac_on" rows.
std::string ScheduleCsv(const HvacSchedule& schedule);

std::string ConfusionToJson(const OccupancyConfusion& confusion,
                            const HvacSchedule& schedule);

}  // namespace thermocc

#endif  // THERMOCC_OCCUPANCY_H_
