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
#include "thermocc/occupancy.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json.hpp"
#include "thermocc/errors.h"
#include "thermocc/metrics.h"

namespace thermocc {

void OccupancyTimeline::Validate() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].ts <= points[i - 1].ts) {
      throw SequenceError("timeline timestamps must be strictly increasing");
    }
  }
}

bool FrameOccupancy(const std::vector<Detection>& dets, double tau) {
  return std::any_of(dets.begin(), dets.end(),
                     [tau](const Detection& d) { return d.confidence >= tau; });
}

OccupancyTimeline BuildTimeline(
    const std::vector<std::int64_t>& timestamps,
    const std::vector<std::vector<Detection>>& per_frame, double tau) {
  if (timestamps.size() != per_frame.size()) {
    throw AlignmentError("timeline: " + std::to_string(per_frame.size()) +
                         " detection lists for " +
                         std::to_string(timestamps.size()) + " frames");
  }
  OccupancyTimeline t;
  t.points.reserve(timestamps.size());
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    t.points.push_back({timestamps[i], FrameOccupancy(per_frame[i], tau)});
  }
  t.Validate();
  return t;
}

OccupancyTimeline BuildTimeline(
    const FrameSequence& seq,
    const std::vector<std::vector<Detection>>& per_frame, double tau) {
  std::vector<std::int64_t> ts;
  ts.reserve(seq.frames.size());
  for (const ThermalFrame& f : seq.frames) ts.push_back(f.timestamp());
  return BuildTimeline(ts, per_frame, tau);
}

OccupancyConfusion Compare(const OccupancyTimeline& actual,
                           const OccupancyTimeline& detected) {
  if (actual.size() != detected.size()) {
    throw AlignmentError("compare: timelines differ in length");
  }
  OccupancyConfusion c;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const OccupancyPoint& a = actual.points[i];
    const OccupancyPoint& d = detected.points[i];
    if (a.ts != d.ts) {
      throw AlignmentError("compare: timestamp mismatch at frame " +
                           std::to_string(i));
    }
    if (a.occupied) {
      (d.occupied ? c.tp : c.fn) += 1;
    } else {
      (d.occupied ? c.fp : c.tn) += 1;
    }
  }
  c.missed_occupied = c.fn;
  std::tie(c.precision, c.recall) = PrecisionRecall(c.tp, c.fp, c.fn);
  return c;
}

void ControlPolicy::Validate() const {
  if (!(on_delay >= 0.0) || !(off_hold >= 0.0)) {
    throw ConfigError("policy: on_delay and off_hold must be >= 0");
  }
}

ControlPolicy ControlPolicy::FromJson(const std::string& text) {
  using nlohmann::json;
  ControlPolicy p;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("policy must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "on_delay") {
        p.on_delay = value.get<double>();
      } else if (key == "off_hold") {
        p.off_hold = value.is_null() ? std::numeric_limits<double>::infinity()
                                     : value.get<double>();
      } else {
        throw ConfigError("policy: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
  p.Validate();
  return p;
}

std::vector<double> FrameDurations(const OccupancyTimeline& timeline) {
  const auto& pts = timeline.points;
  std::vector<std::int64_t> ts;
  ts.reserve(pts.size());
  for (const OccupancyPoint& p : pts) ts.push_back(p.ts);
  const double last = EstimatePeriod(ts);
  std::vector<double> dt(pts.size(), last);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    dt[i] = static_cast<double>(pts[i + 1].ts - pts[i].ts);
  }
  return dt;
}

double OccupiedFraction(const OccupancyTimeline& timeline) {
  const std::vector<double> dt = FrameDurations(timeline);
  double occupied = 0;
  double span = 0;
  for (std::size_t i = 0; i < dt.size(); ++i) {
    span += dt[i];
    if (timeline.points[i].occupied) occupied += dt[i];
  }
  return span > 0 ? occupied / span : 0.0;
}

HvacSchedule SimulateControl(const OccupancyTimeline& detected,
                             const ControlPolicy& policy) {
  policy.Validate();
  if (detected.points.empty()) {
    throw AlignmentError("cannot simulate control over an empty timeline");
  }
  detected.Validate();
  const std::vector<double> dt = FrameDurations(detected);

  HvacSchedule s;
  bool on = false;
  std::int64_t run_start = detected.points.front().ts;
  for (std::size_t i = 0; i < detected.size(); ++i) {
    const OccupancyPoint& p = detected.points[i];
    if (i > 0 && p.occupied != detected.points[i - 1].occupied) {
      run_start = p.ts;
    }
    const double elapsed = static_cast<double>(p.ts - run_start);
    if (p.occupied && !on && elapsed >= policy.on_delay) on = true;
    if (!p.occupied && on && elapsed >= policy.off_hold) on = false;
    s.points.push_back({p.ts, on});
    s.span_seconds += dt[i];
    if (on) s.on_seconds += dt[i];
  }
  s.on_fraction = s.span_seconds > 0 ? s.on_seconds / s.span_seconds : 0.0;
  s.runtime_reduction = 1.0 - s.on_fraction;
  return s;
}

std::string TimelineCsv(const OccupancyTimeline& actual,
                        const OccupancyTimeline& detected) {
  if (actual.size() != detected.size()) {
    throw AlignmentError("timeline csv: length mismatch");
  }
  std::string out = "ts,actual,detected\n";
  for (std::size_t i = 0; i < actual.size(); ++i) {
    out += std::to_string(actual.points[i].ts);
    out += actual.points[i].occupied ? ",1" : ",0";
    out += detected.points[i].occupied ? ",1\n" : ",0\n";
  }
  return out;
}

std::string ScheduleCsv(const HvacSchedule& schedule) {
  std::string out = "ts,hvac_on\n";
  for (const HvacPoint& p : schedule.points) {
    out += std::to_string(p.ts);
    out += p.on ? ",1\n" : ",0\n";
  }
  return out;
}

std::string ConfusionToJson(const OccupancyConfusion& c,
                            const HvacSchedule& s) {
  nlohmann::ordered_json j;
  j["frames"] = c.tp + c.fp + c.fn + c.tn;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  j["missed_occupied"] = c.missed_occupied;
  j["precision"] = c.precision;
  j["recall"] = c.recall;
  j["hvac"] = {{"span_seconds", s.span_seconds},
               {"on_seconds", s.on_seconds},
               {"on_fraction", s.on_fraction},
               {"runtime_reduction", s.runtime_reduction}};
  return j.dump(2) + "\n";
}

}  // namespace thermocc
