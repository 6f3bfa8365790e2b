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
#include "thermocc/detect.h"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "thermocc/errors.h"
#include "thermocc/metrics.h"

namespace thermocc {
namespace {

bool StrictlyIncreasing(const Trapezoid& k) {
  return k[0] < k[1] && k[1] < k[2] && k[2] < k[3];
}

PixelBox UnitBox(const Detection& d) { return ToPixelBox(d.box, 1, 1); }

}  // namespace

double TrapezoidMembership(double x, const Trapezoid& k) {
  if (x <= k[0] || x >= k[3]) return 0.0;
  if (x < k[1]) return (x - k[0]) / (k[1] - k[0]);
  if (x <= k[2]) return 1.0;
  return (k[3] - x) / (k[3] - k[2]);
}

void DetectorConfig::Validate() const {
  if (!(t_warm < t_face)) throw ConfigError("detector: t_warm must be < t_face");
  if (!StrictlyIncreasing(area)) {
    throw ConfigError("detector: area knots must be strictly increasing");
  }
  if (!StrictlyIncreasing(aspect)) {
    throw ConfigError("detector: aspect knots must be strictly increasing");
  }
  if (!(nms_iou > 0.0 && nms_iou < 1.0)) {
    throw ConfigError("detector: nms_iou must lie in (0, 1)");
  }
}

DetectorConfig DetectorConfig::FromJson(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("detector config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("detector config must be an object");

  DetectorConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "warm_threshold") {
        cfg.warm_threshold = value.get<double>();
      } else if (key == "t_warm") {
        cfg.t_warm = value.get<double>();
      } else if (key == "t_face") {
        cfg.t_face = value.get<double>();
      } else if (key == "min_area_frac") {
        cfg.area[0] = value.get<double>();
      } else if (key == "lo_area_frac") {
        cfg.area[1] = value.get<double>();
      } else if (key == "hi_area_frac") {
        cfg.area[2] = value.get<double>();
      } else if (key == "max_area_frac") {
        cfg.area[3] = value.get<double>();
      } else if (key == "aspect_trapezoid") {
        cfg.aspect = value.get<Trapezoid>();
      } else if (key == "nms_iou") {
        cfg.nms_iou = value.get<double>();
      } else {
        throw ConfigError("detector config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("detector config: ") + e.what());
  }
  cfg.Validate();
  return cfg;
}

std::string DetectorConfig::ToJson() const {
  nlohmann::json j;
  j["warm_threshold"] = warm_threshold;
  j["t_warm"] = t_warm;
  j["t_face"] = t_face;
  j["min_area_frac"] = area[0];
  j["lo_area_frac"] = area[1];
  j["hi_area_frac"] = area[2];
  j["max_area_frac"] = area[3];
  j["aspect_trapezoid"] = aspect;
  j["nms_iou"] = nms_iou;
  return j.dump(2) + "\n";
}

std::vector<Blob> FindBlobs(const ThermalFrame& frame, double warm_threshold) {
  const int w = frame.width();
  const int h = frame.height();
  const auto& temps = frame.temps();
  std::vector<char> warm(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    warm[i] = CentiKelvinToCelsius(temps[i]) >= warm_threshold;
  }

  std::vector<int> label(temps.size(), -1);
  std::vector<Blob> blobs;
  std::vector<int> stack;
  for (int start = 0; start < static_cast<int>(temps.size()); ++start) {
    if (!warm[start] || label[start] >= 0) continue;
    const int id = static_cast<int>(blobs.size());
    Blob blob;
    int min_x = w, min_y = h, max_x = -1, max_y = -1;
    double sum = 0;
    stack.assign(1, start);
    label[start] = id;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      blob.pixels.push_back(p);
      const int x = p % w;
      const int y = p / w;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
      sum += CentiKelvinToCelsius(temps[p]);
      const int neighbors[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& n : neighbors) {
        if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
        const int q = n[1] * w + n[0];
        if (warm[q] && label[q] < 0) {
          label[q] = id;
          stack.push_back(q);
        }
      }
    }
    std::sort(blob.pixels.begin(), blob.pixels.end());
    blob.area = static_cast<int>(blob.pixels.size());
    blob.box = PixelBox{double(min_x), double(min_y), double(max_x + 1),
                        double(max_y + 1)};
    blob.mean_temp = sum / blob.area;
    blob.aspect = blob.box.height() / blob.box.width();
    blobs.push_back(std::move(blob));
  }
  return blobs;
}

double ScoreBlob(const Blob& blob, const DetectorConfig& cfg, int image_area) {
  const double f_temp = std::clamp(
      (blob.mean_temp - cfg.t_warm) / (cfg.t_face - cfg.t_warm), 0.0, 1.0);
  const double f_area =
      TrapezoidMembership(static_cast<double>(blob.area) / image_area, cfg.area);
  const double f_aspect = TrapezoidMembership(blob.aspect, cfg.aspect);
  return f_temp * f_area * f_aspect;
}

bool RanksBefore(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  const PixelBox pa = UnitBox(a);
  const PixelBox pb = UnitBox(b);
  if (pa.y0 != pb.y0) return pa.y0 < pb.y0;
  return pa.x0 < pb.x0;
}

std::vector<Detection> Nms(std::vector<Detection> dets, double iou_thresh) {
  std::stable_sort(dets.begin(), dets.end(), RanksBefore);
  std::vector<PixelBox> boxes;
  boxes.reserve(dets.size());
  for (const Detection& d : dets) boxes.push_back(UnitBox(d));

  std::vector<char> suppressed(dets.size(), 0);
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (suppressed[i]) continue;
    kept.push_back(dets[i]);
    for (std::size_t j = i + 1; j < dets.size(); ++j) {
      if (!suppressed[j] && Iou(boxes[i], boxes[j]) >= iou_thresh) {
        suppressed[j] = 1;
      }
    }
  }
  return kept;
}

std::vector<Detection> ThresholdFilter(const std::vector<Detection>& dets,
                                       double tau) {
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [tau](const Detection& d) { return d.confidence >= tau; });
  return out;
}

std::vector<Detection> DetectBlobs(const ThermalFrame& frame,
                                   const DetectorConfig& cfg) {
  std::vector<Detection> dets;
  for (const Blob& blob : FindBlobs(frame, cfg.warm_threshold)) {
    const double conf = ScoreBlob(blob, cfg, frame.area());
    if (conf <= 0.0) continue;
    dets.push_back(Detection{kFaceClass,
                             ToNormalizedBox(blob.box, frame.width(),
                                             frame.height()),
                             conf});
  }
  return Nms(std::move(dets), cfg.nms_iou);
}

}  // namespace thermocc
