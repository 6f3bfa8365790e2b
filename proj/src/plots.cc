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
#include "thermocc/plots.h"

#include <algorithm>
#include <cstdio>

#include "thermocc/errors.h"

namespace thermocc {
namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kMargin = 50;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Header(const std::string& title) {
  std::string s =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) +
      "\" height=\"" + Num(kHeight) + "\" viewBox=\"0 0 " + Num(kWidth) + " " +
      Num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + Num(kWidth / 2) +
       "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">" +
       title + "</text>\n";
  const double x0 = kMargin, y0 = kHeight - kMargin;
  s += "<line x1=\"" + Num(x0) + "\" y1=\"" + Num(y0) + "\" x2=\"" +
       Num(kWidth - kMargin) + "\" y2=\"" + Num(y0) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + Num(x0) + "\" y1=\"" + Num(y0) + "\" x2=\"" + Num(x0) +
       "\" y2=\"" + Num(kMargin) + "\" stroke=\"black\"/>\n";
  return s;
}

std::string AxisLabel(double x, double y, const std::string& text) {
  return "<text x=\"" + Num(x) + "\" y=\"" + Num(y) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" +
         text + "</text>\n";
}

}  // namespace

std::string PrCurveSvg(const PRCurve& curve, double ap, double iou_thresh) {
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto px = [&](double r) { return kMargin + r * pw; };
  auto py = [&](double p) { return kHeight - kMargin - p * ph; };

  std::string s = Header("Precision-recall, IoU " + Num(iou_thresh) +
                         ", AP = " + [&] {
                           char buf[32];
                           std::snprintf(buf, sizeof(buf), "%.3f", ap);
                           return std::string(buf);
                         }());
  s += AxisLabel(kWidth / 2, kHeight - 12, "recall");
  s += AxisLabel(16, kHeight / 2, "precision");
  if (!curve.points.empty()) {
    s += "<polyline id=\"pr\" fill=\"none\" stroke=\"steelblue\" "
         "stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      if (i) s += ' ';
      s += Num(px(curve.points[i].recall)) + "," +
           Num(py(curve.points[i].precision));
    }
    s += "\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string OccupancySvg(const OccupancyTimeline& actual,
                         const OccupancyTimeline& detected) {
  if (actual.size() != detected.size()) {
    throw AlignmentError("occupancy plot: length mismatch");
  }
  const double n = std::max<std::size_t>(actual.size(), 1);
  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto px = [&](double i) { return kMargin + i / n * pw; };
  auto py = [&](bool occupied) {
    return kHeight - kMargin - (occupied ? 0.8 : 0.1) * ph;
  };
  auto steps = [&](const OccupancyTimeline& t, const char* id,
                   const char* color, const char* dash) {
    std::string s = std::string("<polyline id=\"") + id +
                    "\" fill=\"none\" stroke=\"" + color +
                    "\" stroke-width=\"1.5\"" + dash + " points=\"";
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string y = Num(py(t.points[i].occupied));
      if (i) s += ' ';
      s += Num(px(double(i))) + "," + y + " " + Num(px(double(i + 1))) + "," + y;
    }
    return s + "\"/>\n";
  };

  std::string s = Header("Actual and detected occupancy");
  s += AxisLabel(kWidth / 2, kHeight - 12, "frame index");
  s += AxisLabel(20, py(true) + 4, "occ");
  s += AxisLabel(20, py(false) + 4, "vac");
  s += steps(actual, "actual", "black", "");
  s += steps(detected, "detected", "crimson", " stroke-dasharray=\"4 2\"");
  s += "</svg>\n";
  return s;
}

}  // namespace thermocc
