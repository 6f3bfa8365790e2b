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
#ifndef THERMOCC_PLOTS_H_
#define THERMOCC_PLOTS_H_

#include <string>

#include "thermocc/metrics.h"
#include "thermocc/occupancy.h"

namespace thermocc {

// Precision-recall polyline with the curve's AP in the title. Output carries
// no timestamps, so equal inputs give identical bytes.
std::string PrCurveSvg(const PRCurve& curve, double ap, double iou_thresh);

// Actual and detected occupancy as step curves over frame index. Each curve is
// a <polyline> whose id is "actual" or "detected", two vertices per frame.
std::string OccupancySvg(const OccupancyTimeline& actual,
                         const OccupancyTimeline& detected);

}  // namespace thermocc

#endif  // THERMOCC_PLOTS_H_
