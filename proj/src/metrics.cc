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
#include "thermocc/metrics.h"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "json.hpp"
#include "thermocc/detect.h"
#include "thermocc/errors.h"
#include "thermocc/frame.h"
#include "thermocc/io.h"

namespace thermocc {
namespace {

// Visiting order for one image's predictions.
std::vector<std::size_t> RankOrder(const std::vector<Detection>& preds,
                                   const std::vector<PixelBox>& boxes) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (preds[a].confidence != preds[b].confidence) {
                       return preds[a].confidence > preds[b].confidence;
                     }
                     if (boxes[a].y0 != boxes[b].y0) {
                       return boxes[a].y0 < boxes[b].y0;
                     }
                     return boxes[a].x0 < boxes[b].x0;
                   });
  return order;
}

// Per-prediction TP flags of one image, indexed like the input.
std::vector<char> TruePositiveFlags(const ImageEval& image, double iou_thresh) {
  const MatchResult m = MatchDetections(image.preds, image.gts, iou_thresh,
                                        image.width, image.height);
  std::vector<char> flags(image.preds.size(), 0);
  for (const PredictionMatch& pm : m.matches) {
    flags[pm.prediction] = pm.ground_truth.has_value();
  }
  return flags;
}

}  // namespace

std::array<double, kNumIouThresholds> IouThresholds() {
  std::array<double, kNumIouThresholds> t{};
  for (int i = 0; i < kNumIouThresholds; ++i) t[i] = (50 + 5 * i) / 100.0;
  return t;
}

double Iou(const PixelBox& a, const PixelBox& b) {
  const double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

MatchResult MatchDetections(const std::vector<Detection>& preds,
                            const std::vector<GroundTruthBox>& gts,
                            double iou_thresh, int width, int height) {
  std::vector<PixelBox> pred_boxes;
  pred_boxes.reserve(preds.size());
  for (const Detection& d : preds) {
    pred_boxes.push_back(ToPixelBox(d.box, width, height));
  }
  std::vector<PixelBox> gt_boxes;
  gt_boxes.reserve(gts.size());
  for (const GroundTruthBox& g : gts) {
    gt_boxes.push_back(ToPixelBox(g.box, width, height));
  }

  MatchResult result;
  std::vector<char> taken(gts.size(), 0);
  for (std::size_t p : RankOrder(preds, pred_boxes)) {
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = Iou(pred_boxes[p], gt_boxes[g]);
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best && best_iou >= iou_thresh) {
      taken[*best] = 1;
      ++result.tp;
      result.matches.push_back({p, best});
    } else {
      ++result.fp;
      result.matches.push_back({p, std::nullopt});
    }
  }
  result.fn = static_cast<std::int64_t>(gts.size()) - result.tp;
  return result;
}

std::pair<double, double> PrecisionRecall(std::int64_t tp, std::int64_t fp,
                                          std::int64_t fn) {
  const double precision =
      tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
  const double recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
  return {precision, recall};
}

PRCurve BuildPrCurve(const std::vector<ImageEval>& images, double iou_thresh) {
  struct Ranked {
    double confidence;
    std::size_t image;
    double y0;
    double x0;
    std::size_t index;
    bool tp;
  };
  std::vector<Ranked> ranked;
  PRCurve curve;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ImageEval& image = images[i];
    curve.total_gt += static_cast<std::int64_t>(image.gts.size());
    const std::vector<char> flags = TruePositiveFlags(image, iou_thresh);
    for (std::size_t p = 0; p < image.preds.size(); ++p) {
      const PixelBox b = ToPixelBox(image.preds[p].box, image.width, image.height);
      ranked.push_back(
          {image.preds[p].confidence, i, b.y0, b.x0, p, flags[p] != 0});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.image != b.image) return a.image < b.image;
    if (a.y0 != b.y0) return a.y0 < b.y0;
    if (a.x0 != b.x0) return a.x0 < b.x0;
    return a.index < b.index;
  });

  std::int64_t tp = 0;
  std::int64_t fp = 0;
  curve.points.reserve(ranked.size());
  for (const Ranked& r : ranked) {
    (r.tp ? tp : fp) += 1;
    const double recall =
        curve.total_gt == 0 ? 0.0 : static_cast<double>(tp) / curve.total_gt;
    const double precision = static_cast<double>(tp) / (tp + fp);
    curve.points.push_back({recall, precision, tp, fp});
  }
  return curve;
}

double AveragePrecision(const PRCurve& curve) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.points.size());
  for (const PRPoint& p : curve.points) pts.emplace_back(p.recall, p.precision);
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });
  // best[i] = max precision over points i.. (all with recall >= pts[i].first).
  std::vector<double> best(pts.size() + 1, 0.0);
  for (std::size_t i = pts.size(); i-- > 0;) {
    best[i] = std::max(best[i + 1], pts[i].second);
  }
  double sum = 0.0;
  std::size_t first = 0;
  for (int k = 0; k < kNumRecallPoints; ++k) {
    const double r = k / 100.0;
    while (first < pts.size() && pts[first].first < r) ++first;
    sum += best[first];
  }
  return sum / kNumRecallPoints;
}

MapResult MapRange(const std::vector<ImageEval>& images) {
  const bool any = std::any_of(images.begin(), images.end(),
                               [](const ImageEval& im) {
                                 return !im.gts.empty() || !im.preds.empty();
                               });
  if (!any) {
    throw Error("nothing to evaluate: no ground truth and no predictions");
  }
  MapResult result;
  const auto thresholds = IouThresholds();
  for (int i = 0; i < kNumIouThresholds; ++i) {
    result.ap_per_iou[i] = AveragePrecision(BuildPrCurve(images, thresholds[i]));
  }
  result.map50 = result.ap_per_iou[0];
  // Every AP is at most the 0.50 one; the min absorbs summation rounding.
  result.map50_95 = std::min(
      result.map50,
      std::accumulate(result.ap_per_iou.begin(), result.ap_per_iou.end(), 0.0) /
          kNumIouThresholds);
  return result;
}

EvalReport Evaluate(const std::vector<ImageEval>& images, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ConfigError("operating threshold must lie in [0, 1]");
  }
  EvalReport report;
  report.operating_tau = tau;
  EvalCounts& c = report.counts;
  c.images = static_cast<std::int64_t>(images.size());
  for (const ImageEval& image : images) {
    const std::vector<Detection> kept = ThresholdFilter(image.preds, tau);
    const MatchResult m =
        MatchDetections(kept, image.gts, IouThresholds()[0], image.width,
                        image.height);
    c.gts += static_cast<std::int64_t>(image.gts.size());
    c.preds += static_cast<std::int64_t>(kept.size());
    c.preds_all += static_cast<std::int64_t>(image.preds.size());
    c.tp += m.tp;
    c.fp += m.fp;
    c.fn += m.fn;
  }
  std::tie(report.precision, report.recall) = PrecisionRecall(c.tp, c.fp, c.fn);

  const MapResult map = MapRange(images);
  report.map50 = map.map50;
  report.map50_95 = map.map50_95;
  report.ap_per_iou = map.ap_per_iou;
  return report;
}

std::vector<ImageEval> LoadEvalSet(const Manifest& manifest,
                                   const std::filesystem::path& preds_dir) {
  std::vector<ImageEval> images;
  images.reserve(manifest.size());
  for (const ManifestRecord& record : manifest) {
    ImageEval image;
    const std::string frame_bytes = ReadFile(record.frame);
    const FrameHeader header = DecodeFrameHeader(frame_bytes);
    image.width = header.width;
    image.height = header.height;
    if (record.labels) {
      try {
        image.gts = ParseLabels(ReadFile(*record.labels));
      } catch (const ParseError& e) {
        throw ParseError(0, record.labels->string() + ": " + e.what());
      }
    }
    const auto pred_path = PredictionPathFor(record, preds_dir);
    if (std::filesystem::exists(pred_path)) {
      try {
        image.preds = ParsePredictions(ReadFile(pred_path));
      } catch (const ParseError& e) {
        throw ParseError(0, pred_path.string() + ": " + e.what());
      }
    }
    images.push_back(std::move(image));
  }
  return images;
}

std::string EvalReportToJson(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["map50"] = r.map50;
  j["map50_95"] = r.map50_95;
  j["ap_per_iou"] = r.ap_per_iou;
  j["counts"] = {{"images", r.counts.images}, {"gts", r.counts.gts},
                 {"preds", r.counts.preds},   {"preds_all", r.counts.preds_all},
                 {"tp", r.counts.tp},         {"fp", r.counts.fp},
                 {"fn", r.counts.fn}};
  j["operating_tau"] = r.operating_tau;
  return j.dump(2) + "\n";
}

}  // namespace thermocc
