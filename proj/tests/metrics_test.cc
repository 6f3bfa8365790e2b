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

#include <gtest/gtest.h>

#include <random>

#include "metrics_oracle.h"
#include "test_util.h"
#include "thermocc/errors.h"
#include "thermocc/io.h"

namespace thermocc {
namespace {

using testing::PixelRectBox;

GroundTruthBox Gt(const NormalizedBox& b) { return GroundTruthBox{kFaceClass, b}; }
Detection Pred(const NormalizedBox& b, double conf) {
  return Detection{kFaceClass, b, conf};
}

// Full-height box spanning [x0, x1) on a 100x10 image.
NormalizedBox Span(double x0, double x1) { return PixelRectBox(x0, 0, x1, 10, 100, 10); }

TEST(IouTest, Examples) {
  const PixelBox a{0, 0, 2, 2};
  EXPECT_EQ(Iou(a, a), 1.0);
  EXPECT_EQ(Iou(a, PixelBox{5, 5, 6, 6}), 0.0);
  EXPECT_EQ(Iou(a, PixelBox{2, 0, 4, 2}), 0.0);
  EXPECT_EQ(Iou(a, PixelBox{1, 0, 3, 2}), 1.0 / 3);
}

TEST(IouProperty, SymmetricBoundedIdentity) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const PixelBox a = ToPixelBox(testing::RandomBox(rng), 128, 96);
    const PixelBox b = ToPixelBox(testing::RandomBox(rng), 128, 96);
    const double v = Iou(a, b);
    ASSERT_EQ(v, Iou(b, a));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_EQ(Iou(a, a), 1.0);
    if (!(a == b)) ASSERT_LT(v, 1.0);
  }
}

TEST(IouThresholdsTest, ExactHundredths) {
  const auto t = IouThresholds();
  EXPECT_EQ(t[0], 0.5);
  EXPECT_EQ(t[2], 0.6);
  EXPECT_EQ(t[9], 0.95);
}

TEST(MatchDetectionsTest, SingleMatch) {
  // IoU 60 / 100 = 0.6.
  const MatchResult m =
      MatchDetections({Pred(Span(0, 60), 0.9)}, {Gt(Span(0, 100))}, 0.5, 100, 10);
  EXPECT_EQ(m.tp, 1);
  EXPECT_EQ(m.fp, 0);
  EXPECT_EQ(m.fn, 0);
  ASSERT_EQ(m.matches.size(), 1u);
  EXPECT_EQ(m.matches[0].ground_truth, std::optional<std::size_t>(0));
}

TEST(MatchDetectionsTest, NoPredictions) {
  const MatchResult m =
      MatchDetections({}, {Gt(Span(0, 10)), Gt(Span(50, 60))}, 0.5, 100, 10);
  EXPECT_EQ(m.tp, 0);
  EXPECT_EQ(m.fp, 0);
  EXPECT_EQ(m.fn, 2);
}

TEST(MatchDetectionsTest, GreedyTakesBestGroundTruthFirst) {
  // pred1 [0,7): IoU 0.7 with A [0,10), 0.6 with B [0,4.2).
  // pred2 [2,10): IoU 0.8 with A, 2.2 / 10 with B.
  const std::vector<GroundTruthBox> gts = {Gt(Span(0, 10)), Gt(Span(0, 4.2))};
  const std::vector<Detection> preds = {Pred(Span(2, 10), 0.8),
                                        Pred(Span(0, 7), 0.9)};
  const MatchResult m = MatchDetections(preds, gts, 0.5, 100, 10);
  EXPECT_EQ(m.tp, 1);
  EXPECT_EQ(m.fp, 1);
  EXPECT_EQ(m.fn, 1);
  ASSERT_EQ(m.matches.size(), 2u);
  EXPECT_EQ(m.matches[0].prediction, 1u);
  EXPECT_EQ(m.matches[0].ground_truth, std::optional<std::size_t>(0));
  EXPECT_EQ(m.matches[1].ground_truth, std::nullopt);
  const MatchResult o = OracleMatch(preds, gts, 0.5, 100, 10);
  EXPECT_EQ(o.tp, m.tp);
  EXPECT_EQ(o.fp, m.fp);
  EXPECT_EQ(o.fn, m.fn);
}

TEST(MatchDetectionsTest, IouTieGoesToLowestIndex) {
  const std::vector<GroundTruthBox> gts = {Gt(Span(10, 20)), Gt(Span(0, 10))};
  const MatchResult m =
      MatchDetections({Pred(Span(5, 15), 0.9)}, gts, 0.3, 100, 10);
  ASSERT_EQ(m.tp, 1);
  EXPECT_EQ(m.matches[0].ground_truth, std::optional<std::size_t>(0));
}

TEST(MatchDetectionsTest, ConfidenceTieVisitsTopEdgeFirst) {
  const NormalizedBox gt = PixelRectBox(0, 0, 10, 10, 100, 100);
  const std::vector<Detection> preds = {
      Pred(PixelRectBox(0, 2, 10, 12, 100, 100), 0.5),
      Pred(PixelRectBox(0, 1, 10, 11, 100, 100), 0.5)};
  const MatchResult m = MatchDetections(preds, {Gt(gt)}, 0.5, 100, 100);
  EXPECT_EQ(m.matches[0].prediction, 1u);
  EXPECT_TRUE(m.matches[0].ground_truth.has_value());
}

TEST(MatchDetectionsProperty, ConservationAndOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto images = testing::RandomEvalInstance(rng);
    for (const ImageEval& im : images) {
      for (double thr : IouThresholds()) {
        const MatchResult m = MatchDetections(im.preds, im.gts, thr, im.width, im.height);
        ASSERT_EQ(m.tp + m.fn, static_cast<std::int64_t>(im.gts.size()));
        ASSERT_EQ(m.tp + m.fp, static_cast<std::int64_t>(im.preds.size()));
        std::vector<int> uses(im.gts.size(), 0);
        for (const auto& pm : m.matches) {
          if (pm.ground_truth) ASSERT_EQ(++uses[*pm.ground_truth], 1);
        }
        const MatchResult o = OracleMatch(im.preds, im.gts, thr, im.width, im.height);
        ASSERT_EQ(m.tp, o.tp);
        ASSERT_EQ(m.fp, o.fp);
        ASSERT_EQ(m.fn, o.fn);
        ASSERT_EQ(m.matches.size(), o.matches.size());
        for (std::size_t i = 0; i < m.matches.size(); ++i) {
          ASSERT_EQ(m.matches[i].prediction, o.matches[i].prediction);
          ASSERT_EQ(m.matches[i].ground_truth, o.matches[i].ground_truth);
        }
      }
    }
  }
}

TEST(PrecisionRecallTest, Examples) {
  EXPECT_EQ(PrecisionRecall(3, 1, 0), std::make_pair(0.75, 1.0));
  EXPECT_EQ(PrecisionRecall(0, 0, 0), std::make_pair(1.0, 1.0));
  const auto [p, r] = PrecisionRecall(752, 0, 12);
  EXPECT_EQ(p, 1.0);
  EXPECT_EQ(r, 752.0 / 764);
  EXPECT_NEAR(r, 0.98429, 1e-5);
  EXPECT_EQ(PrecisionRecall(0, 4, 0), std::make_pair(0.0, 1.0));
  EXPECT_EQ(PrecisionRecall(0, 0, 4), std::make_pair(1.0, 0.0));
}

TEST(PrCurveTest, Examples) {
  const NormalizedBox g = Span(0, 10);
  PRCurve c = BuildPrCurve({ImageEval{{Pred(g, 0.7)}, {Gt(g)}, 100, 10}}, 0.5);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_EQ(c.points[0].recall, 1.0);
  EXPECT_EQ(c.points[0].precision, 1.0);

  c = BuildPrCurve(
      {ImageEval{{Pred(Span(50, 60), 0.9), Pred(g, 0.8)}, {Gt(g)}, 100, 10}}, 0.5);
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[0].recall, 0.0);
  EXPECT_EQ(c.points[0].precision, 0.0);
  EXPECT_EQ(c.points[1].recall, 1.0);
  EXPECT_EQ(c.points[1].precision, 0.5);
  EXPECT_EQ(AveragePrecision(c), 0.5);
}

TEST(PrCurveTest, RanksAcrossImagesByImageIndexOnTies) {
  const NormalizedBox g = Span(0, 10);
  const std::vector<ImageEval> images = {
      ImageEval{{Pred(Span(50, 60), 0.5)}, {}, 100, 10},
      ImageEval{{Pred(g, 0.5)}, {Gt(g)}, 100, 10}};
  const PRCurve c = BuildPrCurve(images, 0.5);
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[0].tp, 0);
  EXPECT_EQ(c.points[1].tp, 1);
}

TEST(AveragePrecisionTest, Examples) {
  PRCurve perfect;
  perfect.total_gt = 1;
  perfect.points = {PRPoint{1.0, 1.0, 1, 0}};
  EXPECT_EQ(AveragePrecision(perfect), 1.0);

  PRCurve none;
  none.total_gt = 3;
  EXPECT_EQ(AveragePrecision(none), 0.0);

  PRCurve two;
  two.total_gt = 1;
  two.points = {PRPoint{0.0, 0.0, 0, 1}, PRPoint{1.0, 0.5, 1, 1}};
  double direct = 0.0;
  for (int j = 0; j <= 100; ++j) direct += 0.5;
  EXPECT_EQ(AveragePrecision(two), direct / 101);
  EXPECT_EQ(AveragePrecision(two), 0.5);
}

TEST(AveragePrecisionTest, PartialRecall) {
  // Recall reaches 0.5 at precision 1: r in {0, ..., 0.50} -> 51 terms.
  PRCurve c;
  c.total_gt = 2;
  c.points = {PRPoint{0.5, 1.0, 1, 0}};
  EXPECT_NEAR(AveragePrecision(c), 51.0 / 101, 1e-15);
}

TEST(MapRangeTest, ExactPredictions) {
  const NormalizedBox g = Span(10, 30);
  const MapResult r =
      MapRange({ImageEval{{Pred(g, 0.4)}, {Gt(g)}, 100, 10},
                ImageEval{{}, {}, 100, 10}});
  EXPECT_EQ(r.map50, 1.0);
  EXPECT_EQ(r.map50_95, 1.0);
}

TEST(MapRangeTest, SixtyOnePercentOverlap) {
  // IoU 610 / 1000 clears 0.50, 0.55, 0.60 only.
  const MapResult r = MapRange(
      {ImageEval{{Pred(Span(0, 61), 0.9)}, {Gt(Span(0, 100))}, 100, 10},
       ImageEval{{Pred(Span(0, 61), 0.8)}, {Gt(Span(0, 100))}, 100, 10}});
  EXPECT_EQ(r.map50, 1.0);
  EXPECT_DOUBLE_EQ(r.map50_95, 0.3);
  for (int i = 0; i < kNumIouThresholds; ++i) {
    EXPECT_EQ(r.ap_per_iou[i], i < 3 ? 1.0 : 0.0) << i;
  }
}

TEST(MapRangeTest, EmptyDatasetIsAnError) {
  EXPECT_THROW(MapRange({}), Error);
  EXPECT_THROW(MapRange({ImageEval{}, ImageEval{}}), Error);
}

TEST(MapRangeTest, GroundTruthWithoutPredictionsIsZero) {
  const MapResult r = MapRange({ImageEval{{}, {Gt(Span(0, 10))}, 100, 10}});
  EXPECT_EQ(r.map50, 0.0);
  EXPECT_EQ(r.map50_95, 0.0);
}

TEST(EvaluateTest, PerfectPredictions) {
  std::vector<ImageEval> images;
  for (int i = 0; i < 5; ++i) {
    const NormalizedBox g = Span(10 * i, 10 * i + 12);
    images.push_back(ImageEval{{Pred(g, 1.0)}, {Gt(g)}, 100, 10});
  }
  const EvalReport r = Evaluate(images, 0.9);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.map50, 1.0);
  EXPECT_EQ(r.map50_95, 1.0);
}

std::vector<ImageEval> TableTwoFixture() {
  // 764 occupied frames: 752 detected exactly, 12 with no detection; 204
  // unoccupied frames with neither labels nor detections.
  std::vector<ImageEval> images;
  for (int i = 0; i < 968; ++i) {
    ImageEval im;
    if (i < 764) {
      const NormalizedBox g = PixelRectBox(40 + i % 20, 30, 60 + i % 20, 54, 128, 96);
      im.gts.push_back(Gt(g));
      if (i >= 12) im.preds.push_back(Pred(g, 0.9 + (i % 10) / 100.0));
    }
    images.push_back(std::move(im));
  }
  return images;
}

TEST(EvaluateTest, TableTwoFixture) {
  const EvalReport r = Evaluate(TableTwoFixture(), 0.9);
  EXPECT_EQ(r.counts.images, 968);
  EXPECT_EQ(r.counts.tp, 752);
  EXPECT_EQ(r.counts.fp, 0);
  EXPECT_EQ(r.counts.fn, 12);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 752.0 / 764);
  EXPECT_NEAR(r.recall, 0.984, 5e-4);
}

TEST(EvaluateTest, OperatingThresholdOnlyAffectsPrecisionRecall) {
  const NormalizedBox g = Span(0, 20);
  const std::vector<ImageEval> images = {
      ImageEval{{Pred(g, 0.5)}, {Gt(g)}, 100, 10}};
  const EvalReport r = Evaluate(images, 0.9);
  EXPECT_EQ(r.counts.preds, 0);
  EXPECT_EQ(r.counts.preds_all, 1);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.map50, 1.0);
  EXPECT_THROW(Evaluate(images, 1.5), ConfigError);
  EXPECT_THROW(Evaluate(images, -0.1), ConfigError);
}

TEST(MetricsOracleProperty, CurvesApAndMapAgree) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto images = testing::RandomEvalInstance(rng);
    const bool empty = std::all_of(images.begin(), images.end(), [](const auto& im) {
      return im.gts.empty() && im.preds.empty();
    });
    if (empty) {
      ASSERT_THROW(MapRange(images), Error);
      continue;
    }
    for (double thr : IouThresholds()) {
      const PRCurve c = BuildPrCurve(images, thr);
      const PRCurve o = testing::OraclePrCurve(images, thr);
      ASSERT_EQ(c.total_gt, o.total_gt);
      ASSERT_EQ(c.points.size(), o.points.size());
      for (std::size_t k = 0; k < c.points.size(); ++k) {
        ASSERT_EQ(c.points[k].tp, o.points[k].tp) << trial << " rank " << k;
        ASSERT_NEAR(c.points[k].recall, o.points[k].recall, 1e-9);
        ASSERT_NEAR(c.points[k].precision, o.points[k].precision, 1e-9);
        if (k > 0) ASSERT_GE(c.points[k].recall, c.points[k - 1].recall);
      }
      ASSERT_NEAR(AveragePrecision(c), testing::OracleAveragePrecision(o), 1e-9);
    }
    const MapResult m = MapRange(images);
    const MapResult om = testing::OracleMapRange(images);
    ASSERT_NEAR(m.map50, om.map50, 1e-9);
    ASSERT_NEAR(m.map50_95, om.map50_95, 1e-9);
    ASSERT_LE(m.map50_95, m.map50);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(MetricsProperty, ThresholdMonotonicity) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto images = testing::RandomEvalInstance(rng);
    const double t1 = testing::UniformReal(rng, 0.05, 0.95);
    const double t2 = testing::UniformReal(rng, t1, 0.95);
    const PRCurve a = BuildPrCurve(images, t1);
    const PRCurve b = BuildPrCurve(images, t2);
    for (std::size_t k = 0; k < a.points.size(); ++k) {
      ASSERT_LE(b.points[k].tp, a.points[k].tp) << trial;
    }
    ASSERT_LE(AveragePrecision(b), AveragePrecision(a));
  }
}

TEST(MetricsProperty, OperatingThresholdMonotonicity) {
  std::mt19937_64 rng(98);
  for (int trial = 0; trial < 500; ++trial) {
    const auto images = testing::RandomEvalInstance(rng);
    if (std::all_of(images.begin(), images.end(), [](const auto& im) {
          return im.gts.empty() && im.preds.empty();
        })) {
      continue;
    }
    const double t1 = testing::UniformReal(rng, 0, 1);
    const double t2 = testing::UniformReal(rng, t1, 1);
    const EvalReport a = Evaluate(images, t1);
    const EvalReport b = Evaluate(images, t2);
    ASSERT_LE(b.counts.tp, a.counts.tp);
    ASSERT_GE(b.counts.fn, a.counts.fn);
    ASSERT_LE(b.recall, a.recall);
    ASSERT_EQ(a.map50, b.map50);
  }
}

TEST(MetricsProperty, ScaleInvariance) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 300; ++trial) {
    auto images = testing::RandomEvalInstance(rng);
    if (std::all_of(images.begin(), images.end(), [](const auto& im) {
          return im.gts.empty() && im.preds.empty();
        })) {
      continue;
    }
    const int k = testing::UniformInt(rng, 2, 5);
    auto scaled = images;
    for (ImageEval& im : scaled) {
      im.width *= k;
      im.height *= k;
    }
    const EvalReport a = Evaluate(images, 0.5);
    const EvalReport b = Evaluate(scaled, 0.5);
    ASSERT_EQ(a.counts.tp, b.counts.tp);
    ASSERT_NEAR(a.map50, b.map50, 1e-12);
    ASSERT_NEAR(a.map50_95, b.map50_95, 1e-12);
  }
}

TEST(LoadEvalSetTest, ReadsLabelsPredictionsAndSize) {
  testing::ScopedTempDir dir;
  const auto frame_a = dir.path() / "a.pgm";
  const auto frame_b = dir.path() / "b.pgm";
  WriteFile(frame_a, EncodeFrame(testing::UniformFrame(22, 64, 48, 10)));
  WriteFile(frame_b, EncodeFrame(testing::UniformFrame(22, 64, 48, 20)));
  const auto labels = dir.path() / "a.txt";
  WriteFile(labels, "0 0.5 0.5 0.2 0.2\n");
  std::filesystem::create_directories(dir.path() / "preds");
  WriteFile(dir.path() / "preds" / "a.txt", "0 0.5 0.5 0.2 0.2 0.95\n");

  const Manifest m = {ManifestRecord{frame_a, labels, true, 10},
                      ManifestRecord{frame_b, std::nullopt, false, 20}};
  const auto images = LoadEvalSet(m, dir.path() / "preds");
  ASSERT_EQ(images.size(), 2u);
  EXPECT_EQ(images[0].width, 64);
  EXPECT_EQ(images[0].height, 48);
  EXPECT_EQ(images[0].gts.size(), 1u);
  EXPECT_EQ(images[0].preds.size(), 1u);
  EXPECT_TRUE(images[1].gts.empty());
  EXPECT_TRUE(images[1].preds.empty());

  WriteFile(dir.path() / "preds" / "b.txt", "0 0.5 0.5 0.2\n");
  EXPECT_THROW(LoadEvalSet(m, dir.path() / "preds"), ParseError);
}

TEST(EvalReportToJsonTest, KeysInOrder) {
  const NormalizedBox g = Span(0, 20);
  const std::string json =
      EvalReportToJson(Evaluate({ImageEval{{Pred(g, 1.0)}, {Gt(g)}, 100, 10}}, 0.9));
  const auto pos = [&](const char* key) { return json.find(key); };
  EXPECT_LT(pos("\"precision\""), pos("\"recall\""));
  EXPECT_LT(pos("\"recall\""), pos("\"map50\""));
  EXPECT_LT(pos("\"map50_95\""), pos("\"ap_per_iou\""));
  EXPECT_LT(pos("\"counts\""), pos("\"operating_tau\""));
  EXPECT_NE(pos("\"tp\": 1"), std::string::npos);
}

}  // namespace
}  // namespace thermocc
