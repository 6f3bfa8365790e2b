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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "test_util.h"
#include "thermocc/errors.h"
#include "thermocc/metrics.h"
#include "thermocc/plots.h"

namespace thermocc {
namespace {

using testing::UniformInt;

Detection Conf(double c) {
  return Detection{kFaceClass, NormalizedBox{0.5, 0.5, 0.2, 0.2}, c};
}

OccupancyTimeline Timeline(const std::vector<bool>& occupied,
                           std::int64_t period = 10, std::int64_t start = 0) {
  OccupancyTimeline t;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    t.points.push_back({start + period * std::int64_t(i), occupied[i]});
  }
  return t;
}

std::vector<bool> Flags(const OccupancyTimeline& t) {
  std::vector<bool> f;
  for (const auto& p : t.points) f.push_back(p.occupied);
  return f;
}

std::vector<bool> HvacFlags(const HvacSchedule& s) {
  std::vector<bool> f;
  for (const auto& p : s.points) f.push_back(p.on);
  return f;
}

// Reference state walk: each frame's run start is found by scanning back.
std::vector<bool> OracleControl(const OccupancyTimeline& t, double on_delay,
                                double off_hold) {
  std::vector<bool> out;
  bool on = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::size_t s = i;
    while (s > 0 && t.points[s - 1].occupied == t.points[i].occupied) --s;
    const double held = double(t.points[i].ts - t.points[s].ts);
    if (t.points[i].occupied) {
      on = on || held >= on_delay;
    } else {
      on = on && !(held >= off_hold);
    }
    out.push_back(on);
  }
  return out;
}

std::vector<bool> RandomFlags(std::mt19937_64& rng, int n) {
  std::vector<bool> f;
  bool state = UniformInt(rng, 0, 1);
  while (static_cast<int>(f.size()) < n) {
    const int run = UniformInt(rng, 1, 40);
    for (int k = 0; k < run && static_cast<int>(f.size()) < n; ++k) f.push_back(state);
    state = !state;
  }
  return f;
}

TEST(FrameOccupancyTest, Examples) {
  EXPECT_FALSE(FrameOccupancy({}, 0.9));
  EXPECT_TRUE(FrameOccupancy({Conf(0.95)}, 0.9));
  EXPECT_FALSE(FrameOccupancy({Conf(0.85), Conf(0.89)}, 0.9));
  EXPECT_TRUE(FrameOccupancy({Conf(0.5), Conf(0.9)}, 0.9));
}

TEST(BuildTimelineTest, Examples) {
  const std::vector<std::int64_t> ts = {0, 10, 20, 30};
  EXPECT_EQ(Flags(BuildTimeline(ts, {{}, {}, {}, {}}, 0.9)),
            (std::vector<bool>{false, false, false, false}));
  EXPECT_EQ(Flags(BuildTimeline(ts, {{Conf(1)}, {}, {Conf(1)}, {}}, 0.9)),
            (std::vector<bool>{true, false, true, false}));
  EXPECT_THROW(BuildTimeline(ts, {{}, {}}, 0.9), AlignmentError);
  EXPECT_THROW(BuildTimeline({0, 0}, {{}, {}}, 0.9), SequenceError);
}

TEST(BuildTimelineTest, FromFrameSequence) {
  FrameSequence seq;
  seq.frames.push_back(testing::UniformFrame(22, 4, 4, 100));
  seq.frames.push_back(testing::UniformFrame(22, 4, 4, 110));
  const OccupancyTimeline t = BuildTimeline(seq, {{Conf(0.95)}, {}}, 0.9);
  EXPECT_EQ(t.points[0], (OccupancyPoint{100, true}));
  EXPECT_EQ(t.points[1], (OccupancyPoint{110, false}));
}

TEST(BuildTimelineTest, TestSubsetFixture) {
  // 764 occupied positions, 12 of which carry no detection.
  std::vector<std::int64_t> ts;
  std::vector<std::vector<Detection>> dets;
  std::vector<bool> actual;
  int skipped = 0;
  for (int i = 0; i < 968; ++i) {
    ts.push_back(10 * i);
    const bool occ = !(i % 4 == 0 && i < 4 * 204);
    actual.push_back(occ);
    const bool miss = occ && i % 61 == 1 && skipped++ < 12;
    dets.push_back(occ && !miss ? std::vector<Detection>{Conf(0.97)}
                                : std::vector<Detection>{});
  }
  const OccupancyTimeline det = BuildTimeline(ts, dets, 0.9);
  OccupancyTimeline act;
  for (int i = 0; i < 968; ++i) act.points.push_back({ts[i], actual[i]});
  int occupied = 0, missed = 0;
  for (int i = 0; i < 968; ++i) {
    occupied += actual[i];
    missed += actual[i] && !det.points[i].occupied;
  }
  ASSERT_EQ(occupied, 764);
  EXPECT_EQ(missed, 12);
  const OccupancyConfusion c = Compare(act, det);
  EXPECT_EQ(c.missed_occupied, 12);
  EXPECT_EQ(c.fp, 0);
  EXPECT_EQ(c.precision, 1.0);
  EXPECT_EQ(c.recall, 752.0 / 764);
  EXPECT_NEAR(c.recall, 0.9843, 5e-5);
}

TEST(TimelineProperty, MonotoneInTau) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = UniformInt(rng, 1, 50);
    std::vector<std::int64_t> ts;
    std::vector<std::vector<Detection>> dets(n);
    for (int i = 0; i < n; ++i) {
      ts.push_back(i);
      for (int k = UniformInt(rng, 0, 3); k > 0; --k) {
        dets[i].push_back(Conf(testing::UniformReal(rng, 0, 1)));
      }
    }
    const double t1 = testing::UniformReal(rng, 0, 1);
    const double t2 = testing::UniformReal(rng, t1, 1);
    const auto a = BuildTimeline(ts, dets, t1);
    const auto b = BuildTimeline(ts, dets, t2);
    for (int i = 0; i < n; ++i) {
      ASSERT_TRUE(!b.points[i].occupied || a.points[i].occupied);
    }
  }
}

TEST(CompareTest, IdenticalTimelines) {
  const OccupancyTimeline t = Timeline({true, false, true, true});
  const OccupancyConfusion c = Compare(t, t);
  EXPECT_EQ(c.fp, 0);
  EXPECT_EQ(c.fn, 0);
  EXPECT_EQ(c.tp, 3);
  EXPECT_EQ(c.tn, 1);
  EXPECT_EQ(c.precision, 1.0);
  EXPECT_EQ(c.recall, 1.0);
}

TEST(CompareTest, Misalignment) {
  EXPECT_THROW(Compare(Timeline({true}), Timeline({true, false})), AlignmentError);
  EXPECT_THROW(Compare(Timeline({true}, 10, 0), Timeline({true}, 10, 5)),
               AlignmentError);
}

TEST(CompareProperty, MatchesDirectCount) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = UniformInt(rng, 1, 200);
    const auto a = RandomFlags(rng, n);
    const auto d = RandomFlags(rng, n);
    const OccupancyConfusion c = Compare(Timeline(a), Timeline(d));
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (int i = 0; i < n; ++i) {
      if (a[i] && d[i]) ++tp;
      if (!a[i] && d[i]) ++fp;
      if (a[i] && !d[i]) ++fn;
      if (!a[i] && !d[i]) ++tn;
    }
    ASSERT_EQ(c.tp, tp);
    ASSERT_EQ(c.fp, fp);
    ASSERT_EQ(c.fn, fn);
    ASSERT_EQ(c.tn, tn);
    ASSERT_EQ(c.tp + c.fp + c.fn + c.tn, n);
    ASSERT_EQ(c.missed_occupied, c.fn);
  }
}

TEST(SimulateControlTest, AlwaysOccupied) {
  const HvacSchedule s =
      SimulateControl(Timeline(std::vector<bool>(50, true)), ControlPolicy{0, 900});
  for (const auto& p : s.points) EXPECT_TRUE(p.on);
  EXPECT_EQ(s.on_fraction, 1.0);
  EXPECT_EQ(s.runtime_reduction, 0.0);
  EXPECT_EQ(s.span_seconds, 500.0);
}

TEST(SimulateControlTest, ShortGapDoesNotSwitchOff) {
  std::vector<bool> f(100, true);
  for (int i = 40; i < 46; ++i) f[i] = false;  // 60 s gap
  const HvacSchedule s = SimulateControl(Timeline(f), ControlPolicy{0, 900});
  for (const auto& p : s.points) EXPECT_TRUE(p.on);
}

TEST(SimulateControlTest, HourLongVacancy) {
  std::vector<bool> f;
  for (int i = 0; i < 1080; ++i) f.push_back(i < 360 || i >= 720);
  const OccupancyTimeline t = Timeline(f, 10, 1700000000);
  const HvacSchedule s = SimulateControl(t, ControlPolicy{0, 900});
  ASSERT_EQ(s.points.size(), 1080u);
  for (int i = 0; i < 1080; ++i) {
    ASSERT_EQ(s.points[i].on, !(i >= 450 && i < 720)) << i;
    ASSERT_EQ(s.points[i].ts, t.points[i].ts);
  }
  EXPECT_EQ(HvacFlags(s), OracleControl(t, 0, 900));
  double on = 0;
  for (int i = 0; i < 1080; ++i) on += s.points[i].on ? 10 : 0;
  EXPECT_DOUBLE_EQ(s.on_seconds, on);
  EXPECT_DOUBLE_EQ(s.on_fraction, on / 10800);
  EXPECT_DOUBLE_EQ(s.on_fraction, 0.75);
  EXPECT_DOUBLE_EQ(s.runtime_reduction, 0.25);
}

TEST(SimulateControlTest, OnDelay) {
  const OccupancyTimeline t =
      Timeline({false, true, true, true, true, false, true});
  const HvacSchedule s = SimulateControl(t, ControlPolicy{20, 0});
  EXPECT_EQ(HvacFlags(s),
            (std::vector<bool>{false, false, false, true, true, false, false}));
}

TEST(SimulateControlTest, EmptyTimelineIsAnError) {
  EXPECT_THROW(SimulateControl(OccupancyTimeline{}, ControlPolicy{}), AlignmentError);
}

TEST(SimulateControlProperty, MatchesOracleAndBounds) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = UniformInt(rng, 1, 300);
    const auto f = RandomFlags(rng, n);
    const OccupancyTimeline t = Timeline(f, UniformInt(rng, 1, 30));
    const ControlPolicy p{double(UniformInt(rng, 0, 4) * 30),
                          double(UniformInt(rng, 0, 10) * 60)};
    const HvacSchedule s = SimulateControl(t, p);
    ASSERT_EQ(HvacFlags(s), OracleControl(t, p.on_delay, p.off_hold));
    ASSERT_GE(s.on_fraction, 0.0);
    ASSERT_LE(s.on_fraction, 1.0);
    if (p.on_delay == 0) ASSERT_GE(s.on_fraction, OccupiedFraction(t) - 1e-12);

    const HvacSchedule exact = SimulateControl(t, ControlPolicy{0, 0});
    ASSERT_EQ(HvacFlags(exact), f);

    const HvacSchedule forever = SimulateControl(
        t, ControlPolicy{0, std::numeric_limits<double>::infinity()});
    bool seen = false;
    for (int i = 0; i < n; ++i) {
      seen = seen || f[i];
      ASSERT_EQ(forever.points[i].on, seen);
    }
  }
}

TEST(FrameDurationsTest, LastFrameGetsMedianStep) {
  OccupancyTimeline t;
  for (std::int64_t ts : {0, 10, 20, 50}) t.points.push_back({ts, true});
  EXPECT_EQ(FrameDurations(t), (std::vector<double>{10, 10, 30, 10}));
}

TEST(ControlPolicyTest, Json) {
  const ControlPolicy p = ControlPolicy::FromJson(R"({"on_delay": 30, "off_hold": 600})");
  EXPECT_EQ(p.on_delay, 30.0);
  EXPECT_EQ(p.off_hold, 600.0);
  EXPECT_EQ(ControlPolicy::FromJson("{}").off_hold, 900.0);
  EXPECT_TRUE(std::isinf(ControlPolicy::FromJson(R"({"off_hold": null})").off_hold));
  EXPECT_THROW(ControlPolicy::FromJson(R"({"on_delay": -1})"), ConfigError);
  EXPECT_THROW(ControlPolicy::FromJson(R"({"hold": 1})"), ConfigError);
  EXPECT_THROW(ControlPolicy::FromJson("[1]"), ConfigError);
  EXPECT_THROW(ControlPolicy::FromJson("nope"), ConfigError);
}

TEST(CsvTest, Formats) {
  const OccupancyTimeline a = Timeline({true, false}, 10, 100);
  const OccupancyTimeline d = Timeline({true, true}, 10, 100);
  EXPECT_EQ(TimelineCsv(a, d), "ts,actual,detected\n100,1,1\n110,0,1\n");
  const HvacSchedule s = SimulateControl(d, ControlPolicy{});
  EXPECT_EQ(ScheduleCsv(s), "ts,hvac_on\n100,1\n110,1\n");
  EXPECT_THROW(TimelineCsv(a, Timeline({true})), AlignmentError);
}

TEST(ConfusionJsonTest, CountsAgreeWithFrames) {
  const OccupancyTimeline a = Timeline({true, false, true});
  const OccupancyTimeline d = Timeline({true, true, false});
  const std::string json =
      ConfusionToJson(Compare(a, d), SimulateControl(d, ControlPolicy{}));
  EXPECT_NE(json.find("\"frames\": 3"), std::string::npos);
  EXPECT_NE(json.find("\"missed_occupied\": 1"), std::string::npos);
  EXPECT_NE(json.find("\"on_fraction\""), std::string::npos);
}

// Vertices of the polyline with the given id, as one string per frame step.
std::vector<std::string> PolylineYs(const std::string& svg, const std::string& id) {
  const std::size_t tag = svg.find("<polyline id=\"" + id + "\"");
  if (tag == std::string::npos) return {};
  const std::string key = " points=\"";
  const std::size_t begin = svg.find(key, tag) + key.size();
  const std::size_t end = svg.find('"', begin);
  std::vector<std::string> ys;
  std::istringstream in(svg.substr(begin, end - begin));
  std::string vertex;
  while (in >> vertex) ys.push_back(vertex.substr(vertex.find(',') + 1));
  return ys;
}

TEST(OccupancySvgTest, IdenticalTimelinesCoincide) {
  const OccupancyTimeline t = Timeline({true, true, false, true});
  const std::string svg = OccupancySvg(t, t);
  const auto a = PolylineYs(svg, "actual");
  ASSERT_EQ(a.size(), 8u);
  EXPECT_EQ(a, PolylineYs(svg, "detected"));
  EXPECT_EQ(svg, OccupancySvg(t, t));
}

TEST(OccupancySvgTest, MissedFramesAreTheOnlyDifferences) {
  std::vector<bool> actual(968), detected(968);
  int missed = 0;
  for (int i = 0; i < 968; ++i) {
    actual[i] = i < 764;
    detected[i] = actual[i] && !(i % 60 == 7 && missed++ < 12);
  }
  const std::string svg = OccupancySvg(Timeline(actual), Timeline(detected));
  const auto a = PolylineYs(svg, "actual");
  const auto d = PolylineYs(svg, "detected");
  ASSERT_EQ(a.size(), 2u * 968);
  ASSERT_EQ(d.size(), a.size());
  int differing = 0;
  for (std::size_t i = 0; i < a.size(); i += 2) differing += a[i] != d[i];
  EXPECT_EQ(differing, 12);
}

TEST(PrCurveSvgTest, EmptyPredictionsAnnotateZeroAp) {
  PRCurve empty;
  empty.total_gt = 3;
  const std::string svg = PrCurveSvg(empty, AveragePrecision(empty), 0.5);
  EXPECT_NE(svg.find("AP = 0.000"), std::string::npos);
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
}

TEST(PrCurveSvgTest, OneVertexPerPoint) {
  PRCurve c;
  c.total_gt = 1;
  c.points = {PRPoint{0, 0, 0, 1}, PRPoint{1, 0.5, 1, 1}};
  const std::string svg = PrCurveSvg(c, AveragePrecision(c), 0.5);
  EXPECT_NE(svg.find("AP = 0.500"), std::string::npos);
  EXPECT_EQ(PolylineYs(svg, "pr").size(), 2u);
}

}  // namespace
}  // namespace thermocc
