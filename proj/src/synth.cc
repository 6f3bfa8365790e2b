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
#include "thermocc/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "json.hpp"
#include "thermocc/errors.h"
#include "thermocc/io.h"
#include "thermocc/parallel.h"
#include "thermocc/split.h"

namespace thermocc {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform in (0, 1) from the top 53 bits.
double Unit(std::mt19937_64& rng) {
  return ((rng() >> 11) + 0.5) * 0x1.0p-53;
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * Unit(rng);
}

// Box-Muller; spelled out so noise does not depend on the standard library's
// distribution implementation.
double Gaussian(std::mt19937_64& rng) {
  const double u1 = Unit(rng);
  const double u2 = Unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::int64_t RoundHalfAway(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5 + 1e-9));
}

void ValidateScene(const SceneSpec& spec) {
  if (spec.width < 1 || spec.height < 1) {
    throw SpecError("scene dimensions must be >= 1");
  }
  if (!(spec.noise_sigma >= 0.0)) throw SpecError("noise_sigma must be >= 0");
  if (!spec.head) return;
  const HeadSpec& h = *spec.head;
  if (!(h.rx > 0.0) || !(h.ry > 0.0)) {
    throw SpecError("head axes must be positive");
  }
  if (!(h.occlusion_frac >= 0.0 && h.occlusion_frac < 1.0)) {
    throw SpecError("occlusion_frac must lie in [0, 1)");
  }
  if (!(h.peak_temp > spec.background_temp)) {
    throw SpecError("peak_temp must exceed background_temp");
  }
}

// `parts` positive integers summing to n (n >= parts >= 1).
std::vector<std::int64_t> RandomComposition(std::int64_t n, std::int64_t parts,
                                            std::mt19937_64& rng) {
  std::vector<std::int64_t> cuts(n - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  for (std::int64_t i = 0; i < parts - 1; ++i) {
    const std::int64_t j = i + UniformBelow(rng, cuts.size() - i);
    std::swap(cuts[i], cuts[j]);
  }
  cuts.resize(parts - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::int64_t> sizes;
  std::int64_t prev = 0;
  for (std::int64_t c : cuts) {
    sizes.push_back(c - prev);
    prev = c;
  }
  sizes.push_back(n - prev);
  return sizes;
}

// Alternating occupied/vacant runs, starting occupied when possible.
std::vector<bool> OccupancyRuns(std::int64_t occupied, std::int64_t vacant,
                                std::mt19937_64& rng) {
  std::vector<bool> flags;
  if (occupied == 0 || vacant == 0) {
    flags.assign(occupied + vacant, occupied > 0);
    return flags;
  }
  const std::int64_t vacant_runs = std::clamp<std::int64_t>(
      RoundHalfAway(vacant / 40.0), 1, std::min(vacant, occupied));
  const std::int64_t occupied_runs = std::min(vacant_runs + 1, occupied);
  const auto occ = RandomComposition(occupied, occupied_runs, rng);
  const auto vac = RandomComposition(vacant, vacant_runs, rng);
  for (std::size_t i = 0; i < occ.size() || i < vac.size(); ++i) {
    if (i < occ.size()) flags.insert(flags.end(), occ[i], true);
    if (i < vac.size()) flags.insert(flags.end(), vac[i], false);
  }
  return flags;
}

nlohmann::ordered_json ScenarioJson(const Scenario& s) {
  return {{"orientation", OrientationName(s.orientation)},
          {"occlusion", s.occlusion},
          {"weight", s.weight}};
}

}  // namespace

const char* OrientationName(Orientation o) {
  switch (o) {
    case Orientation::kFrontal:
      return "frontal";
    case Orientation::kSide:
      return "side";
    case Orientation::kDown:
      return "down";
  }
  return "frontal";
}

Orientation ParseOrientation(const std::string& name) {
  if (name == "frontal") return Orientation::kFrontal;
  if (name == "side") return Orientation::kSide;
  if (name == "down") return Orientation::kDown;
  throw SpecError("unknown orientation '" + name + "'");
}

std::vector<double> SceneTemperatures(const SceneSpec& spec) {
  ValidateScene(spec);
  const int w = spec.width;
  const int h = spec.height;
  std::vector<double> temps(static_cast<std::size_t>(w) * h,
                            spec.background_temp);
  if (!spec.head) return temps;

  const HeadSpec& head = *spec.head;
  const double rx =
      head.rx * (head.orientation == Orientation::kSide ? kSideWidthScale : 1.0);
  const double ry =
      head.ry * (head.orientation == Orientation::kDown ? kDownHeightScale : 1.0);
  const double delta = head.peak_temp - spec.background_temp;

  // Head pixels in occlusion order: bottom row first, left to right.
  std::vector<int> inside;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) {
      const double u = ((x + 0.5) / w - head.cx) / rx;
      const double v = ((y + 0.5) / h - head.cy) / ry;
      const double r2 = u * u + v * v;
      if (r2 > 1.0) continue;
      temps[y * w + x] = head.peak_temp - kHeadRampDrop * delta * r2;
      inside.push_back(y * w + x);
    }
  }
  if (inside.empty()) {
    throw SpecError("head ellipse has no pixel inside the frame");
  }
  const std::size_t masked =
      std::min<std::size_t>(inside.size() - 1,
                            RoundHalfAway(head.occlusion_frac * inside.size()));
  for (std::size_t i = 0; i < masked; ++i) {
    temps[inside[i]] = spec.background_temp;
  }
  return temps;
}

Scene GenerateScene(const SceneSpec& spec, std::uint64_t seed) {
  const std::vector<double> clean = SceneTemperatures(spec);
  std::mt19937_64 rng(seed);
  std::vector<std::uint16_t> raw(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double noise = spec.noise_sigma > 0 ? spec.noise_sigma * Gaussian(rng) : 0.0;
    raw[i] = CelsiusToCentiKelvin(clean[i] + noise);
  }

  std::vector<GroundTruthBox> gts;
  if (spec.head) {
    const double half =
        spec.background_temp + (spec.head->peak_temp - spec.background_temp) / 2;
    int x0 = spec.width, y0 = spec.height, x1 = -1, y1 = -1;
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        if (clean[y * spec.width + x] <= half) continue;
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
    }
    if (x1 >= 0) {
      const PixelBox box{double(x0), double(y0), double(x1 + 1), double(y1 + 1)};
      gts.push_back({kFaceClass, ToNormalizedBox(box, spec.width, spec.height)});
    }
  }
  return Scene{ThermalFrame(spec.width, spec.height, std::move(raw),
                            spec.timestamp),
               std::move(gts)};
}

void DatasetSpec::Validate() const {
  if (frames < 1) throw SpecError("dataset needs at least one frame");
  if (!(occupied_fraction >= 0.0 && occupied_fraction <= 1.0)) {
    throw SpecError("occupied_fraction must lie in [0, 1]");
  }
  if (width < 1 || height < 1) throw SpecError("frame dimensions must be >= 1");
  if (period < 1) throw SpecError("period must be >= 1 s");
  if (!(noise_sigma >= 0.0)) throw SpecError("noise_sigma must be >= 0");
  if (!(peak_temp > background_temp)) {
    throw SpecError("peak_temp must exceed background_temp");
  }
  if (scenarios.empty()) throw SpecError("at least one scenario is required");
  double total = 0;
  for (const Scenario& s : scenarios) {
    if (!(s.weight >= 0.0)) throw SpecError("scenario weights must be >= 0");
    if (!(s.occlusion >= 0.0 && s.occlusion < 1.0)) {
      throw SpecError("scenario occlusion must lie in [0, 1)");
    }
    total += s.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw SpecError("scenario weights must sum to 1");
  }
}

DatasetSpec DatasetSpec::FromJson(const std::string& text) {
  using nlohmann::json;
  DatasetSpec spec;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw SpecError("dataset spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "frames") {
        spec.frames = value.get<std::int64_t>();
      } else if (key == "occupied_fraction") {
        spec.occupied_fraction = value.get<double>();
      } else if (key == "seed") {
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "width") {
        spec.width = value.get<int>();
      } else if (key == "height") {
        spec.height = value.get<int>();
      } else if (key == "start_ts") {
        spec.start_ts = value.get<std::int64_t>();
      } else if (key == "period") {
        spec.period = value.get<std::int64_t>();
      } else if (key == "background_temp") {
        spec.background_temp = value.get<double>();
      } else if (key == "noise_sigma") {
        spec.noise_sigma = value.get<double>();
      } else if (key == "peak_temp") {
        spec.peak_temp = value.get<double>();
      } else if (key == "scenarios") {
        spec.scenarios.clear();
        for (const json& s : value) {
          Scenario sc;
          sc.orientation =
              ParseOrientation(s.value("orientation", std::string("frontal")));
          sc.occlusion = s.value("occlusion", 0.0);
          sc.weight = s.at("weight").get<double>();
          spec.scenarios.push_back(sc);
        }
      } else {
        throw SpecError("dataset spec: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("dataset spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

std::string DatasetSpec::ToJson() const {
  nlohmann::ordered_json j;
  j["frames"] = frames;
  j["occupied_fraction"] = occupied_fraction;
  j["seed"] = seed;
  j["width"] = width;
  j["height"] = height;
  j["start_ts"] = start_ts;
  j["period"] = period;
  j["background_temp"] = background_temp;
  j["noise_sigma"] = noise_sigma;
  j["peak_temp"] = peak_temp;
  j["scenarios"] = nlohmann::ordered_json::array();
  for (const Scenario& s : scenarios) j["scenarios"].push_back(ScenarioJson(s));
  return j.dump(2) + "\n";
}

std::int64_t OccupiedCount(const DatasetSpec& spec) {
  return RoundHalfAway(spec.frames * spec.occupied_fraction);
}

std::vector<SyntheticFrame> SynthesizeDataset(const DatasetSpec& spec,
                                              unsigned threads) {
  spec.Validate();
  const std::int64_t occupied = OccupiedCount(spec);
  const std::int64_t vacant = spec.frames - occupied;
  std::mt19937_64 rng(spec.seed);
  const std::vector<bool> flags = OccupancyRuns(occupied, vacant, rng);

  // Scenario quotas by cumulative rounding, then shuffled over the occupied
  // frames.
  std::vector<std::size_t> scenario_of;
  double cumulative = 0;
  std::int64_t assigned = 0;
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    cumulative += spec.scenarios[s].weight;
    const std::int64_t upto = s + 1 == spec.scenarios.size()
                                  ? occupied
                                  : RoundHalfAway(cumulative * occupied);
    for (; assigned < upto; ++assigned) scenario_of.push_back(s);
  }
  for (std::size_t i = scenario_of.size(); i > 1; --i) {
    std::swap(scenario_of[i - 1], scenario_of[UniformBelow(rng, i)]);
  }

  std::vector<SceneSpec> scenes(spec.frames);
  std::vector<std::optional<Scenario>> scenario_for(spec.frames);
  std::size_t next_occupied = 0;
  for (std::int64_t i = 0; i < spec.frames; ++i) {
    SceneSpec& s = scenes[i];
    s.width = spec.width;
    s.height = spec.height;
    s.timestamp = spec.start_ts + i * spec.period;
    s.background_temp = spec.background_temp;
    s.noise_sigma = spec.noise_sigma;
    if (!flags[i]) continue;
    const Scenario& sc = spec.scenarios[scenario_of[next_occupied++]];
    HeadSpec head;
    head.cx = Uniform(rng, 0.35, 0.65);
    head.cy = Uniform(rng, 0.35, 0.60);
    head.rx = Uniform(rng, 0.09, 0.13);
    head.ry = Uniform(rng, 0.95, 1.35) * head.rx * spec.width / spec.height;
    head.peak_temp = spec.peak_temp;
    head.occlusion_frac = sc.occlusion;
    head.orientation = sc.orientation;
    s.head = head;
    scenario_for[i] = sc;
  }

  std::vector<std::optional<SyntheticFrame>> slots(spec.frames);
  ParallelFor(slots.size(), threads, [&](std::size_t i) {
    const std::uint64_t frame_seed = SplitMix64(spec.seed ^ SplitMix64(i));
    slots[i] = SyntheticFrame{GenerateScene(scenes[i], frame_seed), flags[i],
                              scenario_for[i]};
  });
  std::vector<SyntheticFrame> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

Manifest WriteDataset(const DatasetSpec& spec,
                      const std::filesystem::path& out_dir, unsigned threads) {
  const std::vector<SyntheticFrame> frames = SynthesizeDataset(spec, threads);
  const auto frame_dir = out_dir / "frames";
  const auto label_dir = out_dir / "labels";
  EnsureDirectory(frame_dir);
  EnsureDirectory(label_dir);

  Manifest manifest(frames.size());
  ParallelFor(frames.size(), threads, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06zu", i);
    const auto frame_path = frame_dir / (std::string(name) + ".pgm");
    const auto label_path = label_dir / (std::string(name) + ".txt");
    WriteFile(frame_path, EncodeFrame(frames[i].scene.frame));
    WriteFile(label_path, SerializeLabels(frames[i].scene.gts));
    manifest[i] = ManifestRecord{std::filesystem::absolute(frame_path).lexically_normal(),
                                 std::filesystem::absolute(label_path).lexically_normal(),
                                 frames[i].occupied,
                                 frames[i].scene.frame.timestamp()};
  });
  WriteManifest(out_dir / "manifest.jsonl", manifest);
  return manifest;
}

MatchResult OracleMatch(const std::vector<Detection>& preds,
                        const std::vector<GroundTruthBox>& gts,
                        double iou_thresh, int width, int height) {
  if (preds.size() > kOracleMaxPredictions ||
      gts.size() > kOracleMaxGroundTruths) {
    throw OracleScaleError("oracle limited to 8 predictions and 5 ground truths");
  }
  auto corners = [&](const NormalizedBox& b) {
    std::array<double, 4> c{(b.cx - b.w / 2) * width, (b.cy - b.h / 2) * height,
                            (b.cx + b.w / 2) * width, (b.cy + b.h / 2) * height};
    c[0] = std::min(std::max(c[0], 0.0), double(width));
    c[2] = std::min(std::max(c[2], 0.0), double(width));
    c[1] = std::min(std::max(c[1], 0.0), double(height));
    c[3] = std::min(std::max(c[3], 0.0), double(height));
    return c;
  };
  auto overlap = [&](const NormalizedBox& a, const NormalizedBox& b) {
    const auto p = corners(a);
    const auto q = corners(b);
    const double ix = std::max(0.0, std::min(p[2], q[2]) - std::max(p[0], q[0]));
    const double iy = std::max(0.0, std::min(p[3], q[3]) - std::max(p[1], q[1]));
    const double inter = ix * iy;
    if (inter == 0.0) return 0.0;
    const double ua = (p[2] - p[0]) * (p[3] - p[1]);
    const double ub = (q[2] - q[0]) * (q[3] - q[1]);
    return inter / (ua + ub - inter);
  };
  // Clamped top-left corner, the tie-break key.
  auto top = [&](const Detection& d) { return corners(d.box)[1]; };
  auto left = [&](const Detection& d) { return corners(d.box)[0]; };

  MatchResult result;
  std::vector<bool> visited(preds.size(), false);
  std::vector<bool> taken(gts.size(), false);
  for (std::size_t step = 0; step < preds.size(); ++step) {
    std::size_t pick = preds.size();
    for (std::size_t p = 0; p < preds.size(); ++p) {
      if (visited[p]) continue;
      if (pick == preds.size()) {
        pick = p;
        continue;
      }
      const Detection& a = preds[p];
      const Detection& b = preds[pick];
      const bool better =
          a.confidence > b.confidence ||
          (a.confidence == b.confidence &&
           (top(a) < top(b) || (top(a) == top(b) && left(a) < left(b))));
      if (better) pick = p;
    }
    visited[pick] = true;
    std::optional<std::size_t> match;
    double best = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double v = overlap(preds[pick].box, gts[g].box);
      if (v >= iou_thresh && (!match || v > best)) {
        match = g;
        best = v;
      }
    }
    if (match) {
      taken[*match] = true;
      ++result.tp;
    } else {
      ++result.fp;
    }
    result.matches.push_back({pick, match});
  }
  result.fn = static_cast<std::int64_t>(gts.size()) - result.tp;
  return result;
}

}  // namespace thermocc
