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
#include "thermocc/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "thermocc/annot.h"
#include "thermocc/detect.h"
#include "thermocc/errors.h"
#include "thermocc/frame.h"
#include "thermocc/io.h"
#include "thermocc/manifest.h"
#include "thermocc/metrics.h"
#include "thermocc/occupancy.h"
#include "thermocc/parallel.h"
#include "thermocc/plots.h"
#include "thermocc/split.h"
#include "thermocc/synth.h"

namespace thermocc {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string spec;
  std::string manifest;
  std::string preds;
  std::string out;
  std::string detector_config;
  std::string policy;
  std::string plot;
  std::vector<double> fractions{0.6, 0.2, 0.2};
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tau = kDefaultOperatingTau;
  unsigned threads = 0;
};

// THERMOCC_SEED wins over --seed.
std::optional<std::uint64_t> EffectiveSeed(const RunConfig& cfg) {
  if (const char* env = std::getenv("THERMOCC_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw ConfigError(std::string("THERMOCC_SEED is not an integer: ") + env);
    }
  }
  if (cfg.seed_given) return cfg.seed;
  return std::nullopt;
}

SplitFractions ToFractions(const std::vector<double>& f) {
  if (f.size() != 3) throw ConfigError("--fractions needs train,val,test");
  SplitFractions fr{f[0], f[1], f[2]};
  fr.Validate();
  return fr;
}

DetectorConfig LoadDetectorConfig(const std::string& path) {
  if (path.empty()) return DetectorConfig{};
  return DetectorConfig::FromJson(ReadFile(path));
}

ControlPolicy LoadPolicy(const std::string& path) {
  if (path.empty()) return ControlPolicy{};
  return ControlPolicy::FromJson(ReadFile(path));
}

void CheckDistinctStems(const Manifest& manifest) {
  std::set<std::string> stems;
  for (const ManifestRecord& r : manifest) {
    if (!stems.insert(r.frame.stem().string()).second) {
      throw IntegrityError("two manifest frames share the file stem '" +
                           r.frame.stem().string() + "'");
    }
  }
}

Manifest Subset(const Manifest& manifest, const std::vector<std::size_t>& ids) {
  Manifest out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(manifest[id]);
  return out;
}

// --- steps shared by the individual subcommands and `pipeline` ---

void WriteSplit(const Manifest& manifest, const SplitFractions& fractions,
                std::uint64_t seed, const fs::path& out_dir, std::ostream& out) {
  const SplitAssignment a = StratifiedSplit(manifest, fractions, seed);
  const RatioReport report = VerifyRatio(a, manifest);
  EnsureDirectory(out_dir);
  WriteManifest(out_dir / "train.jsonl", Subset(manifest, a.train));
  WriteManifest(out_dir / "val.jsonl", Subset(manifest, a.val));
  WriteManifest(out_dir / "test.jsonl", Subset(manifest, a.test));
  WriteFile(out_dir / "ratio_report.json", RatioReportToJson(report));
  for (const SubsetRatio& s : report.subsets) {
    out << "split " << s.name << ": " << s.occupied << " occupied / "
        << s.unoccupied << " unoccupied"
        << (s.consistent ? "" : " (ratio flagged)") << "\n";
  }
}

std::vector<std::vector<Detection>> DetectAll(const Manifest& manifest,
                                              const DetectorConfig& cfg,
                                              unsigned threads) {
  std::vector<std::vector<Detection>> dets(manifest.size());
  ParallelFor(manifest.size(), threads, [&](std::size_t i) {
    const ThermalFrame frame = DecodeFrame(ReadFile(manifest[i].frame));
    dets[i] = DetectBlobs(frame, cfg);
  });
  return dets;
}

void WritePredictions(const Manifest& manifest,
                      const std::vector<std::vector<Detection>>& dets,
                      const fs::path& out_dir) {
  EnsureDirectory(out_dir);
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    WriteFile(PredictionPathFor(manifest[i], out_dir),
              SerializePredictions(dets[i]));
  }
}

void WriteEval(const Manifest& manifest, const fs::path& preds_dir, double tau,
               const fs::path& report_path, const std::string& plot_path,
               std::ostream& out) {
  const std::vector<ImageEval> images = LoadEvalSet(manifest, preds_dir);
  const EvalReport report = Evaluate(images, tau);
  std::string svg;
  if (!plot_path.empty()) {
    const double iou50 = IouThresholds()[0];
    svg = PrCurveSvg(BuildPrCurve(images, iou50), report.map50, iou50);
  }
  if (report_path.has_parent_path()) EnsureDirectory(report_path.parent_path());
  WriteFile(report_path, EvalReportToJson(report));
  if (!svg.empty()) WriteFile(plot_path, svg);
  char line[160];
  std::snprintf(line, sizeof(line),
                "precision %.3f  recall %.3f  mAP50 %.3f  mAP50-95 %.3f\n",
                report.precision, report.recall, report.map50,
                report.map50_95);
  out << line;
}

void WriteOccupancy(const Manifest& manifest, const fs::path& preds_dir,
                    double tau, const ControlPolicy& policy,
                    const fs::path& out_dir, std::ostream& out) {
  Manifest sorted = manifest;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ManifestRecord& a, const ManifestRecord& b) {
                     return a.ts < b.ts;
                   });
  std::vector<std::int64_t> ts;
  std::vector<std::vector<Detection>> dets;
  OccupancyTimeline actual;
  for (const ManifestRecord& r : sorted) {
    ts.push_back(r.ts);
    actual.points.push_back({r.ts, r.occupied});
    const fs::path p = PredictionPathFor(r, preds_dir);
    dets.push_back(fs::exists(p) ? ParsePredictions(ReadFile(p))
                                 : std::vector<Detection>{});
  }
  actual.Validate();
  const OccupancyTimeline detected = BuildTimeline(ts, dets, tau);
  const OccupancyConfusion confusion = Compare(actual, detected);
  const HvacSchedule schedule = SimulateControl(detected, policy);

  EnsureDirectory(out_dir);
  WriteFile(out_dir / "timeline.csv", TimelineCsv(actual, detected));
  WriteFile(out_dir / "schedule.csv", ScheduleCsv(schedule));
  WriteFile(out_dir / "occupancy.json", ConfusionToJson(confusion, schedule));
  WriteFile(out_dir / "occupancy.svg", OccupancySvg(actual, detected));
  char line[160];
  std::snprintf(line, sizeof(line),
                "frames %zu  missed occupied %lld  false alarms %lld  hvac "
                "on-fraction %.3f\n",
                actual.size(), static_cast<long long>(confusion.missed_occupied),
                static_cast<long long>(confusion.fp), schedule.on_fraction);
  out << line;
}

// --- subcommands ---

void Synth(const RunConfig& cfg, std::ostream& out) {
  DatasetSpec spec = DatasetSpec::FromJson(ReadFile(cfg.spec));
  if (auto seed = EffectiveSeed(cfg)) spec.seed = *seed;
  const Manifest m = WriteDataset(spec, cfg.out, cfg.threads);
  const auto occupied =
      std::count_if(m.begin(), m.end(), [](const auto& r) { return r.occupied; });
  out << "synth: " << m.size() << " frames (" << occupied << " occupied)\n";
}

void Split(const RunConfig& cfg, std::ostream& out) {
  const Manifest manifest = ReadManifest(cfg.manifest);
  const SplitFractions fractions = ToFractions(cfg.fractions);
  WriteSplit(manifest, fractions, EffectiveSeed(cfg).value_or(0), cfg.out, out);
}

void Detect(const RunConfig& cfg, std::ostream& out) {
  const Manifest manifest = ReadManifest(cfg.manifest);
  const DetectorConfig det = LoadDetectorConfig(cfg.detector_config);
  CheckDistinctStems(manifest);
  const auto dets = DetectAll(manifest, det, cfg.threads);
  WritePredictions(manifest, dets, cfg.out);
  out << "detect: " << manifest.size() << " frames\n";
}

void Eval(const RunConfig& cfg, std::ostream& out) {
  const Manifest manifest = ReadManifest(cfg.manifest);
  WriteEval(manifest, cfg.preds, cfg.tau, cfg.out, cfg.plot, out);
}

void Occupancy(const RunConfig& cfg, std::ostream& out) {
  const Manifest manifest = ReadManifest(cfg.manifest);
  const ControlPolicy policy = LoadPolicy(cfg.policy);
  WriteOccupancy(manifest, cfg.preds, cfg.tau, policy, cfg.out, out);
}

void Pipeline(const RunConfig& cfg, std::ostream& out) {
  DatasetSpec spec = DatasetSpec::FromJson(ReadFile(cfg.spec));
  const std::optional<std::uint64_t> seed = EffectiveSeed(cfg);
  if (seed) spec.seed = *seed;
  const SplitFractions fractions = ToFractions(cfg.fractions);
  const DetectorConfig det = LoadDetectorConfig(cfg.detector_config);
  const ControlPolicy policy = LoadPolicy(cfg.policy);

  const fs::path root = cfg.out;
  const Manifest all = WriteDataset(spec, root / "data", cfg.threads);
  out << "synth: " << all.size() << " frames\n";
  WriteSplit(all, fractions, spec.seed, root / "splits", out);

  const Manifest test = ReadManifest(root / "splits" / "test.jsonl");
  const auto dets = DetectAll(test, det, cfg.threads);
  WritePredictions(test, dets, root / "preds");
  WriteEval(test, root / "preds", cfg.tau, root / "report.json",
            (root / "pr_curve.svg").string(), out);
  WriteOccupancy(test, root / "preds", cfg.tau, policy, root / "occupancy", out);
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Occupancy detection on low-resolution thermal frames",
               "thermocc"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "Worker cap (0 = all cores)");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& v) {
          cfg.seed = v;
          cfg.seed_given = true;
        },
        "Random seed (THERMOCC_SEED overrides)");
  };
  auto add_tau = [&](CLI::App* sub) {
    sub->add_option("--tau", cfg.tau, "Operating confidence threshold")
        ->check(CLI::Range(0.0, 1.0));
  };
  auto add_fractions = [&](CLI::App* sub) {
    sub->add_option("--fractions", cfg.fractions, "train,val,test")
        ->delimiter(',')
        ->expected(3);
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--spec", cfg.spec, "Dataset spec JSON")->required();
  synth->add_option("--out", cfg.out, "Output directory")->required();
  add_seed(synth);
  add_threads(synth);

  auto* split = app.add_subcommand("split", "Stratified train/val/test split");
  split->add_option("--manifest", cfg.manifest)->required();
  split->add_option("--out", cfg.out, "Output directory")->required();
  add_fractions(split);
  add_seed(split);

  auto* detect = app.add_subcommand("detect", "Run the blob detector");
  detect->add_option("--manifest", cfg.manifest)->required();
  detect->add_option("--config", cfg.detector_config, "Detector config JSON");
  detect->add_option("--out", cfg.out, "Prediction directory")->required();
  add_threads(detect);

  auto* eval = app.add_subcommand("eval", "Precision, recall and mAP");
  eval->add_option("--manifest", cfg.manifest)->required();
  eval->add_option("--preds", cfg.preds, "Prediction directory")->required();
  eval->add_option("--out", cfg.out, "Report JSON path")->required();
  eval->add_option("--plot", cfg.plot, "Optional PR-curve SVG path");
  add_tau(eval);

  auto* occupancy =
      app.add_subcommand("occupancy", "Occupancy timeline and HVAC schedule");
  occupancy->add_option("--manifest", cfg.manifest)->required();
  occupancy->add_option("--preds", cfg.preds, "Prediction directory")
      ->required();
  occupancy->add_option("--policy", cfg.policy, "Control policy JSON");
  occupancy->add_option("--out", cfg.out, "Output directory")->required();
  add_tau(occupancy);

  auto* pipeline =
      app.add_subcommand("pipeline", "synth -> split -> detect -> eval -> occupancy");
  pipeline->add_option("--spec", cfg.spec, "Dataset spec JSON")->required();
  pipeline->add_option("--out", cfg.out, "Run directory")->required();
  pipeline->add_option("--config", cfg.detector_config, "Detector config JSON");
  pipeline->add_option("--policy", cfg.policy, "Control policy JSON");
  add_fractions(pipeline);
  add_seed(pipeline);
  add_tau(pipeline);
  add_threads(pipeline);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "thermocc: " << e.what() << "\n" << app.help();
    return kExitInputError;
  }

  const std::map<CLI::App*, void (*)(const RunConfig&, std::ostream&)> commands = {
      {synth, Synth},   {split, Split},         {detect, Detect},
      {eval, Eval},     {occupancy, Occupancy}, {pipeline, Pipeline}};
  try {
    for (const auto& [sub, fn] : commands) {
      if (sub->parsed()) fn(cfg, out);
    }
  } catch (const Error& e) {
    err << "thermocc: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "thermocc: internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace thermocc
