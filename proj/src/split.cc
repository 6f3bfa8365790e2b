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
#include "thermocc/split.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "thermocc/errors.h"

namespace thermocc {
namespace {

// Half-away-from-zero for the non-negative quotas used here. The slack keeps
// products such as 5 * 0.1 on the intended side of .5.
std::int64_t RoundQuota(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5 + 1e-9));
}

void Shuffle(std::vector<std::size_t>& ids, std::mt19937_64& rng) {
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = UniformBelow(rng, i);
    std::swap(ids[i - 1], ids[j]);
  }
}

}  // namespace

void SplitFractions::Validate() const {
  for (double f : {train, val, test}) {
    if (!(f > 0.0 && f < 1.0)) {
      throw ConfigError("split fractions must each lie in (0, 1)");
    }
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
}

std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

StratumCounts StratumQuota(std::int64_t n, const SplitFractions& fractions) {
  StratumCounts c;
  c.val = RoundQuota(n * fractions.val);
  c.test = RoundQuota(n * fractions.test);
  c.train = n - c.val - c.test;
  if (c.train <= 0) {
    throw InfeasibleSplitError("stratum of " + std::to_string(n) +
                               " records leaves no training samples");
  }
  return c;
}

SplitAssignment StratifiedSplit(const Manifest& manifest,
                                const SplitFractions& fractions,
                                std::uint64_t seed) {
  fractions.Validate();
  if (manifest.empty()) throw ConfigError("cannot split an empty manifest");

  std::vector<std::size_t> strata[2];
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    strata[manifest[i].occupied ? 0 : 1].push_back(i);
  }

  std::mt19937_64 rng(seed);
  SplitAssignment out;
  for (auto& ids : strata) {
    if (ids.empty()) continue;
    const StratumCounts counts = StratumQuota(
        static_cast<std::int64_t>(ids.size()), fractions);
    Shuffle(ids, rng);
    auto it = ids.begin();
    out.val.insert(out.val.end(), it, it + counts.val);
    it += counts.val;
    out.test.insert(out.test.end(), it, it + counts.test);
    it += counts.test;
    out.train.insert(out.train.end(), it, ids.end());
  }
  for (auto* subset : {&out.train, &out.val, &out.test}) {
    std::sort(subset->begin(), subset->end());
  }
  return out;
}

RatioReport VerifyRatio(const SplitAssignment& assignment,
                        const Manifest& manifest) {
  std::vector<int> seen(manifest.size(), 0);
  for (const auto* subset :
       {&assignment.train, &assignment.val, &assignment.test}) {
    for (std::size_t id : *subset) {
      if (id >= manifest.size()) {
        throw IntegrityError("record id " + std::to_string(id) +
                             " is outside the manifest");
      }
      if (++seen[id] > 1) {
        throw IntegrityError("record id " + std::to_string(id) +
                             " is assigned more than once");
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw IntegrityError("assignment does not cover the manifest");
  }

  RatioReport report;
  for (const ManifestRecord& r : manifest) {
    (r.occupied ? report.total_occupied : report.total_unoccupied) += 1;
  }
  auto ratio = [](std::int64_t occ, std::int64_t unocc) {
    return unocc == 0 ? std::numeric_limits<double>::infinity()
                      : static_cast<double>(occ) / unocc;
  };
  report.overall_ratio = ratio(report.total_occupied, report.total_unoccupied);

  const double total = static_cast<double>(manifest.size());
  const std::pair<const char*, const std::vector<std::size_t>*> named[] = {
      {"train", &assignment.train},
      {"val", &assignment.val},
      {"test", &assignment.test}};
  for (const auto& [name, ids] : named) {
    SubsetRatio s;
    s.name = name;
    for (std::size_t id : *ids) {
      (manifest[id].occupied ? s.occupied : s.unoccupied) += 1;
    }
    s.ratio = ratio(s.occupied, s.unoccupied);
    const double share = ids->size() / total;
    const double occ_quota = report.total_occupied * share;
    const double unocc_quota = report.total_unoccupied * share;
    constexpr double kSlack = 1.0 + 1e-9;
    s.consistent = std::abs(s.occupied - occ_quota) <= kSlack &&
                   std::abs(s.unoccupied - unocc_quota) <= kSlack;
    if (s.unoccupied == 0 && report.total_unoccupied > 0) s.consistent = false;
    report.all_consistent = report.all_consistent && s.consistent;
    report.subsets.push_back(std::move(s));
  }
  return report;
}

std::string RatioReportToJson(const RatioReport& report) {
  using json = nlohmann::ordered_json;
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
  };
  json j;
  j["overall"] = {{"occupied", report.total_occupied},
                  {"unoccupied", report.total_unoccupied},
                  {"ratio", finite_or_null(report.overall_ratio)}};
  j["all_consistent"] = report.all_consistent;
  json subsets = json::array();
  for (const SubsetRatio& s : report.subsets) {
    subsets.push_back({{"name", s.name},
                       {"occupied", s.occupied},
                       {"unoccupied", s.unoccupied},
                       {"ratio", finite_or_null(s.ratio)},
                       {"consistent", s.consistent}});
  }
  j["subsets"] = subsets;
  return j.dump(2) + "\n";
}

}  // namespace thermocc
