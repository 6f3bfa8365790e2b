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
#ifndef THERMOCC_SPLIT_H_
#define THERMOCC_SPLIT_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "thermocc/manifest.h"

namespace thermocc {

struct SplitFractions {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;

  // Each in (0, 1), summing to 1 within 1e-9; ConfigError otherwise.
  void Validate() const;
};

// Record ids are indices into the manifest, ascending within each subset.
struct SplitAssignment {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct StratumCounts {
  std::int64_t train = 0;
  std::int64_t val = 0;
  std::int64_t test = 0;

  friend bool operator==(const StratumCounts&, const StratumCounts&) = default;
};

// val = round(n * f_val), test = round(n * f_test), train = the remainder.
// Halves round away from zero. Throws InfeasibleSplitError if train <= 0.
StratumCounts StratumQuota(std::int64_t n, const SplitFractions& fractions);

// Stratifies on the occupied flag, then assigns members of each stratum by a
// seeded Fisher-Yates shuffle (std::mt19937_64 with rejection-sampled bounded
// draws, so splits agree across platforms). Empty strata are skipped.
SplitAssignment StratifiedSplit(const Manifest& manifest,
                                const SplitFractions& fractions,
                                std::uint64_t seed);

struct SubsetRatio {
  std::string name;
  std::int64_t occupied = 0;
  std::int64_t unoccupied = 0;
  double ratio = 0;  // +inf when unoccupied == 0
  bool consistent = true;
};

struct RatioReport {
  std::vector<SubsetRatio> subsets;  // train, val, test
  std::int64_t total_occupied = 0;
  std::int64_t total_unoccupied = 0;
  double overall_ratio = 0;
  bool all_consistent = true;
};

// Checks each subset's occupied/unoccupied counts against the exact quota
// implied by its size; a subset is consistent when both counts are within 1
// of that quota. A subset with no unoccupied frames is flagged unless the
// whole manifest has none. Throws IntegrityError if the assignment is not a
// partition of the manifest.
RatioReport VerifyRatio(const SplitAssignment& assignment,
                        const Manifest& manifest);

// Uniform draw in [0, bound) without modulo bias.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound);

// JSON text of a ratio report (infinite ratios are written as null).
std::string RatioReportToJson(const RatioReport& report);

}  // namespace thermocc

#endif  // THERMOCC_SPLIT_H_
