// Copyright 2026 The plkb Authors.
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

// Seed-string benchmark with known ground truth. Instances are strings over
// the symbols 1..alphabet_size; feature `a<i>` holds the i-th symbol (1-based).
// A string is positive iff it agrees with a hidden seed string in exactly
// `match_count` positions.

#ifndef PLKB_SYNTHETIC_H_
#define PLKB_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "plkb/dataset.h"

namespace plkb {

struct SeedSpec {
  std::string seed;
  int length = 0;
  int alphabet_size = 0;
  int match_count = 0;

  // Checks the seed against length and alphabet. Alphabets are limited to
  // the single-digit symbols 1..9.
  absl::Status Validate() const;
  // Uniformly random seed.
  static absl::StatusOr<SeedSpec> Random(int length, int alphabet_size,
                                         int match_count, uint64_t rng_seed);
};

std::string SyntheticFeatureName(int position);  // 0-based -> "a1"...
// Inverse of SyntheticFeatureName.
absl::StatusOr<int> SyntheticPosition(absl::string_view feature);

absl::StatusOr<bool> LabelSynthetic(absl::string_view s, const SeedSpec& spec);

// Draws uniform strings and keeps them until n_samples/2 positives and the
// remaining negatives are collected, in draw order.
absl::StatusOr<Dataset> GenerateSynthetic(const SeedSpec& spec, int n_samples,
                                          uint64_t rng_seed);

// Symbol string of a synthetic instance, in position order.
std::string SyntheticString(const Dataset& ds, size_t index);

// Sidecar format: `seed=`, `length=`, `alphabet=`, `match=` lines.
std::string SeedSpecToText(const SeedSpec& spec);
absl::StatusOr<SeedSpec> SeedSpecFromText(absl::string_view text);

inline constexpr absl::string_view kSyntheticLabelColumn = "label";
inline constexpr absl::string_view kSyntheticPositive = "pos";
inline constexpr absl::string_view kSyntheticNegative = "neg";

// Writes <dir>/data.csv and <dir>/seed.txt.
absl::Status WriteSyntheticExport(const std::string& dir, const Dataset& ds,
                                  const SeedSpec& spec);
struct SyntheticExport {
  Dataset data;
  SeedSpec spec;
};
absl::StatusOr<SyntheticExport> ReadSyntheticExport(const std::string& dir);

}  // namespace plkb

#endif  // PLKB_SYNTHETIC_H_
