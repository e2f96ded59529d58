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

#ifndef PLKB_DATASET_H_
#define PLKB_DATASET_H_

#include <cstdint>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "plkb/query.h"

namespace plkb {

// One labelled example. `values[i]` is the value of the i-th feature of the
// owning dataset.
struct Instance {
  std::vector<std::string> values;
  bool label = false;

  friend bool operator==(const Instance& a, const Instance& b) = default;
};

// Categorical examples with binary labels. Feature values are opaque
// strings.
class Dataset {
 public:
  // Checks that every instance has one valid value per feature.
  static absl::StatusOr<Dataset> Create(std::vector<std::string> features,
                                        std::vector<Instance> instances);

  const std::vector<std::string>& features() const { return features_; }
  const std::vector<Instance>& instances() const { return instances_; }
  const Domains& domains() const { return domains_; }
  size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }

  size_t CountPositive() const;
  // Full query for instance `i`.
  Query QueryOf(size_t i) const;
  std::vector<bool> Labels() const;

  // Dataset with the same schema holding the selected instances.
  Dataset Select(std::span<const size_t> indices) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.features_ == b.features_ && a.instances_ == b.instances_;
  }

 private:
  Dataset(std::vector<std::string> features, std::vector<Instance> instances,
          Domains domains)
      : features_(std::move(features)),
        instances_(std::move(instances)),
        domains_(std::move(domains)) {}

  std::vector<std::string> features_;
  std::vector<Instance> instances_;
  Domains domains_;
};

// Reads an RFC 4180 CSV with a header row. Every column except
// `label_column` becomes a categorical feature; an instance is positive iff
// its label cell equals `positive_label`. Empty cells are rejected.
absl::StatusOr<Dataset> ParseCsv(absl::string_view text,
                                 absl::string_view label_column,
                                 absl::string_view positive_label);
absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                absl::string_view label_column,
                                absl::string_view positive_label);

// Raw CSV rows, header included.
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRows(
    absl::string_view text);

// Writes the dataset with a trailing label column.
std::string ToCsv(const Dataset& ds, absl::string_view label_column,
                  absl::string_view positive_label,
                  absl::string_view negative_label);

// Replicates uniformly drawn members of the smaller class until both classes
// have the same size. The original instances come first, unchanged.
absl::StatusOr<Dataset> Balance(const Dataset& ds, uint64_t rng_seed);

// Shuffles, then puts the first floor(train_fraction * n) instances in the
// training set.
absl::StatusOr<std::pair<Dataset, Dataset>> Split(const Dataset& ds,
                                                  double train_fraction,
                                                  uint64_t rng_seed);

}  // namespace plkb

#endif  // PLKB_DATASET_H_
