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

#include "plkb/dataset.h"

#include <fstream>
#include <numeric>
#include <sstream>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "plkb/random.h"
#include "plkb/status_macros.h"

namespace plkb {

absl::StatusOr<Dataset> Dataset::Create(std::vector<std::string> features,
                                        std::vector<Instance> instances) {
  if (features.empty()) {
    return absl::InvalidArgumentError("a dataset needs at least one feature");
  }
  absl::flat_hash_set<std::string> names;
  for (const std::string& f : features) {
    if (!IsValidSymbol(f)) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid feature name '", f, "'"));
    }
    if (!names.insert(f).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate feature '", f, "'"));
    }
  }
  Domains domains;
  for (const std::string& f : features) domains[f];
  for (size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    if (inst.values.size() != features.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("instance ", i, " has ", inst.values.size(),
                       " values, expected ", features.size()));
    }
    for (size_t j = 0; j < features.size(); ++j) {
      if (!IsValidSymbol(inst.values[j])) {
        return absl::InvalidArgumentError(
            absl::StrCat("instance ", i, ": invalid value '", inst.values[j],
                         "' for feature '", features[j], "'"));
      }
      domains[features[j]].insert(inst.values[j]);
    }
  }
  return Dataset(std::move(features), std::move(instances), std::move(domains));
}

size_t Dataset::CountPositive() const {
  size_t n = 0;
  for (const Instance& inst : instances_) n += inst.label;
  return n;
}

Query Dataset::QueryOf(size_t i) const {
  Query q;
  for (size_t j = 0; j < features_.size(); ++j) {
    // Values were validated at construction.
    q.Set(features_[j], instances_[i].values[j]).IgnoreError();
  }
  return q;
}

std::vector<bool> Dataset::Labels() const {
  std::vector<bool> labels;
  labels.reserve(instances_.size());
  for (const Instance& inst : instances_) labels.push_back(inst.label);
  return labels;
}

Dataset Dataset::Select(std::span<const size_t> indices) const {
  std::vector<Instance> selected;
  selected.reserve(indices.size());
  for (size_t i : indices) selected.push_back(instances_[i]);
  // Domains are kept from the parent so that train and test share a schema.
  return Dataset(features_, std::move(selected), domains_);
}

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsvRows(
    absl::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  int line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    // A row consisting of a single empty field is a blank line.
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) {
          return absl::InvalidArgumentError(
              absl::StrCat("line ", line, ": stray quote inside field"));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError("unterminated quoted field");
  }
  if (field_started || !row.empty()) end_row();
  return rows;
}

absl::StatusOr<Dataset> ParseCsv(absl::string_view text,
                                 absl::string_view label_column,
                                 absl::string_view positive_label) {
  ASSIGN_OR_RETURN(auto rows, ParseCsvRows(text));
  if (rows.empty()) return absl::InvalidArgumentError("CSV has no header row");
  const std::vector<std::string>& header = rows.front();
  int label_index = -1;
  std::vector<std::string> features;
  for (size_t j = 0; j < header.size(); ++j) {
    if (header[j] == label_column) {
      if (label_index >= 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("label column '", label_column, "' appears twice"));
      }
      label_index = static_cast<int>(j);
    } else {
      features.push_back(header[j]);
    }
  }
  if (label_index < 0) {
    return absl::NotFoundError(
        absl::StrCat("label column '", label_column, "' not in header"));
  }
  std::vector<Instance> instances;
  instances.reserve(rows.size() - 1);
  for (size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::string>& row = rows[r];
    if (row.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, " has ", row.size(), " cells, expected ",
                       header.size()));
    }
    Instance inst;
    inst.values.reserve(features.size());
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j].empty()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "row ", r + 1, ": empty cell in column '", header[j], "'"));
      }
      if (static_cast<int>(j) == label_index) {
        inst.label = row[j] == positive_label;
      } else {
        inst.values.push_back(std::move(row[j]));
      }
    }
    instances.push_back(std::move(inst));
  }
  return Dataset::Create(std::move(features), std::move(instances));
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                absl::string_view label_column,
                                absl::string_view positive_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<Dataset> ds =
      ParseCsv(buffer.str(), label_column, positive_label);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(),
                        absl::StrCat(path, ": ", ds.status().message()));
  }
  return ds;
}

std::string ToCsv(const Dataset& ds, absl::string_view label_column,
                  absl::string_view positive_label,
                  absl::string_view negative_label) {
  // Symbols cannot contain commas, quotes never appear either.
  std::string out;
  for (const std::string& f : ds.features()) absl::StrAppend(&out, f, ",");
  absl::StrAppend(&out, label_column, "\n");
  for (const Instance& inst : ds.instances()) {
    for (const std::string& v : inst.values) absl::StrAppend(&out, v, ",");
    absl::StrAppend(&out, inst.label ? positive_label : negative_label, "\n");
  }
  return out;
}

absl::StatusOr<Dataset> Balance(const Dataset& ds, uint64_t rng_seed) {
  std::vector<size_t> positives;
  std::vector<size_t> negatives;
  for (size_t i = 0; i < ds.size(); ++i) {
    (ds.instances()[i].label ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty()) {
    return absl::FailedPreconditionError(
        "cannot balance a dataset with an empty class");
  }
  const std::vector<size_t>& smaller =
      positives.size() < negatives.size() ? positives : negatives;
  const size_t missing = std::max(positives.size(), negatives.size()) -
                         std::min(positives.size(), negatives.size());
  std::vector<size_t> indices(ds.size());
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(rng_seed);
  for (size_t k = 0; k < missing; ++k) {
    indices.push_back(smaller[rng.UniformIndex(smaller.size())]);
  }
  return ds.Select(indices);
}

absl::StatusOr<std::pair<Dataset, Dataset>> Split(const Dataset& ds,
                                                  double train_fraction,
                                                  uint64_t rng_seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    return absl::InvalidArgumentError("train_fraction must be in (0,1)");
  }
  std::vector<size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(rng_seed);
  rng.Shuffle(std::span<size_t>(order));
  const auto n_train =
      static_cast<size_t>(std::floor(train_fraction * static_cast<double>(ds.size())));
  std::span<const size_t> all(order);
  return std::make_pair(ds.Select(all.first(n_train)),
                        ds.Select(all.subspan(n_train)));
}

}  // namespace plkb
