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

// Knowledge bases counted directly from data: one rule
// `pos | !a1=v1 | ... | !ak=vk` for every feature-value combination observed
// in at least one training instance, weighted by the fraction of matching
// instances that are positive.

#ifndef PLKB_DIRECT_KB_H_
#define PLKB_DIRECT_KB_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "plkb/dataset.h"
#include "plkb/kb.h"
#include "plkb/query.h"

namespace plkb {

struct SubsetCounts {
  int64_t n_total = 0;
  int64_t n_positive = 0;

  friend bool operator==(const SubsetCounts&, const SubsetCounts&) = default;
};

// Label counts keyed by sets of feature-value pairs of one schema.
class SubsetCounter {
 public:
  // Without `max_arity` every subset is counted; that needs at most 20
  // features.
  static absl::StatusOr<SubsetCounter> Create(const Dataset& schema,
                                              std::optional<int> max_arity);

  // Counts every non-empty subset of the instance's pairs up to max_arity.
  void AddInstance(const Instance& instance);
  // Counts of `other` (same schema and arity) are added to this counter.
  absl::Status MergeFrom(const SubsetCounter& other);

  size_t size() const { return counts_.size(); }
  // Counts for the subset given as a partial query, if observed.
  std::optional<SubsetCounts> Lookup(const Query& subset) const;

  // One clause per key, with exact probability n_positive / n_total. Keys
  // are emitted in a fixed order, so equal counters give equal bases.
  absl::StatusOr<KnowledgeBase> ToKb() const;

  friend bool operator==(const SubsetCounter& a, const SubsetCounter& b) {
    return a.features_ == b.features_ && a.values_ == b.values_ &&
           a.counts_ == b.counts_;
  }

 private:
  SubsetCounter() = default;

  // Sorted feature names and their sorted domains.
  std::vector<std::string> features_;
  std::vector<std::vector<std::string>> values_;
  // Dataset column of each sorted feature.
  std::vector<size_t> columns_;
  int max_arity_ = 0;
  // One byte per sorted feature: 0 when absent, else value index + 1.
  absl::flat_hash_map<std::string, SubsetCounts> counts_;
};

struct DirectKbOptions {
  std::optional<int> max_arity;
  // Instances are split into this many partitions whose counters are merged.
  int num_threads = 1;
};

absl::StatusOr<KnowledgeBase> BuildDirectKb(const Dataset& train,
                                            const DirectKbOptions& options = {});

// Clauses of `kb` whose body (the negated feature-value literals after
// `pos`) is a non-empty subset of the query's pairs, found by looking up
// each subset. Subsets larger than `max_arity` are skipped.
absl::StatusOr<KnowledgeBase> RelevantKb(const Query& query,
                                         const KnowledgeBase& kb,
                                         std::optional<int> max_arity = {});

}  // namespace plkb

#endif  // PLKB_DIRECT_KB_H_
