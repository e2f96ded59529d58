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

#ifndef PLKB_QUERY_H_
#define PLKB_QUERY_H_

#include <map>
#include <set>
#include <string>
#include "absl/strings/string_view.h"
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "plkb/kb.h"

namespace plkb {

// Observed values per feature.
using Domains = std::map<std::string, std::set<std::string>>;

// Partial assignment of feature values. Features absent from the query are
// unknown.
class Query {
 public:
  Query() = default;

  // Parses `a1=0,a2=1`. Whitespace around items is ignored.
  static absl::StatusOr<Query> Parse(absl::string_view text);

  absl::Status Set(std::string feature, std::string value);
  void Erase(const std::string& feature) { assignments_.erase(feature); }

  const std::map<std::string, std::string>& assignments() const {
    return assignments_;
  }
  size_t size() const { return assignments_.size(); }
  bool empty() const { return assignments_.empty(); }
  bool Contains(const std::string& feature) const {
    return assignments_.contains(feature);
  }

  // Feature-value atoms of the query, in canonical order.
  absl::StatusOr<std::vector<Atom>> Atoms() const;

  // `a1=0,a2=1`, features in lexicographic order.
  std::string ToString() const;

  // Sub-query holding the assignments selected by `mask` (bit i selects the
  // i-th assignment in feature order).
  Query Subset(uint64_t mask) const;

  friend bool operator==(const Query& a, const Query& b) = default;

 private:
  std::map<std::string, std::string> assignments_;
};

// Value domains implied by the feature-value atoms of a knowledge base.
Domains DomainsFromKb(const KnowledgeBase& kb);

}  // namespace plkb

#endif  // PLKB_QUERY_H_
