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

#include "plkb/direct_kb.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <thread>

#include "absl/strings/str_cat.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

constexpr int kMaxUnboundedFeatures = 20;
constexpr int kMaxRelevantQuerySize = 24;
constexpr size_t kMaxValuesPerFeature = 255;

// Calls fn(mask) for every non-empty mask over n bits with at most
// `max_bits` bits set.
template <typename Fn>
void ForEachSubset(int n, int max_bits, Fn&& fn) {
  if (max_bits >= n) {
    const uint64_t end = uint64_t{1} << n;
    for (uint64_t mask = 1; mask < end; ++mask) fn(mask);
    return;
  }
  for (int k = 1; k <= max_bits; ++k) {
    // Gosper's hack enumerates the k-bit masks in increasing order.
    uint64_t mask = (uint64_t{1} << k) - 1;
    const uint64_t limit = uint64_t{1} << n;
    while (mask < limit) {
      fn(mask);
      const uint64_t c = mask & -mask;
      const uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
}

}  // namespace

absl::StatusOr<SubsetCounter> SubsetCounter::Create(
    const Dataset& schema, std::optional<int> max_arity) {
  const int n = static_cast<int>(schema.features().size());
  if (max_arity.has_value() && *max_arity < 1) {
    return absl::InvalidArgumentError("max_arity must be at least 1");
  }
  if (!max_arity.has_value() && n > kMaxUnboundedFeatures) {
    return absl::InvalidArgumentError(
        absl::StrCat(n, " features need an explicit max_arity (at most ",
                     kMaxUnboundedFeatures, " are enumerated exhaustively)"));
  }
  if (n > 63) return absl::InvalidArgumentError("at most 63 features");
  SubsetCounter counter;
  counter.max_arity_ = std::min(max_arity.value_or(n), n);
  counter.columns_.resize(n);
  std::iota(counter.columns_.begin(), counter.columns_.end(), 0);
  std::sort(counter.columns_.begin(), counter.columns_.end(),
            [&](size_t a, size_t b) {
              return schema.features()[a] < schema.features()[b];
            });
  for (size_t col : counter.columns_) {
    const std::string& f = schema.features()[col];
    const std::set<std::string>& domain = schema.domains().at(f);
    if (domain.size() > kMaxValuesPerFeature) {
      return absl::InvalidArgumentError(absl::StrCat(
          "feature '", f, "' has more than ", kMaxValuesPerFeature, " values"));
    }
    counter.features_.push_back(f);
    counter.values_.emplace_back(domain.begin(), domain.end());
  }
  return counter;
}

void SubsetCounter::AddInstance(const Instance& instance) {
  const int n = static_cast<int>(features_.size());
  std::string full(n, '\0');
  for (int k = 0; k < n; ++k) {
    const std::vector<std::string>& domain = values_[k];
    const auto it = std::lower_bound(domain.begin(), domain.end(),
                                     instance.values[columns_[k]]);
    full[k] = static_cast<char>(it - domain.begin() + 1);
  }
  std::string key(n, '\0');
  ForEachSubset(n, max_arity_, [&](uint64_t mask) {
    for (int k = 0; k < n; ++k) key[k] = (mask >> k) & 1 ? full[k] : '\0';
    SubsetCounts& c = counts_[key];
    ++c.n_total;
    c.n_positive += instance.label;
  });
}

absl::Status SubsetCounter::MergeFrom(const SubsetCounter& other) {
  if (features_ != other.features_ || values_ != other.values_ ||
      max_arity_ != other.max_arity_) {
    return absl::InvalidArgumentError("counters have different schemas");
  }
  for (const auto& [key, c] : other.counts_) {
    SubsetCounts& mine = counts_[key];
    mine.n_total += c.n_total;
    mine.n_positive += c.n_positive;
  }
  return absl::OkStatus();
}

std::optional<SubsetCounts> SubsetCounter::Lookup(const Query& subset) const {
  std::string key(features_.size(), '\0');
  for (const auto& [feature, value] : subset.assignments()) {
    const auto f = std::lower_bound(features_.begin(), features_.end(), feature);
    if (f == features_.end() || *f != feature) return std::nullopt;
    const size_t k = f - features_.begin();
    const auto v = std::lower_bound(values_[k].begin(), values_[k].end(), value);
    if (v == values_[k].end() || *v != value) return std::nullopt;
    key[k] = static_cast<char>(v - values_[k].begin() + 1);
  }
  const auto it = counts_.find(key);
  if (it == counts_.end()) return std::nullopt;
  return it->second;
}

absl::StatusOr<KnowledgeBase> SubsetCounter::ToKb() const {
  std::vector<std::vector<Atom>> atoms(features_.size());
  for (size_t k = 0; k < features_.size(); ++k) {
    for (const std::string& v : values_[k]) {
      ASSIGN_OR_RETURN(Atom a, Atom::FeatureValue(features_[k], v));
      atoms[k].push_back(a);
    }
  }
  std::vector<const std::pair<const std::string, SubsetCounts>*> entries;
  entries.reserve(counts_.size());
  for (const auto& entry : counts_) entries.push_back(&entry);
  std::sort(entries.begin(), entries.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  KnowledgeBaseBuilder builder(DuplicatePolicy::kRejectConflicting);
  std::vector<Literal> literals;
  for (const auto* entry : entries) {
    const std::string& key = entry->first;
    literals.clear();
    literals.push_back({Atom::Class(), false});
    // Features are sorted and each appears at most once, so the literals are
    // already canonical.
    for (size_t k = 0; k < key.size(); ++k) {
      if (key[k] == '\0') continue;
      literals.push_back({atoms[k][static_cast<unsigned char>(key[k]) - 1], true});
    }
    const SubsetCounts& c = entry->second;
    RETURN_IF_ERROR(builder.AddCanonical(
        literals, static_cast<double>(c.n_positive) / c.n_total));
  }
  return std::move(builder).Build();
}

absl::StatusOr<KnowledgeBase> BuildDirectKb(const Dataset& train,
                                            const DirectKbOptions& options) {
  if (train.empty()) {
    return absl::InvalidArgumentError("cannot build a knowledge base from no data");
  }
  ASSIGN_OR_RETURN(SubsetCounter counter,
                   SubsetCounter::Create(train, options.max_arity));
  const size_t parts = std::clamp<size_t>(options.num_threads, 1, train.size());
  if (parts == 1) {
    for (const Instance& inst : train.instances()) counter.AddInstance(inst);
    return counter.ToKb();
  }
  std::vector<SubsetCounter> partial(parts, counter);
  {
    std::vector<std::jthread> workers;
    for (size_t p = 0; p < parts; ++p) {
      workers.emplace_back([&, p] {
        for (size_t i = p; i < train.size(); i += parts) {
          partial[p].AddInstance(train.instances()[i]);
        }
      });
    }
  }
  for (const SubsetCounter& part : partial) {
    RETURN_IF_ERROR(counter.MergeFrom(part));
  }
  return counter.ToKb();
}

absl::StatusOr<KnowledgeBase> RelevantKb(const Query& query,
                                         const KnowledgeBase& kb,
                                         std::optional<int> max_arity) {
  const int q = static_cast<int>(query.size());
  const int cap = std::min(max_arity.value_or(q), q);
  if (cap > kMaxRelevantQuerySize) {
    return absl::InvalidArgumentError(absl::StrCat(
        "query with ", q, " items needs a max_arity of at most ",
        kMaxRelevantQuerySize));
  }
  ASSIGN_OR_RETURN(std::vector<Atom> atoms, query.Atoms());
  KnowledgeBaseBuilder builder(DuplicatePolicy::kRejectConflicting);
  std::vector<Literal> literals;
  absl::Status status;
  ForEachSubset(q, cap, [&](uint64_t mask) {
    if (!status.ok()) return;
    literals.clear();
    literals.push_back({Atom::Class(), false});
    for (int k = 0; k < q; ++k) {
      if ((mask >> k) & 1) literals.push_back({atoms[k], true});
    }
    if (std::optional<size_t> i = kb.Find(literals)) {
      status = builder.AddCanonical(literals, kb.probability(*i));
    }
  });
  RETURN_IF_ERROR(status);
  return std::move(builder).Build();
}

}  // namespace plkb
