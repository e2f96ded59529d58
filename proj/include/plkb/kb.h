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

// Probabilistic propositional knowledge bases: atoms, literals, clauses and
// weighted clause sets, plus the line-oriented text format
//
//   0.330000 pos | !a1=0
//
// where each line is a probability followed by a disjunction of literals.
// Atoms are the class atom `pos`, feature-value atoms `feature=value`, or
// bare propositional names. Lines starting with `#` and blank lines are
// ignored.

#ifndef PLKB_KB_H_
#define PLKB_KB_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace plkb {

enum class AtomKind : uint8_t { kClass, kFeatureValue, kProposition };

// Interned propositional variable. Copying is free; the strings live in a
// process-wide table and are never released.
class Atom {
 public:
  // The distinguished class atom `pos`.
  static Atom Class() { return Atom(0); }
  static absl::StatusOr<Atom> FeatureValue(absl::string_view feature,
                                           absl::string_view value);
  static absl::StatusOr<Atom> Proposition(absl::string_view name);
  // Accepts `pos`, `feature=value` or a bare name.
  static absl::StatusOr<Atom> Parse(absl::string_view text);

  AtomKind kind() const;
  bool is_class() const { return id_ == 0; }
  // Feature name, or the proposition name. Empty for the class atom.
  absl::string_view feature() const;
  // Empty unless kind() == kFeatureValue.
  absl::string_view value() const;
  std::string ToString() const;
  uint32_t id() const { return id_; }

  friend bool operator==(Atom a, Atom b) { return a.id_ == b.id_; }
  friend bool operator!=(Atom a, Atom b) { return a.id_ != b.id_; }
  template <typename H>
  friend H AbslHashValue(H h, Atom a) {
    return H::combine(std::move(h), a.id_);
  }

 private:
  explicit Atom(uint32_t id) : id_(id) {}
  uint32_t id_ = 0;
};

// Canonical atom order: the class atom first, then (feature, value)
// lexicographically.
bool CanonicalLess(Atom a, Atom b);

// Feature names, values and proposition names must be non-empty and free of
// whitespace and the characters `=|!,#`.
bool IsValidSymbol(absl::string_view s);

struct Literal {
  Atom atom;
  bool negated = false;

  std::string ToString() const;
  friend bool operator==(const Literal& a, const Literal& b) {
    return a.atom == b.atom && a.negated == b.negated;
  }
};

bool CanonicalLess(const Literal& a, const Literal& b);

// A disjunction of literals held in canonical order, without duplicates and
// without complementary pairs.
class Clause {
 public:
  Clause() = default;

  static absl::StatusOr<Clause> Make(std::vector<Literal> literals);
  // Parses `lit | lit | ...`.
  static absl::StatusOr<Clause> Parse(absl::string_view text);
  // `pos | !a1=v1 | ... | !ak=vk`. Fails on a repeated feature.
  static absl::StatusOr<Clause> ClassRule(
      std::span<const std::pair<std::string, std::string>> body);

  std::span<const Literal> literals() const { return literals_; }
  size_t size() const { return literals_.size(); }
  bool empty() const { return literals_.empty(); }
  bool ContainsPositiveClassAtom() const;
  std::string ToString() const;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.literals_ == b.literals_;
  }

 private:
  explicit Clause(std::vector<Literal> literals)
      : literals_(std::move(literals)) {}
  std::vector<Literal> literals_;
};

std::string ClauseToString(std::span<const Literal> literals);

struct WeightedClause {
  double probability = 0.0;
  Clause clause;

  friend bool operator==(const WeightedClause& a, const WeightedClause& b) {
    return a.probability == b.probability && a.clause == b.clause;
  }
};

enum class DuplicatePolicy {
  // Re-adding a clause with a different probability is an error.
  kRejectConflicting,
  // The later probability replaces the earlier one.
  kOverride,
};

// A set of weighted clauses. Clauses keep their insertion order; each
// canonical clause appears at most once. Immutable once built.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  size_t size() const { return probabilities_.size(); }
  bool empty() const { return probabilities_.empty(); }

  std::span<const Literal> clause(size_t i) const {
    return {literals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  double probability(size_t i) const { return probabilities_[i]; }
  WeightedClause weighted_clause(size_t i) const;

  // Index of the clause with exactly these canonical literals.
  std::optional<size_t> Find(std::span<const Literal> canonical) const;

  // All atoms occurring in some clause, in canonical order.
  std::vector<Atom> Universe() const;
  // Total number of literal occurrences over all clauses.
  size_t LiteralCount() const { return literals_.size(); }

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b);

 private:
  friend class KnowledgeBaseBuilder;

  static constexpr uint32_t kNoClause = UINT32_MAX;

  std::vector<Literal> literals_;
  std::vector<uint32_t> offsets_ = {0};
  std::vector<double> probabilities_;
  // Hash chains: head per clause hash, then next_ links.
  absl::flat_hash_map<uint64_t, uint32_t> heads_;
  std::vector<uint32_t> next_;
};

class KnowledgeBaseBuilder {
 public:
  explicit KnowledgeBaseBuilder(
      DuplicatePolicy policy = DuplicatePolicy::kRejectConflicting)
      : policy_(policy) {}
  // Starts from an existing knowledge base.
  KnowledgeBaseBuilder(KnowledgeBase base, DuplicatePolicy policy)
      : kb_(std::move(base)), policy_(policy) {}

  absl::Status Add(const WeightedClause& clause);
  absl::Status Add(double probability, const Clause& clause);
  // `canonical` must already be in canonical form.
  absl::Status AddCanonical(std::span<const Literal> canonical,
                            double probability);

  size_t size() const { return kb_.size(); }
  KnowledgeBase Build() &&;

 private:
  KnowledgeBase kb_;
  DuplicatePolicy policy_;
};

absl::StatusOr<KnowledgeBase> ParseKb(absl::string_view text);

// One line per clause, `%.6f` probability then the canonical clause; lines
// sorted by clause text.
std::string SerializeKb(const KnowledgeBase& kb);

// Adds domain knowledge to `kb`. A clause already present takes the
// probability from `extra`. Every extra clause must contain `pos`
// positively.
absl::StatusOr<KnowledgeBase> Merge(const KnowledgeBase& kb,
                                    std::span<const WeightedClause> extra);

absl::StatusOr<KnowledgeBase> Merge(const KnowledgeBase& kb,
                                    const KnowledgeBase& extra);

}  // namespace plkb

#endif  // PLKB_KB_H_
