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

#include "plkb/kb.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

constexpr absl::string_view kClassName = "pos";

struct AtomEntry {
  AtomKind kind;
  std::string feature;
  std::string value;
};

class AtomTable {
 public:
  static AtomTable& Global() {
    static AtomTable* table = new AtomTable();
    return *table;
  }

  uint32_t Intern(AtomKind kind, absl::string_view feature,
                  absl::string_view value) {
    std::string key = absl::StrCat(static_cast<int>(kind), "\x1f", feature,
                                   "\x1f", value);
    {
      std::shared_lock lock(mu_);
      auto it = index_.find(key);
      if (it != index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] =
        index_.try_emplace(std::move(key), static_cast<uint32_t>(entries_.size()));
    if (inserted) {
      entries_.push_back(
          AtomEntry{kind, std::string(feature), std::string(value)});
    }
    return it->second;
  }

  const AtomEntry& Get(uint32_t id) const {
    std::shared_lock lock(mu_);
    return entries_[id];
  }

 private:
  AtomTable() { Intern(AtomKind::kClass, "", ""); }

  mutable std::shared_mutex mu_;
  std::deque<AtomEntry> entries_;
  absl::flat_hash_map<std::string, uint32_t> index_;
};

uint64_t Mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  return h;
}

uint64_t HashLiterals(std::span<const Literal> literals) {
  uint64_t h = literals.size();
  for (const Literal& lit : literals) {
    h = Mix(h, (static_cast<uint64_t>(lit.atom.id()) << 1) |
                   static_cast<uint64_t>(lit.negated));
  }
  return h;
}

absl::Status ValidateProbability(double p) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("probability ", p, " is outside [0,1]"));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ParseProbability(absl::string_view text) {
  // Plain decimals only: digits with an optional fraction.
  bool seen_digit = false;
  bool seen_point = false;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      seen_digit = false;
      break;
    }
  }
  if (!seen_digit) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid probability '", text, "'"));
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value, std::chars_format::fixed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid probability '", text, "'"));
  }
  RETURN_IF_ERROR(ValidateProbability(value));
  return value;
}

}  // namespace

bool IsValidSymbol(absl::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (absl::ascii_isspace(static_cast<unsigned char>(c))) return false;
    switch (c) {
      case '=':
      case '|':
      case '!':
      case ',':
      case '#':
        return false;
      default:
        break;
    }
  }
  return true;
}

absl::StatusOr<Atom> Atom::FeatureValue(absl::string_view feature,
                                        absl::string_view value) {
  if (!IsValidSymbol(feature) || !IsValidSymbol(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid feature-value atom '", feature, "=", value, "'"));
  }
  return Atom(
      AtomTable::Global().Intern(AtomKind::kFeatureValue, feature, value));
}

absl::StatusOr<Atom> Atom::Proposition(absl::string_view name) {
  if (!IsValidSymbol(name) || name == kClassName) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid proposition name '", name, "'"));
  }
  return Atom(AtomTable::Global().Intern(AtomKind::kProposition, name, ""));
}

absl::StatusOr<Atom> Atom::Parse(absl::string_view text) {
  if (text == kClassName) return Class();
  const size_t eq = text.find('=');
  if (eq == absl::string_view::npos) return Proposition(text);
  return FeatureValue(text.substr(0, eq), text.substr(eq + 1));
}

AtomKind Atom::kind() const { return AtomTable::Global().Get(id_).kind; }

absl::string_view Atom::feature() const {
  return AtomTable::Global().Get(id_).feature;
}

absl::string_view Atom::value() const {
  return AtomTable::Global().Get(id_).value;
}

std::string Atom::ToString() const {
  const AtomEntry& e = AtomTable::Global().Get(id_);
  switch (e.kind) {
    case AtomKind::kClass:
      return std::string(kClassName);
    case AtomKind::kFeatureValue:
      return absl::StrCat(e.feature, "=", e.value);
    case AtomKind::kProposition:
      return e.feature;
  }
  return "";
}

bool CanonicalLess(Atom a, Atom b) {
  if (a == b) return false;
  if (a.is_class()) return true;
  if (b.is_class()) return false;
  const AtomEntry& ea = AtomTable::Global().Get(a.id());
  const AtomEntry& eb = AtomTable::Global().Get(b.id());
  if (ea.feature != eb.feature) return ea.feature < eb.feature;
  return ea.value < eb.value;
}

bool CanonicalLess(const Literal& a, const Literal& b) {
  if (a.atom != b.atom) return CanonicalLess(a.atom, b.atom);
  return !a.negated && b.negated;
}

std::string Literal::ToString() const {
  return negated ? absl::StrCat("!", atom.ToString()) : atom.ToString();
}

absl::StatusOr<Clause> Clause::Make(std::vector<Literal> literals) {
  if (literals.empty()) {
    return absl::InvalidArgumentError("a clause needs at least one literal");
  }
  std::sort(literals.begin(), literals.end(),
            [](const Literal& a, const Literal& b) {
              return CanonicalLess(a, b);
            });
  literals.erase(std::unique(literals.begin(), literals.end()),
                 literals.end());
  for (size_t i = 1; i < literals.size(); ++i) {
    if (literals[i].atom == literals[i - 1].atom) {
      return absl::InvalidArgumentError(
          absl::StrCat("clause contains both ", literals[i].atom.ToString(),
                       " and its negation"));
    }
  }
  return Clause(std::move(literals));
}

absl::StatusOr<Clause> Clause::Parse(absl::string_view text) {
  std::vector<Literal> literals;
  for (absl::string_view token : absl::StrSplit(text, '|')) {
    token = absl::StripAsciiWhitespace(token);
    const bool negated = absl::ConsumePrefix(&token, "!");
    ASSIGN_OR_RETURN(Atom atom, Atom::Parse(token));
    literals.push_back({atom, negated});
  }
  return Make(std::move(literals));
}

absl::StatusOr<Clause> Clause::ClassRule(
    std::span<const std::pair<std::string, std::string>> body) {
  std::vector<Literal> literals;
  literals.reserve(body.size() + 1);
  literals.push_back({Atom::Class(), false});
  absl::flat_hash_set<absl::string_view> features;
  for (const auto& [feature, value] : body) {
    if (!features.insert(feature).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature '", feature, "' repeated in rule body"));
    }
    ASSIGN_OR_RETURN(Atom atom, Atom::FeatureValue(feature, value));
    literals.push_back({atom, true});
  }
  return Make(std::move(literals));
}

bool Clause::ContainsPositiveClassAtom() const {
  return !literals_.empty() && literals_.front().atom.is_class() &&
         !literals_.front().negated;
}

std::string Clause::ToString() const { return ClauseToString(literals_); }

std::string ClauseToString(std::span<const Literal> literals) {
  return absl::StrJoin(literals, " | ",
                       [](std::string* out, const Literal& lit) {
                         out->append(lit.ToString());
                       });
}

WeightedClause KnowledgeBase::weighted_clause(size_t i) const {
  auto lits = clause(i);
  // Stored clauses are canonical already.
  absl::StatusOr<Clause> c =
      Clause::Make(std::vector<Literal>(lits.begin(), lits.end()));
  return WeightedClause{probabilities_[i], *std::move(c)};
}

std::optional<size_t> KnowledgeBase::Find(
    std::span<const Literal> canonical) const {
  auto it = heads_.find(HashLiterals(canonical));
  if (it == heads_.end()) return std::nullopt;
  for (uint32_t i = it->second; i != kNoClause; i = next_[i]) {
    auto lits = clause(i);
    if (std::equal(lits.begin(), lits.end(), canonical.begin(),
                   canonical.end())) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<Atom> KnowledgeBase::Universe() const {
  absl::flat_hash_set<Atom> seen;
  std::vector<Atom> atoms;
  for (const Literal& lit : literals_) {
    if (seen.insert(lit.atom).second) atoms.push_back(lit.atom);
  }
  std::sort(atoms.begin(), atoms.end(),
            [](Atom a, Atom b) { return CanonicalLess(a, b); });
  return atoms;
}

bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    std::optional<size_t> j = b.Find(a.clause(i));
    if (!j.has_value() || b.probability(*j) != a.probability(i)) return false;
  }
  return true;
}

absl::Status KnowledgeBaseBuilder::Add(const WeightedClause& clause) {
  return AddCanonical(clause.clause.literals(), clause.probability);
}

absl::Status KnowledgeBaseBuilder::Add(double probability,
                                       const Clause& clause) {
  return AddCanonical(clause.literals(), probability);
}

absl::Status KnowledgeBaseBuilder::AddCanonical(
    std::span<const Literal> canonical, double probability) {
  RETURN_IF_ERROR(ValidateProbability(probability));
  if (canonical.empty()) {
    return absl::InvalidArgumentError("empty clause");
  }
  if (std::optional<size_t> existing = kb_.Find(canonical)) {
    double& stored = kb_.probabilities_[*existing];
    if (stored == probability) return absl::OkStatus();
    if (policy_ == DuplicatePolicy::kRejectConflicting) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "duplicate clause '%s' with conflicting probabilities %g and %g",
          ClauseToString(canonical), stored, probability));
    }
    stored = probability;
    return absl::OkStatus();
  }
  const auto index = static_cast<uint32_t>(kb_.size());
  kb_.literals_.insert(kb_.literals_.end(), canonical.begin(),
                       canonical.end());
  kb_.offsets_.push_back(static_cast<uint32_t>(kb_.literals_.size()));
  kb_.probabilities_.push_back(probability);
  auto [it, inserted] = kb_.heads_.try_emplace(HashLiterals(canonical), index);
  if (inserted) {
    kb_.next_.push_back(KnowledgeBase::kNoClause);
  } else {
    kb_.next_.push_back(it->second);
    it->second = index;
  }
  return absl::OkStatus();
}

KnowledgeBase KnowledgeBaseBuilder::Build() && { return std::move(kb_); }

absl::StatusOr<KnowledgeBase> ParseKb(absl::string_view text) {
  KnowledgeBaseBuilder builder(DuplicatePolicy::kRejectConflicting);
  int line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    if (const size_t hash = line.find('#'); hash != absl::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    auto error = [line_number](const absl::Status& status) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": ", status.message()));
    };
    const size_t space = line.find_first_of(" \t");
    if (space == absl::string_view::npos) {
      return error(absl::InvalidArgumentError("expected '<prob> <clause>'"));
    }
    absl::StatusOr<double> probability = ParseProbability(line.substr(0, space));
    if (!probability.ok()) return error(probability.status());
    absl::StatusOr<Clause> clause = Clause::Parse(line.substr(space + 1));
    if (!clause.ok()) return error(clause.status());
    if (absl::Status s = builder.Add(*probability, *clause); !s.ok()) {
      return error(s);
    }
  }
  return std::move(builder).Build();
}

std::string SerializeKb(const KnowledgeBase& kb) {
  std::vector<std::pair<std::string, double>> lines;
  lines.reserve(kb.size());
  for (size_t i = 0; i < kb.size(); ++i) {
    lines.emplace_back(ClauseToString(kb.clause(i)), kb.probability(i));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& [clause, p] : lines) {
    absl::StrAppendFormat(&out, "%.6f %s\n", p, clause);
  }
  return out;
}

absl::StatusOr<KnowledgeBase> Merge(const KnowledgeBase& kb,
                                    std::span<const WeightedClause> extra) {
  KnowledgeBaseBuilder builder(kb, DuplicatePolicy::kOverride);
  for (const WeightedClause& wc : extra) {
    if (!wc.clause.ContainsPositiveClassAtom()) {
      return absl::InvalidArgumentError(
          absl::StrCat("knowledge clause '", wc.clause.ToString(),
                       "' does not contain pos"));
    }
    RETURN_IF_ERROR(builder.Add(wc));
  }
  return std::move(builder).Build();
}

absl::StatusOr<KnowledgeBase> Merge(const KnowledgeBase& kb,
                                    const KnowledgeBase& extra) {
  std::vector<WeightedClause> clauses;
  clauses.reserve(extra.size());
  for (size_t i = 0; i < extra.size(); ++i) {
    clauses.push_back(extra.weighted_clause(i));
  }
  return Merge(kb, clauses);
}

}  // namespace plkb
