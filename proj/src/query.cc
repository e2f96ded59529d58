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

#include "plkb/query.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "plkb/status_macros.h"

namespace plkb {

absl::StatusOr<Query> Query::Parse(absl::string_view text) {
  Query query;
  text = absl::StripAsciiWhitespace(text);
  if (text.empty()) return query;
  for (absl::string_view item : absl::StrSplit(text, ',')) {
    item = absl::StripAsciiWhitespace(item);
    const size_t eq = item.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("query item '", item, "' is not feature=value"));
    }
    RETURN_IF_ERROR(query.Set(std::string(item.substr(0, eq)),
                              std::string(item.substr(eq + 1))));
  }
  return query;
}

absl::Status Query::Set(std::string feature, std::string value) {
  if (!IsValidSymbol(feature) || !IsValidSymbol(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid query item '", feature, "=", value, "'"));
  }
  auto [it, inserted] = assignments_.try_emplace(std::move(feature), value);
  if (!inserted && it->second != value) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature '", it->first, "' assigned twice"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Atom>> Query::Atoms() const {
  std::vector<Atom> atoms;
  atoms.reserve(assignments_.size());
  // std::map iteration order is the canonical (feature, value) order.
  for (const auto& [feature, value] : assignments_) {
    ASSIGN_OR_RETURN(Atom atom, Atom::FeatureValue(feature, value));
    atoms.push_back(atom);
  }
  return atoms;
}

std::string Query::ToString() const {
  return absl::StrJoin(assignments_, ",", absl::PairFormatter("="));
}

Query Query::Subset(uint64_t mask) const {
  Query sub;
  int i = 0;
  for (const auto& [feature, value] : assignments_) {
    if (mask & (uint64_t{1} << i)) sub.assignments_.emplace(feature, value);
    ++i;
  }
  return sub;
}

Domains DomainsFromKb(const KnowledgeBase& kb) {
  Domains domains;
  for (Atom atom : kb.Universe()) {
    if (atom.kind() != AtomKind::kFeatureValue) continue;
    domains[std::string(atom.feature())].insert(std::string(atom.value()));
  }
  return domains;
}

}  // namespace plkb
