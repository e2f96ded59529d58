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

// Shared fixtures for the unit and acceptance tests.

#ifndef PLKB_TESTS_TEST_UTIL_H_
#define PLKB_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "plkb/dataset.h"
#include "plkb/kb.h"
#include "plkb/query.h"
#include "plkb/random.h"

#define PLKB_TEST_CONCAT_INNER_(a, b) a##b
#define PLKB_TEST_CONCAT_(a, b) PLKB_TEST_CONCAT_INNER_(a, b)

#define ASSERT_OK(expr)                       \
  do {                                        \
    const absl::Status _st = (expr);          \
    ASSERT_TRUE(_st.ok()) << _st.ToString();  \
  } while (0)

#define ASSERT_OK_AND_ASSIGN(lhs, expr) \
  ASSERT_OK_AND_ASSIGN_IMPL_(PLKB_TEST_CONCAT_(_status_or_, __LINE__), lhs, expr)

#define ASSERT_OK_AND_ASSIGN_IMPL_(tmp, lhs, expr)      \
  auto tmp = (expr);                                    \
  ASSERT_TRUE(tmp.ok()) << tmp.status().ToString();     \
  lhs = std::move(tmp).value()

namespace plkb::testing {

// Eight four-bit strings; 0000, 1111, 1010 and 1100 are positive.
inline Dataset ToyDataset() {
  const std::vector<std::pair<std::string, bool>> rows = {
      {"0000", true},  {"1111", true},  {"1010", true},  {"1100", true},
      {"0010", false}, {"0100", false}, {"1110", false}, {"1000", false}};
  std::vector<Instance> instances;
  for (const auto& [bits, label] : rows) {
    Instance inst;
    for (char c : bits) inst.values.emplace_back(1, c);
    inst.label = label;
    instances.push_back(std::move(inst));
  }
  return Dataset::Create({"a1", "a2", "a3", "a4"}, std::move(instances)).value();
}

// The tree base of the toy data, written out by hand.
inline constexpr char kToyTreeKb[] =
    "0.0 pos | !a1=0 | !a2=0 | !a3=1 | !a4=0\n"
    "1.0 pos | !a1=0 | !a2=0 | !a3=0 | !a4=0\n"
    "0.0 pos | !a1=0 | !a2=1 | !a4=0\n"
    "1.0 pos | !a1=1 | !a2=0 | !a3=1 | !a4=0\n"
    "0.0 pos | !a1=1 | !a2=0 | !a3=0 | !a4=0\n"
    "0.0 pos | !a1=1 | !a2=1 | !a3=1 | !a4=0\n"
    "1.0 pos | !a1=1 | !a2=1 | !a3=0 | !a4=0\n"
    "1.0 pos | !a4=1\n";

// Modus ponens pair over propositions a and b.
inline constexpr char kModusPonensKb[] = "0.6 !a | b\n0.8 a\n";

// Three pairwise disjunctions plus their union, all certain.
inline constexpr char kCertainDisjunctionsKb[] =
    "1.0 alpha | beta\n1.0 alpha | gamma\n1.0 beta | gamma\n"
    "1.0 alpha | beta | gamma\n";

inline Query MustQuery(const std::string& text) { return Query::Parse(text).value(); }

inline KnowledgeBase MustKb(const std::string& text) { return ParseKb(text).value(); }

// Query a1=b1,...,a4=b4 for a four-bit string.
inline Query BitQuery(const std::string& bits) {
  Query q;
  for (size_t i = 0; i < bits.size(); ++i) {
    (void)q.Set(absl::StrCat("a", i + 1), std::string(1, bits[i]));
  }
  return q;
}

// A base over propositions x0..x{n-1} whose probabilities are read off an
// explicit distribution over all 2^n worlds, so it is consistent by
// construction. Clause probabilities are rounded to `digits` decimals when
// `digits` is positive, which breaks exact consistency.
struct WorldKb {
  KnowledgeBase kb;
  std::vector<double> world_probability;
};

inline WorldKb RandomWorldKb(Rng& rng, int n_atoms, int n_clauses) {
  const int n_worlds = 1 << n_atoms;
  std::vector<double> w(n_worlds);
  double total = 0.0;
  for (double& x : w) {
    // Sparse supports make the bounds non-trivial.
    x = rng.UniformReal() < 0.5 ? 0.0 : rng.UniformReal();
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (double& x : w) x /= total;

  std::string text;
  for (int c = 0; c < n_clauses; ++c) {
    const int len = static_cast<int>(rng.UniformInt(1, n_atoms));
    std::vector<int> atoms(n_atoms);
    for (int i = 0; i < n_atoms; ++i) atoms[i] = i;
    rng.Shuffle(std::span<int>(atoms));
    std::vector<std::pair<int, bool>> lits;
    for (int j = 0; j < len; ++j) lits.emplace_back(atoms[j], rng.UniformIndex(2) == 1);
    double p = 0.0;
    for (int world = 0; world < n_worlds; ++world) {
      bool sat = false;
      for (const auto& [atom, negated] : lits) {
        const bool value = (world >> atom) & 1;
        if (value != negated) sat = true;
      }
      if (sat) p += w[world];
    }
    p = std::min(p, 1.0);
    std::vector<std::string> parts;
    for (const auto& [atom, negated] : lits) {
      parts.push_back(absl::StrCat(negated ? "!" : "", "x", atom));
    }
    absl::StrAppend(&text, absl::StrFormat("%.17g ", p), absl::StrJoin(parts, " | "),
                    "\n");
  }
  // Two random clauses may coincide; keep the first.
  KnowledgeBaseBuilder builder(DuplicatePolicy::kOverride);
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    const KnowledgeBase one = ParseKb(line).value();
    (void)builder.Add(one.weighted_clause(0));
  }
  return {std::move(builder).Build(), std::move(w)};
}

// A base over x0..x{n-1} with arbitrary clause probabilities; usually
// inconsistent.
inline KnowledgeBase RandomFreeKb(Rng& rng, int n_atoms, int n_clauses) {
  KnowledgeBaseBuilder builder(DuplicatePolicy::kOverride);
  for (int c = 0; c < n_clauses; ++c) {
    const int len = static_cast<int>(rng.UniformInt(1, std::min(n_atoms, 3)));
    std::vector<int> atoms(n_atoms);
    for (int i = 0; i < n_atoms; ++i) atoms[i] = i;
    rng.Shuffle(std::span<int>(atoms));
    std::vector<Literal> lits;
    for (int j = 0; j < len; ++j) {
      lits.push_back({Atom::Proposition(absl::StrCat("x", atoms[j])).value(),
                      rng.UniformIndex(2) == 1});
    }
    (void)builder.Add(rng.UniformReal(), Clause::Make(std::move(lits)).value());
  }
  return std::move(builder).Build();
}

// Small categorical dataset with random schema and labels.
inline Dataset RandomDataset(Rng& rng, int max_features, int max_values, int max_rows) {
  const int n_features = static_cast<int>(rng.UniformInt(1, max_features));
  const int n_rows = static_cast<int>(rng.UniformInt(1, max_rows));
  std::vector<std::string> features;
  std::vector<int> arity;
  for (int f = 0; f < n_features; ++f) {
    features.push_back(absl::StrCat("f", f));
    arity.push_back(static_cast<int>(rng.UniformInt(1, max_values)));
  }
  std::vector<Instance> instances;
  for (int r = 0; r < n_rows; ++r) {
    Instance inst;
    for (int f = 0; f < n_features; ++f) {
      inst.values.push_back(absl::StrCat("v", rng.UniformIndex(arity[f])));
    }
    inst.label = rng.UniformIndex(2) == 1;
    instances.push_back(std::move(inst));
  }
  return Dataset::Create(std::move(features), std::move(instances)).value();
}

}  // namespace plkb::testing

#endif  // PLKB_TESTS_TEST_UTIL_H_
