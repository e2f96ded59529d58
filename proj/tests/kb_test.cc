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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "gtest/gtest.h"
#include "plkb/random.h"
#include "test_util.h"

namespace plkb {
namespace {

using ::plkb::testing::MustKb;

TEST(AtomTest, ParsesKinds) {
  ASSERT_OK_AND_ASSIGN(Atom pos, Atom::Parse("pos"));
  EXPECT_TRUE(pos.is_class());
  ASSERT_OK_AND_ASSIGN(Atom fv, Atom::Parse("a4=1"));
  EXPECT_EQ(fv.kind(), AtomKind::kFeatureValue);
  EXPECT_EQ(fv.feature(), "a4");
  EXPECT_EQ(fv.value(), "1");
  ASSERT_OK_AND_ASSIGN(Atom prop, Atom::Parse("alpha"));
  EXPECT_EQ(prop.kind(), AtomKind::kProposition);
  EXPECT_EQ(Atom::Parse("a4=1").value(), fv);
}

TEST(AtomTest, RejectsBadSymbols) {
  EXPECT_FALSE(Atom::Parse("a|b").ok());
  EXPECT_FALSE(Atom::Parse("=1").ok());
  EXPECT_FALSE(Atom::Parse("a=").ok());
  EXPECT_FALSE(Atom::Parse("a b").ok());
  EXPECT_FALSE(Atom::Parse("").ok());
}

TEST(ClauseTest, CanonicalOrderPutsClassFirst) {
  ASSERT_OK_AND_ASSIGN(Clause c, Clause::Parse("!a4=0 | !a1=0 | pos | !a2=0"));
  EXPECT_EQ(c.ToString(), "pos | !a1=0 | !a2=0 | !a4=0");
  EXPECT_TRUE(c.ContainsPositiveClassAtom());
}

TEST(ClauseTest, EqualityIgnoresOrder) {
  EXPECT_EQ(Clause::Parse("b | !a").value(), Clause::Parse("!a | b").value());
}

TEST(ClauseTest, RejectsComplementaryPair) {
  EXPECT_FALSE(Clause::Parse("a | !a").ok());
}

TEST(ClauseTest, DuplicateLiteralsCollapse) {
  ASSERT_OK_AND_ASSIGN(Clause c, Clause::Parse("a | a | b"));
  EXPECT_EQ(c.size(), 2u);
}

TEST(ClauseTest, ClassRuleFromPath) {
  const std::vector<std::pair<std::string, std::string>> body = {{"a4", "1"}};
  ASSERT_OK_AND_ASSIGN(Clause c, Clause::ClassRule(body));
  EXPECT_EQ(c.ToString(), "pos | !a4=1");
  const std::vector<std::pair<std::string, std::string>> repeated = {{"a1", "0"},
                                                                      {"a1", "1"}};
  EXPECT_FALSE(Clause::ClassRule(repeated).ok());
}

TEST(ParseKbTest, SingleRule) {
  ASSERT_OK_AND_ASSIGN(KnowledgeBase kb, ParseKb("1.0 pos | !a4=1"));
  ASSERT_EQ(kb.size(), 1u);
  EXPECT_EQ(kb.probability(0), 1.0);
  ASSERT_EQ(kb.clause(0).size(), 2u);
  EXPECT_TRUE(kb.clause(0)[0].atom.is_class());
  EXPECT_FALSE(kb.clause(0)[0].negated);
  EXPECT_EQ(kb.clause(0)[1].atom.ToString(), "a4=1");
  EXPECT_TRUE(kb.clause(0)[1].negated);
}

TEST(ParseKbTest, EmptyTextGivesEmptyBase) {
  ASSERT_OK_AND_ASSIGN(KnowledgeBase kb, ParseKb(""));
  EXPECT_TRUE(kb.empty());
  EXPECT_EQ(SerializeKb(kb), "");
}

TEST(ParseKbTest, SkipsCommentsAndBlankLines) {
  ASSERT_OK_AND_ASSIGN(KnowledgeBase kb, ParseKb("# header\n\n0.5 a\n"));
  EXPECT_EQ(kb.size(), 1u);
}

TEST(ParseKbTest, ConflictingDuplicateIsAnError) {
  EXPECT_FALSE(ParseKb("0.5 a | b\n0.6 b | a\n").ok());
  ASSERT_OK_AND_ASSIGN(KnowledgeBase same, ParseKb("0.5 a | b\n0.5 b | a\n"));
  EXPECT_EQ(same.size(), 1u);
}

TEST(ParseKbTest, RejectsBadProbabilities) {
  EXPECT_FALSE(ParseKb("1.5 a").ok());
  EXPECT_FALSE(ParseKb("-0.1 a").ok());
  EXPECT_FALSE(ParseKb("nan a").ok());
  EXPECT_FALSE(ParseKb("x a").ok());
  EXPECT_FALSE(ParseKb("0.5").ok());
}

TEST(SerializeKbTest, ModusPonensPair) {
  EXPECT_EQ(SerializeKb(MustKb(testing::kModusPonensKb)),
            "0.600000 !a | b\n0.800000 a\n");
}

TEST(SerializeKbTest, ParseIsIdentityOnCanonicalText) {
  const std::string canonical = SerializeKb(MustKb(testing::kToyTreeKb));
  EXPECT_EQ(SerializeKb(MustKb(canonical)), canonical);
}

// Random valid text: each line a probability and up to five distinct atoms
// drawn from a mixed vocabulary, with random signs and order.
std::string RandomKbText(Rng& rng) {
  const std::vector<std::string> vocab = {"pos", "a1=0", "a1=1", "a2=x", "b=7",
                                          "alpha", "beta", "colour=red"};
  std::set<std::string> seen;
  std::string text;
  const int lines = static_cast<int>(rng.UniformInt(0, 12));
  for (int l = 0; l < lines; ++l) {
    std::vector<std::string> atoms = vocab;
    rng.Shuffle(std::span<std::string>(atoms));
    const int len = static_cast<int>(rng.UniformInt(1, 5));
    std::vector<std::string> lits;
    std::vector<std::string> key;
    for (int j = 0; j < len; ++j) {
      const bool neg = rng.UniformIndex(2) == 1;
      lits.push_back(absl::StrCat(neg ? "!" : "", atoms[j]));
      key.push_back(lits.back());
    }
    std::sort(key.begin(), key.end());
    if (!seen.insert(absl::StrJoin(key, "|")).second) continue;
    absl::StrAppend(&text, absl::StrFormat("%.9f", rng.UniformReal()), "  ",
                    absl::StrJoin(lits, " | "), "\n");
  }
  return text;
}

TEST(SerializeKbTest, RoundTripIsStableOnRandomTexts) {
  Rng rng(20260101);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string text = RandomKbText(rng);
    ASSERT_OK_AND_ASSIGN(KnowledgeBase kb, ParseKb(text));
    const std::string once = SerializeKb(kb);
    ASSERT_OK_AND_ASSIGN(KnowledgeBase again, ParseKb(once));
    EXPECT_EQ(SerializeKb(again), once) << text;
    EXPECT_EQ(again.size(), kb.size());
  }
}

TEST(KnowledgeBaseTest, UniverseIsUnionOfClauseAtoms) {
  const KnowledgeBase kb = MustKb("0.5 pos | !a2=1\n0.5 pos | !a1=0 | !a2=1\n");
  std::vector<std::string> names;
  for (Atom a : kb.Universe()) names.push_back(a.ToString());
  EXPECT_EQ(names, (std::vector<std::string>{"pos", "a1=0", "a2=1"}));
  EXPECT_EQ(kb.LiteralCount(), 5u);
}

TEST(KnowledgeBaseTest, FindLocatesCanonicalClause) {
  const KnowledgeBase kb = MustKb(testing::kToyTreeKb);
  const Clause c = Clause::Parse("!a4=1 | pos").value();
  ASSERT_TRUE(kb.Find(c.literals()).has_value());
  EXPECT_EQ(kb.probability(*kb.Find(c.literals())), 1.0);
  const Clause missing = Clause::Parse("pos | !a4=2").value();
  EXPECT_FALSE(kb.Find(missing.literals()).has_value());
}

TEST(MergeTest, AddsKnowledgeClauses) {
  const KnowledgeBase kb = MustKb(testing::kToyTreeKb);
  const KnowledgeBase extra = MustKb("0.9 pos | !a3=0\n0.9 pos | !a4=0\n");
  ASSERT_OK_AND_ASSIGN(KnowledgeBase merged, Merge(kb, extra));
  EXPECT_EQ(merged.size(), kb.size() + 2);
  for (const char* text : {"pos | !a3=0", "pos | !a4=0"}) {
    const Clause c = Clause::Parse(text).value();
    ASSERT_TRUE(merged.Find(c.literals()).has_value()) << text;
    EXPECT_EQ(merged.probability(*merged.Find(c.literals())), 0.9);
  }
}

TEST(MergeTest, EmptyExtraIsIdentity) {
  const KnowledgeBase kb = MustKb(testing::kToyTreeKb);
  ASSERT_OK_AND_ASSIGN(KnowledgeBase merged, Merge(kb, KnowledgeBase()));
  EXPECT_EQ(merged, kb);
}

TEST(MergeTest, ExtraOverridesExistingProbability) {
  const KnowledgeBase kb = MustKb(testing::kToyTreeKb);
  ASSERT_OK_AND_ASSIGN(KnowledgeBase merged, Merge(kb, MustKb("0.25 pos | !a4=1")));
  EXPECT_EQ(merged.size(), kb.size());
  const Clause c = Clause::Parse("pos | !a4=1").value();
  EXPECT_EQ(merged.probability(*merged.Find(c.literals())), 0.25);
}

TEST(MergeTest, Idempotent) {
  const KnowledgeBase kb = MustKb(testing::kToyTreeKb);
  const KnowledgeBase extra = MustKb("0.9 pos | !a3=0\n0.1 pos | !a4=1\n");
  ASSERT_OK_AND_ASSIGN(KnowledgeBase once, Merge(kb, extra));
  ASSERT_OK_AND_ASSIGN(KnowledgeBase twice, Merge(once, extra));
  EXPECT_EQ(once, twice);
}

TEST(MergeTest, RejectsClausesWithoutClassAtom) {
  EXPECT_FALSE(Merge(MustKb(testing::kToyTreeKb), MustKb("0.5 a1=0")).ok());
  EXPECT_FALSE(Merge(MustKb(testing::kToyTreeKb), MustKb("0.5 !pos | a1=0")).ok());
}

}  // namespace
}  // namespace plkb
