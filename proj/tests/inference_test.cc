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

#include "plkb/inference.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "plkb/direct_kb.h"
#include "plkb/nilsson.h"
#include "plkb/random.h"
#include "test_util.h"

namespace plkb {
namespace {

using ::plkb::testing::BitQuery;
using ::plkb::testing::MustKb;
using ::plkb::testing::ToyDataset;

Atom Prop(const std::string& name) { return Atom::Proposition(name).value(); }

std::set<std::string> RowNames(const LinearProgram& lp) {
  std::set<std::string> names;
  for (const LpRow& row : lp.rows()) names.insert(row.name);
  return names;
}

TEST(BuildLpTest, ModusPonensStructure) {
  const KnowledgeBase kb = MustKb(testing::kModusPonensKb);
  const KbProgram program = BuildLp(kb);
  // Two atoms, two clauses: 2*2 + 2 core variables plus 4 deviations.
  EXPECT_EQ(program.lp.num_variables(), 6 + 4);
  EXPECT_EQ(program.lp.num_rows(), 2 + 3 + 2 + 2);
  ASSERT_TRUE(program.lp.Validate().ok());

  // Clause 0 is `!a | b`: pi(c0) <= pi(!a) + pi(b) and pi(c0) >= each literal.
  const KbLpLayout& layout = program.layout;
  const int c0 = layout.clause_var[0];
  const int not_a = layout.LiteralVar({Prop("a"), true});
  const int b = layout.LiteralVar({Prop("b"), false});
  const LpRow* upper = nullptr;
  int lower_rows = 0;
  for (const LpRow& row : program.lp.rows()) {
    if (row.name == "upper[0]") upper = &row;
    if (row.name.starts_with("lower[0,")) {
      ++lower_rows;
      ASSERT_EQ(row.terms.size(), 2u);
      EXPECT_EQ(row.terms[0].var, c0);
      EXPECT_TRUE(row.terms[1].var == not_a || row.terms[1].var == b);
      EXPECT_EQ(row.lower, 0.0);
    }
  }
  ASSERT_NE(upper, nullptr);
  EXPECT_EQ(upper->upper, 0.0);
  std::set<int> vars;
  for (const LpTerm& t : upper->terms) vars.insert(t.var);
  EXPECT_EQ(vars, (std::set<int>{c0, not_a, b}));
  EXPECT_EQ(lower_rows, 2);
  EXPECT_TRUE(RowNames(program.lp).contains("complement[a]"));
}

TEST(BuildLpTest, CertainClassAtom) {
  const KbProgram program = BuildLp(MustKb("1.0 pos"));
  EXPECT_EQ(program.lp.num_variables(), 2 + 1 + 2);
  EXPECT_EQ(RowNames(program.lp),
            (std::set<std::string>{"upper[0]", "lower[0,pos]", "complement[pos]",
                                   "deviation[0]"}));
}

TEST(BuildLpTest, StructuralCountsOnRandomBases) {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const KnowledgeBase kb = testing::RandomFreeKb(rng, 6, 12);
    const KbProgram program = BuildLp(kb);
    const int n = static_cast<int>(kb.Universe().size());
    const int m = static_cast<int>(kb.size());
    const int l = static_cast<int>(kb.LiteralCount());
    EXPECT_EQ(program.lp.num_variables(), 2 * n + m + 2 * m);
    EXPECT_EQ(program.lp.num_rows(), m + l + n + m);
  }
}

TEST(ApplyQueryTest, FullBinaryQuery) {
  KbProgram program = BuildLp(MustKb(testing::kToyTreeKb));
  const int before = program.lp.num_rows();
  ASSERT_OK_AND_ASSIGN(auto warnings,
                       ApplyQuery(program, BitQuery("0101"), ToyDataset().domains()));
  EXPECT_TRUE(warnings.empty());
  ASSERT_EQ(program.lp.num_rows(), before + 8);
  std::set<std::pair<std::string, double>> fixes;
  for (int i = before; i < program.lp.num_rows(); ++i) {
    const LpRow& row = program.lp.rows()[i];
    ASSERT_EQ(row.lower, row.upper);
    fixes.emplace(row.name, row.lower);
  }
  EXPECT_EQ(fixes, (std::set<std::pair<std::string, double>>{
                       {"fix[a1=0]", 1}, {"fix[a1=1]", 0}, {"fix[a2=0]", 0},
                       {"fix[a2=1]", 1}, {"fix[a3=0]", 1}, {"fix[a3=1]", 0},
                       {"fix[a4=0]", 0}, {"fix[a4=1]", 1}}));
}

TEST(ApplyQueryTest, EmptyAndPartialQueries) {
  KbProgram program = BuildLp(MustKb(testing::kToyTreeKb));
  const int before = program.lp.num_rows();
  ASSERT_OK(ApplyQuery(program, Query(), ToyDataset().domains()).status());
  EXPECT_EQ(program.lp.num_rows(), before);
  ASSERT_OK(ApplyQuery(program, testing::MustQuery("a1=0"), ToyDataset().domains())
                .status());
  EXPECT_EQ(program.lp.num_rows(), before + 2);
}

TEST(ApplyQueryTest, OutOfDomainValueWarns) {
  KbProgram program = BuildLp(MustKb(testing::kToyTreeKb));
  const int before = program.lp.num_rows();
  ASSERT_OK_AND_ASSIGN(auto warnings, ApplyQuery(program, testing::MustQuery("a1=7"),
                                                 ToyDataset().domains()));
  EXPECT_EQ(warnings.size(), 1u);
  // a1=7 has no variable; both known values are fixed to zero.
  EXPECT_EQ(program.lp.num_rows(), before + 2);
}

TEST(InferTest, CertainClassAtom) {
  ASSERT_OK_AND_ASSIGN(InferenceResult r, InferPos(MustKb("1.0 pos"), Query(), {}));
  // The lower bound may use the lexicographic slack.
  EXPECT_NEAR(r.p_lower, 1.0, 1e-6);
  EXPECT_NEAR(r.p_upper, 1.0, 1e-9);
  EXPECT_TRUE(r.label);
}

TEST(InferTest, ModusPonensBounds) {
  ASSERT_OK_AND_ASSIGN(InferenceResult r,
                       Infer(MustKb(testing::kModusPonensKb), Query(), {}, Prop("b")));
  EXPECT_NEAR(r.objective_min, 0.0, 1e-9);
  EXPECT_NEAR(r.p_lower, 0.4, 1e-6);
  EXPECT_NEAR(r.p_upper, 0.6, 1e-6);
  EXPECT_NEAR(r.p_avg, 0.5, 1e-6);
  EXPECT_FALSE(r.label);
}

TEST(InferTest, ModusPonensSolutionValues) {
  const KbProgram program = BuildLp(MustKb(testing::kModusPonensKb));
  ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(program.lp));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 0.0, 1e-9);
  EXPECT_NEAR(s.values[*program.layout.AtomVar(Prop("a"))], 0.8, 1e-7);
  const double b = s.values[*program.layout.AtomVar(Prop("b"))];
  EXPECT_GE(b, 0.4 - 1e-7);
  EXPECT_LE(b, 0.6 + 1e-7);
}

TEST(InferTest, HalfIsNegative) {
  // pos is free in [0,1].
  ASSERT_OK_AND_ASSIGN(InferenceResult r, InferPos(MustKb("0.5 a"), Query(), {}));
  EXPECT_NEAR(r.p_avg, 0.5, 1e-9);
  EXPECT_FALSE(r.label);
}

TEST(InferTest, ContradictoryFixingsFail) {
  // a1=0 and a1=1 both asserted through a hand-built domain.
  KbProgram program = BuildLp(MustKb("0.5 pos | !a1=0\n0.5 pos | !a1=1\n"));
  Domains domains = {{"a1", {"0", "1"}}};
  ASSERT_OK(ApplyQuery(program, testing::MustQuery("a1=0"), domains).status());
  ASSERT_OK(ApplyQuery(program, testing::MustQuery("a1=1"), domains).status());
  ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(program.lp));
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
}

TEST(InferTest, SolutionsObeyProbabilityLaws) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const KnowledgeBase kb = testing::RandomFreeKb(rng, 5, 8);
    const KbProgram program = BuildLp(kb);
    ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(program.lp));
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_LE(program.lp.MaxViolation(s.values), 1e-7);
    const KbLpLayout& layout = program.layout;
    for (size_t k = 0; k < layout.atoms.size(); ++k) {
      EXPECT_NEAR(s.values[layout.atom_var[k]] + s.values[layout.negation_var[k]], 1.0,
                  1e-7);
    }
  }
}

TEST(InferTest, ClauseOrderDoesNotMoveBounds) {
  Rng rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    const KnowledgeBase kb = testing::RandomFreeKb(rng, 5, 8);
    std::vector<WeightedClause> clauses;
    for (size_t i = 0; i < kb.size(); ++i) clauses.push_back(kb.weighted_clause(i));
    rng.Shuffle(std::span<WeightedClause>(clauses));
    KnowledgeBaseBuilder builder;
    for (const auto& c : clauses) ASSERT_OK(builder.Add(c));
    const KnowledgeBase shuffled = std::move(builder).Build();
    ASSERT_OK_AND_ASSIGN(InferenceResult a, Infer(kb, Query(), {}, Prop("x0")));
    ASSERT_OK_AND_ASSIGN(InferenceResult b, Infer(shuffled, Query(), {}, Prop("x0")));
    EXPECT_NEAR(a.p_lower, b.p_lower, 1e-6);
    EXPECT_NEAR(a.p_upper, b.p_upper, 1e-6);
  }
}

TEST(InferTest, Deterministic) {
  const KnowledgeBase kb = MustKb(testing::kToyTreeKb);
  ASSERT_OK_AND_ASSIGN(InferenceResult a, InferPos(kb, BitQuery("0011"), ToyDataset().domains()));
  ASSERT_OK_AND_ASSIGN(InferenceResult b, InferPos(kb, BitQuery("0011"), ToyDataset().domains()));
  EXPECT_EQ(a.p_lower, b.p_lower);
  EXPECT_EQ(a.p_upper, b.p_upper);
  EXPECT_EQ(a.objective_min, b.objective_min);
}

TEST(InferTest, RelevantBaseGivesSameAnswerAsFullBase) {
  ASSERT_OK_AND_ASSIGN(KnowledgeBase direct, BuildDirectKb(ToyDataset()));
  const Domains domains = ToyDataset().domains();
  for (const char* bits : {"0101", "0000", "1011"}) {
    ASSERT_OK_AND_ASSIGN(KnowledgeBase rel, RelevantKb(BitQuery(bits), direct));
    ASSERT_OK_AND_ASSIGN(InferenceResult full, InferPos(direct, BitQuery(bits), domains));
    ASSERT_OK_AND_ASSIGN(InferenceResult part, InferPos(rel, BitQuery(bits), domains));
    EXPECT_EQ(full.label, part.label) << bits;
    EXPECT_NEAR(full.p_avg, part.p_avg, 1e-6) << bits;
  }
}

TEST(ConsistencyTest, CertainDisjunctionsRelaxToZero) {
  ASSERT_OK_AND_ASSIGN(ConsistencyReport r,
                       CheckConsistency(MustKb(testing::kCertainDisjunctionsKb)));
  EXPECT_NEAR(r.objective_min, 0.0, 1e-6);
  EXPECT_TRUE(r.consistent_hint);
}

TEST(ConsistencyTest, TreeBaseContradictsUnitFacts) {
  KnowledgeBaseBuilder builder(MustKb(testing::kToyTreeKb), DuplicatePolicy::kRejectConflicting);
  for (int i = 1; i <= 4; ++i) {
    ASSERT_OK(builder.Add(1.0, Clause::Parse(absl::StrCat("a", i, "=0")).value()));
  }
  const KnowledgeBase kb = std::move(builder).Build();
  ASSERT_OK_AND_ASSIGN(ConsistencyReport r, CheckConsistency(kb));
  EXPECT_GT(r.objective_min, 1e-4);
  EXPECT_FALSE(r.consistent_hint);
}

TEST(ConsistencyTest, ModusPonensIsConsistent) {
  ASSERT_OK_AND_ASSIGN(ConsistencyReport r,
                       CheckConsistency(MustKb(testing::kModusPonensKb)));
  EXPECT_NEAR(r.objective_min, 0.0, 1e-9);
}

TEST(ConsistencyTest, WorldGeneratedBasesMinimizeToZero) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(1, 6));
    const auto world = testing::RandomWorldKb(rng, n, static_cast<int>(rng.UniformInt(1, 10)));
    ASSERT_OK_AND_ASSIGN(ConsistencyReport r, CheckConsistency(world.kb));
    EXPECT_LE(r.objective_min, 1e-6) << SerializeKb(world.kb);
  }
}

TEST(NilssonTest, ModusPonensBounds) {
  ASSERT_OK_AND_ASSIGN(OracleResult r,
                       NilssonOracle(MustKb(testing::kModusPonensKb), Prop("b")));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.p_min, 0.4, 1e-9);
  EXPECT_NEAR(r.p_max, 0.6, 1e-9);
}

TEST(NilssonTest, CertainClassAtom) {
  ASSERT_OK_AND_ASSIGN(OracleResult r, NilssonOracle(MustKb("1.0 pos"), Atom::Class()));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.p_min, 1.0, 1e-9);
  EXPECT_NEAR(r.p_max, 1.0, 1e-9);
}

TEST(NilssonTest, CertainDisjunctionsForceAtLeastTwo) {
  // Every world must make two of the three atoms true.
  ASSERT_OK_AND_ASSIGN(OracleResult r,
                       NilssonOracle(MustKb(testing::kCertainDisjunctionsKb), Prop("alpha")));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.p_min, 0.0, 1e-9);
  EXPECT_NEAR(r.p_max, 1.0, 1e-9);
}

TEST(NilssonTest, RejectsTooManyAtoms) {
  std::string text;
  for (int i = 0; i <= kMaxOracleAtoms; ++i) absl::StrAppend(&text, "0.5 x", i, "\n");
  EXPECT_FALSE(NilssonOracle(MustKb(text), Prop("x0")).ok());
}

// A positive relaxed minimum proves the base has no world distribution.
TEST(NilssonTest, PositiveMinimumImpliesInfeasible) {
  Rng rng(43);
  int positive = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const KnowledgeBase kb = testing::RandomFreeKb(rng, static_cast<int>(rng.UniformInt(2, 8)),
                                                   static_cast<int>(rng.UniformInt(2, 10)));
    ASSERT_OK_AND_ASSIGN(ConsistencyReport r, CheckConsistency(kb));
    if (r.objective_min <= 1e-4) continue;
    ++positive;
    ASSERT_OK_AND_ASSIGN(OracleResult o, NilssonOracle(kb, Prop("x0")));
    EXPECT_FALSE(o.feasible) << SerializeKb(kb);
  }
  EXPECT_GT(positive, 0);
}

TEST(NilssonTest, RelaxedBoundsContainExactBounds) {
  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(1, 8));
    const auto world = testing::RandomWorldKb(rng, n, static_cast<int>(rng.UniformInt(1, 8)));
    const Atom target = Prop(absl::StrCat("x", rng.UniformIndex(n)));
    ASSERT_OK_AND_ASSIGN(OracleResult o, NilssonOracle(world.kb, target));
    ASSERT_TRUE(o.feasible);
    ASSERT_OK_AND_ASSIGN(InferenceResult r, Infer(world.kb, Query(), {}, target));
    EXPECT_LE(r.p_lower, o.p_min + 1e-6);
    EXPECT_GE(r.p_upper, o.p_max - 1e-6);
  }
}

}  // namespace
}  // namespace plkb
