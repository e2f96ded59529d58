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

#include "plkb/simplex.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "plkb/linear_program.h"
#include "plkb/nilsson.h"
#include "plkb/random.h"
#include "test_util.h"

namespace plkb {
namespace {

TEST(LinearProgramTest, ValidateCatchesBadInput) {
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 1);
  lp.AddRow("r", {{x, 1.0}}, 0, 1);
  EXPECT_TRUE(lp.Validate().ok());
  lp.AddRow("bad", {{x + 1, 1.0}}, 0, 1);
  EXPECT_FALSE(lp.Validate().ok());

  LinearProgram inverted;
  inverted.AddVariable("y", 1, 0);
  EXPECT_FALSE(inverted.Validate().ok());
}

TEST(LinearProgramTest, LpFormatSections) {
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 1, 2.0);
  lp.AddRow("r", {{x, 1.0}}, 0.25, kInfinity);
  const std::string text = lp.ToLpFormat();
  for (const char* section : {"Minimize", "Subject To", "Bounds", "End"}) {
    EXPECT_NE(text.find(section), std::string::npos) << section;
  }
}

TEST(SimplexTest, SingleDeviation) {
  // min e+ + e-  s.t.  x - e+ + e- = 0.3,  x in [0,1].
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 1);
  const int ep = lp.AddVariable("e+", 0, kInfinity, 1.0);
  const int em = lp.AddVariable("e-", 0, kInfinity, 1.0);
  lp.AddRow("dev", {{x, 1.0}, {ep, -1.0}, {em, 1.0}}, 0.3, 0.3);
  ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(lp));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 0.0, 1e-9);
  EXPECT_NEAR(s.values[x], 0.3, 1e-9);
}

TEST(SimplexTest, DetectsInfeasibility) {
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 1);
  const int y = lp.AddVariable("y", 0, 1);
  lp.AddRow("sum", {{x, 1.0}, {y, 1.0}}, 3.0, kInfinity);
  ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(lp));
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
}

TEST(SimplexTest, DetectsUnboundedness) {
  for (bool presolve : {true, false}) {
    SimplexOptions options;
    options.presolve = presolve;
    LinearProgram lp;
    const int x = lp.AddVariable("x", 0, kInfinity, -1.0);
    lp.AddRow("r", {{x, 1.0}}, 1.0, kInfinity);
    ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(lp, options));
    EXPECT_EQ(s.status, LpStatus::kUnbounded) << presolve;

    LinearProgram two;
    const int u = two.AddVariable("u", 0, kInfinity, -1.0);
    const int v = two.AddVariable("v", 0, 1);
    two.AddRow("r", {{u, 1.0}, {v, -1.0}}, 0.5, kInfinity);
    ASSERT_OK_AND_ASSIGN(LpSolution t, SolveLp(two, options));
    EXPECT_EQ(t.status, LpStatus::kUnbounded) << presolve;
  }
}

TEST(SimplexTest, Maximize) {
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 4, 1.0);
  const int y = lp.AddVariable("y", 0, 4, 2.0);
  lp.AddRow("cap", {{x, 1.0}, {y, 1.0}}, -kInfinity, 5.0);
  lp.SetSense(ObjectiveSense::kMaximize);
  ASSERT_OK_AND_ASSIGN(LpSolution s, SolveLp(lp));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 9.0, 1e-9);
}

struct RandomLp {
  LinearProgram lp;
  // Same program as min c.x, A x = b, x >= 0.
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
};

// Boxed variables x in [0,u] and ranged rows lo <= r.x <= hi. The dense form
// adds x + s = u per variable and r.x - t = lo, t + w = hi - lo per row.
RandomLp MakeRandomLp(Rng& rng, int n_vars, int n_rows, double density) {
  RandomLp out;
  std::vector<double> upper(n_vars), point(n_vars);
  for (int j = 0; j < n_vars; ++j) {
    upper[j] = 1.0 + static_cast<double>(rng.UniformIndex(4));
    point[j] = upper[j] * rng.UniformReal();
    const double cost = std::round((rng.UniformReal() * 2.0 - 1.0) * 8.0) / 4.0;
    out.lp.AddVariable("x" + std::to_string(j), 0, upper[j], cost);
  }
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<double, double>> ranges;
  for (int i = 0; i < n_rows; ++i) {
    std::vector<double> row(n_vars, 0.0);
    std::vector<LpTerm> terms;
    double activity = 0.0;
    for (int j = 0; j < n_vars; ++j) {
      if (rng.UniformReal() >= density) continue;
      row[j] = static_cast<double>(rng.UniformInt(-3, 3));
      if (row[j] == 0.0) continue;
      terms.push_back({j, row[j]});
      activity += row[j] * point[j];
    }
    // The random point is feasible, so the program is too.
    const double lo = std::floor(activity) - static_cast<double>(rng.UniformIndex(2));
    const double hi = std::ceil(activity) + static_cast<double>(rng.UniformIndex(2));
    out.lp.AddRow("r" + std::to_string(i), terms, lo, hi);
    rows.push_back(row);
    ranges.emplace_back(lo, hi);
  }

  const int n_total = n_vars + n_vars + 2 * n_rows;
  auto blank = [&] { return std::vector<double>(n_total, 0.0); };
  for (int j = 0; j < n_vars; ++j) {
    auto r = blank();
    r[j] = 1.0;
    r[n_vars + j] = 1.0;
    out.a.push_back(r);
    out.b.push_back(upper[j]);
  }
  for (int i = 0; i < n_rows; ++i) {
    auto r = blank();
    for (int j = 0; j < n_vars; ++j) r[j] = rows[i][j];
    r[2 * n_vars + 2 * i] = -1.0;
    out.a.push_back(r);
    out.b.push_back(ranges[i].first);
    auto s = blank();
    s[2 * n_vars + 2 * i] = 1.0;
    s[2 * n_vars + 2 * i + 1] = 1.0;
    out.a.push_back(s);
    out.b.push_back(ranges[i].second - ranges[i].first);
  }
  out.c = blank();
  for (int j = 0; j < n_vars; ++j) out.c[j] = out.lp.variables()[j].cost;
  return out;
}

TEST(SimplexTest, AgreesWithDenseTableau) {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(2, 12));
    const int m = static_cast<int>(rng.UniformInt(1, 10));
    RandomLp problem = MakeRandomLp(rng, n, m, 0.5);
    const DenseLpResult dense = SolveStandardFormDense(problem.a, problem.b, problem.c);
    ASSERT_EQ(dense.status, LpStatus::kOptimal);
    for (bool presolve : {true, false}) {
      SimplexOptions options;
      options.presolve = presolve;
      ASSERT_OK_AND_ASSIGN(LpSolution sparse, SolveLp(problem.lp, options));
      ASSERT_EQ(sparse.status, LpStatus::kOptimal) << trial;
      EXPECT_NEAR(sparse.objective_value, dense.objective, 1e-7) << trial;
      EXPECT_LE(problem.lp.MaxViolation(sparse.values), 1e-7);
    }
  }
}

TEST(SimplexTest, TinyRefactorIntervalGivesSameOptimum) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    RandomLp problem = MakeRandomLp(rng, 30, 25, 0.2);
    ASSERT_OK_AND_ASSIGN(LpSolution base, SolveLp(problem.lp));
    SimplexOptions options;
    options.refactor_interval = 1;
    options.stall_limit = 0;
    ASSERT_OK_AND_ASSIGN(LpSolution other, SolveLp(problem.lp, options));
    ASSERT_EQ(base.status, LpStatus::kOptimal);
    ASSERT_EQ(other.status, LpStatus::kOptimal);
    EXPECT_NEAR(base.objective_value, other.objective_value, 1e-7);
  }
}

TEST(SimplexTest, LexicographicHoldsPrimary) {
  // min |x - 0.5| first, then x is pinned near 0.5 in both directions.
  LinearProgram lp;
  const int x = lp.AddVariable("x", 0, 1);
  const int y = lp.AddVariable("y", 0, 1);
  const int ep = lp.AddVariable("e+", 0, kInfinity, 1.0);
  const int em = lp.AddVariable("e-", 0, kInfinity, 1.0);
  lp.AddRow("dev", {{x, 1.0}, {ep, -1.0}, {em, 1.0}}, 0.5, 0.5);
  lp.AddRow("link", {{y, 1.0}, {x, -1.0}}, -kInfinity, 0.0);
  const SecondaryObjective stages[] = {{{{y, 1.0}}, ObjectiveSense::kMinimize},
                                       {{{y, 1.0}}, ObjectiveSense::kMaximize}};
  ASSERT_OK_AND_ASSIGN(LexicographicSolution s, SolveLexicographic(lp, stages, 1e-7));
  EXPECT_NEAR(s.primary.objective_value, 0.0, 1e-9);
  EXPECT_NEAR(s.secondary[0].objective_value, 0.0, 1e-7);
  EXPECT_NEAR(s.secondary[1].objective_value, 0.5, 1e-6);
}

TEST(DenseTableauTest, SmallProgram) {
  // min -x - y  s.t.  x + y + s = 1.
  const DenseLpResult r = SolveStandardFormDense({{1, 1, 1}}, {1}, {-1, -1, 0});
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -1.0, 1e-12);
  const DenseLpResult bad = SolveStandardFormDense({{1, 1}}, {-1}, {0, 0});
  EXPECT_EQ(bad.status, LpStatus::kInfeasible);
}

}  // namespace
}  // namespace plkb
