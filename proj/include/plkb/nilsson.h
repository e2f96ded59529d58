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

// Exact probabilistic satisfiability over all possible worlds, for checking
// the linear relaxation on small bases. Uses its own dense tableau simplex,
// sharing no code with the sparse solver.

#ifndef PLKB_NILSSON_H_
#define PLKB_NILSSON_H_

#include <vector>

#include "absl/status/statusor.h"
#include "plkb/kb.h"
#include "plkb/linear_program.h"

namespace plkb {

inline constexpr int kMaxOracleAtoms = 16;

struct DenseLpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Minimizes c.x subject to A x = b, x >= 0 with a two-phase tableau simplex
// under Bland's rule. `a` is row-major.
DenseLpResult SolveStandardFormDense(const std::vector<std::vector<double>>& a,
                                     const std::vector<double>& b,
                                     const std::vector<double>& c);

struct OracleResult {
  bool feasible = false;
  // Extremes of P(target) over all world distributions matching the base.
  double p_min = 0.0;
  double p_max = 0.0;
};

// Worlds range over the atoms of `kb` plus `target`; at most kMaxOracleAtoms.
absl::StatusOr<OracleResult> NilssonOracle(const KnowledgeBase& kb, Atom target);

}  // namespace plkb

#endif  // PLKB_NILSSON_H_
