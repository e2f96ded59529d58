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

// Sparse bounded primal simplex with a light presolve.
//
// The basis is kept as B = [A_S | -I_L] over structural columns S and row
// logicals L; only the kernel A[R, S] (rows whose logical is nonbasic) is
// LU-factored, and column replacements between refactorizations are kept as
// product-form etas.

#ifndef PLKB_SIMPLEX_H_
#define PLKB_SIMPLEX_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "plkb/linear_program.h"

namespace plkb {

struct SimplexOptions {
  // Bound violation accepted inside the solver; final solutions are checked
  // against the original program at `feasibility_check`.
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double feasibility_check = 1e-7;
  int refactor_interval = 64;
  // Non-improving iterations before switching to Bland's rule.
  int stall_limit = 100;
  int64_t max_iterations = 50'000'000;
  bool presolve = true;
};

absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp,
                                   const SimplexOptions& options = {});

struct SecondaryObjective {
  std::vector<LpTerm> terms;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
};

struct LexicographicSolution {
  // Optimum of the program's own objective.
  LpSolution primary;
  // One entry per secondary objective, each optimized with the primary
  // objective held within `tolerance` of its optimum. objective_value is the
  // secondary objective's value.
  std::vector<LpSolution> secondary;
};

// Secondaries are solved independently of each other (only the primary is
// held), reusing the basis of the previous solve.
absl::StatusOr<LexicographicSolution> SolveLexicographic(
    const LinearProgram& lp, std::span<const SecondaryObjective> secondary,
    double tolerance, const SimplexOptions& options = {});

}  // namespace plkb

#endif  // PLKB_SIMPLEX_H_
