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

// Probabilistic inference over a knowledge base by linear programming.
//
// Every atom z gets variables pi(z) and pi(!z) in [0,1] with
// pi(z) + pi(!z) = 1, and every clause c = l1 | ... | lk a variable pi(c) in
// [0,1] with
//
//   pi(c) <= pi(l1) + ... + pi(lk),   pi(c) >= pi(lj) for each j.
//
// The objective sum_i |pi(c_i) - p_i| is linearized as
// pi(c_i) - p_i = e+_i - e-_i with e+_i, e-_i >= 0.

#ifndef PLKB_INFERENCE_H_
#define PLKB_INFERENCE_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "plkb/kb.h"
#include "plkb/linear_program.h"
#include "plkb/query.h"
#include "plkb/simplex.h"

namespace plkb {

// Stage-1 objective slack allowed while optimizing the target.
inline constexpr double kLexicographicTolerance = 1e-7;
// Stage-1 optimum at or below this is reported as a consistent hint.
inline constexpr double kConsistencyTolerance = 1e-6;
inline constexpr double kHalfTolerance = 1e-9;

struct KbLpLayout {
  // Atoms in canonical order, with their positive and negated variables.
  std::vector<Atom> atoms;
  std::vector<int> atom_var;
  std::vector<int> negation_var;
  std::vector<int> clause_var;
  std::vector<int> deviation_plus;
  std::vector<int> deviation_minus;
  absl::flat_hash_map<Atom, int> atom_index;

  std::optional<int> AtomVar(Atom atom) const;
  // Variable holding pi(literal); the atom must be in the layout.
  int LiteralVar(const Literal& literal) const;
};

struct KbProgram {
  LinearProgram lp;
  KbLpLayout layout;
};

// `extra_atoms` are given variables even if no clause mentions them.
KbProgram BuildLp(const KnowledgeBase& kb, std::span<const Atom> extra_atoms = {});

// Adds one equality row per fixed atom: pi(a=v) = 1 for each query item and
// pi(a=w) = 0 for every other value w of the feature that has a variable.
// Returns warnings for items outside the domains.
absl::StatusOr<std::vector<std::string>> ApplyQuery(KbProgram& program,
                                                    const Query& query,
                                                    const Domains& domains);

struct InferenceResult {
  double p_lower = 0.0;
  double p_upper = 0.0;
  double p_avg = 0.0;
  double objective_min = 0.0;
  bool label = false;
  std::vector<std::string> warnings;
};

struct InferenceOptions {
  SimplexOptions simplex;
  // Written to this path in LP format before solving, when set.
  std::optional<std::string> dump_lp_path;
};

// Bounds of pi(target) over the solutions minimizing the deviation objective
// (within kLexicographicTolerance). label is p_avg > 1/2, where averages
// within kHalfTolerance of 1/2 count as 1/2.
absl::StatusOr<InferenceResult> Infer(const KnowledgeBase& kb, const Query& query,
                                      const Domains& domains, Atom target,
                                      const InferenceOptions& options = {});

absl::StatusOr<InferenceResult> InferPos(const KnowledgeBase& kb,
                                         const Query& query,
                                         const Domains& domains,
                                         const InferenceOptions& options = {});

struct ConsistencyReport {
  // True when objective_min <= kConsistencyTolerance. Only the converse is
  // conclusive: a positive minimum proves the base inconsistent.
  bool consistent_hint = false;
  double objective_min = 0.0;
};

absl::StatusOr<ConsistencyReport> CheckConsistency(
    const KnowledgeBase& kb, const SimplexOptions& options = {});

}  // namespace plkb

#endif  // PLKB_INFERENCE_H_
