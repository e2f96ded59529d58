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
#include <cmath>
#include <fstream>

#include "absl/strings/str_cat.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

void FixAtom(KbProgram& program, Atom atom, double value) {
  const std::optional<int> var = program.layout.AtomVar(atom);
  if (!var.has_value()) return;
  program.lp.AddRow(absl::StrCat("fix[", atom.ToString(), "]"), {{*var, 1.0}},
                    value, value);
}

}  // namespace

std::optional<int> KbLpLayout::AtomVar(Atom atom) const {
  const auto it = atom_index.find(atom);
  if (it == atom_index.end()) return std::nullopt;
  return atom_var[it->second];
}

int KbLpLayout::LiteralVar(const Literal& literal) const {
  const int k = atom_index.at(literal.atom);
  return literal.negated ? negation_var[k] : atom_var[k];
}

KbProgram BuildLp(const KnowledgeBase& kb, std::span<const Atom> extra_atoms) {
  KbProgram program;
  KbLpLayout& layout = program.layout;
  LinearProgram& lp = program.lp;

  layout.atoms = kb.Universe();
  for (Atom a : extra_atoms) {
    if (std::find(layout.atoms.begin(), layout.atoms.end(), a) == layout.atoms.end()) {
      layout.atoms.push_back(a);
    }
  }
  std::sort(layout.atoms.begin(), layout.atoms.end(),
            [](Atom a, Atom b) { return CanonicalLess(a, b); });
  for (size_t k = 0; k < layout.atoms.size(); ++k) {
    const std::string name = layout.atoms[k].ToString();
    layout.atom_index[layout.atoms[k]] = static_cast<int>(k);
    layout.atom_var.push_back(lp.AddVariable(absl::StrCat("pi(", name, ")"), 0, 1));
    layout.negation_var.push_back(
        lp.AddVariable(absl::StrCat("pi(!", name, ")"), 0, 1));
  }
  for (size_t i = 0; i < kb.size(); ++i) {
    layout.clause_var.push_back(lp.AddVariable(absl::StrCat("pi(c", i, ")"), 0, 1));
  }
  for (size_t i = 0; i < kb.size(); ++i) {
    layout.deviation_plus.push_back(
        lp.AddVariable(absl::StrCat("e+[", i, "]"), 0, kInfinity, 1.0));
    layout.deviation_minus.push_back(
        lp.AddVariable(absl::StrCat("e-[", i, "]"), 0, kInfinity, 1.0));
  }

  for (size_t i = 0; i < kb.size(); ++i) {
    const int c = layout.clause_var[i];
    std::vector<LpTerm> upper = {{c, 1.0}};
    for (const Literal& lit : kb.clause(i)) {
      upper.push_back({layout.LiteralVar(lit), -1.0});
    }
    lp.AddRow(absl::StrCat("upper[", i, "]"), std::move(upper), -kInfinity, 0.0);
    for (const Literal& lit : kb.clause(i)) {
      lp.AddRow(absl::StrCat("lower[", i, ",", lit.ToString(), "]"),
                {{c, 1.0}, {layout.LiteralVar(lit), -1.0}}, 0.0, kInfinity);
    }
  }
  for (size_t k = 0; k < layout.atoms.size(); ++k) {
    lp.AddRow(absl::StrCat("complement[", layout.atoms[k].ToString(), "]"),
              {{layout.atom_var[k], 1.0}, {layout.negation_var[k], 1.0}}, 1.0, 1.0);
  }
  for (size_t i = 0; i < kb.size(); ++i) {
    const double p = kb.probability(i);
    lp.AddRow(absl::StrCat("deviation[", i, "]"),
              {{layout.clause_var[i], 1.0},
               {layout.deviation_plus[i], -1.0},
               {layout.deviation_minus[i], 1.0}},
              p, p);
  }
  return program;
}

absl::StatusOr<std::vector<std::string>> ApplyQuery(KbProgram& program,
                                                    const Query& query,
                                                    const Domains& domains) {
  std::vector<std::string> warnings;
  for (const auto& [feature, value] : query.assignments()) {
    ASSIGN_OR_RETURN(const Atom asserted, Atom::FeatureValue(feature, value));
    FixAtom(program, asserted, 1.0);
    const auto domain = domains.find(feature);
    if (domain == domains.end()) {
      warnings.push_back(absl::StrCat("feature '", feature, "' has no known domain"));
      continue;
    }
    if (!domain->second.contains(value)) {
      warnings.push_back(absl::StrCat("value '", value, "' outside the domain of '",
                                      feature, "'"));
    }
    for (const std::string& other : domain->second) {
      if (other == value) continue;
      ASSIGN_OR_RETURN(const Atom atom, Atom::FeatureValue(feature, other));
      FixAtom(program, atom, 0.0);
    }
  }
  return warnings;
}

absl::StatusOr<InferenceResult> Infer(const KnowledgeBase& kb, const Query& query,
                                      const Domains& domains, Atom target,
                                      const InferenceOptions& options) {
  const Atom extra[] = {target};
  KbProgram program = BuildLp(kb, extra);
  InferenceResult result;
  ASSIGN_OR_RETURN(result.warnings, ApplyQuery(program, query, domains));
  if (options.dump_lp_path.has_value()) {
    std::ofstream out(*options.dump_lp_path);
    out << program.lp.ToLpFormat();
    if (!out) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot write ", *options.dump_lp_path));
    }
  }

  const int t = *program.layout.AtomVar(target);
  const SecondaryObjective stages[] = {
      {{{t, 1.0}}, ObjectiveSense::kMinimize},
      {{{t, 1.0}}, ObjectiveSense::kMaximize},
  };
  ASSIGN_OR_RETURN(
      const LexicographicSolution solution,
      SolveLexicographic(program.lp, stages, kLexicographicTolerance, options.simplex));
  if (solution.primary.status == LpStatus::kInfeasible) {
    return absl::FailedPreconditionError("query constraints are contradictory");
  }
  for (const LpSolution& s : solution.secondary) {
    if (s.status != LpStatus::kOptimal) {
      return absl::InternalError(absl::StrCat("bound stage ended ",
                                              LpStatusName(s.status)));
    }
  }
  if (solution.primary.status != LpStatus::kOptimal) {
    return absl::InternalError(absl::StrCat("deviation stage ended ",
                                            LpStatusName(solution.primary.status)));
  }
  result.objective_min = std::max(0.0, solution.primary.objective_value);
  result.p_lower = std::clamp(solution.secondary[0].objective_value, 0.0, 1.0);
  result.p_upper = std::clamp(solution.secondary[1].objective_value, 0.0, 1.0);
  if (result.p_lower > result.p_upper) {
    result.p_lower = result.p_upper = 0.5 * (result.p_lower + result.p_upper);
  }
  result.p_avg = 0.5 * (result.p_lower + result.p_upper);
  result.label = result.p_avg > 0.5 + kHalfTolerance;
  return result;
}

absl::StatusOr<InferenceResult> InferPos(const KnowledgeBase& kb,
                                         const Query& query,
                                         const Domains& domains,
                                         const InferenceOptions& options) {
  return Infer(kb, query, domains, Atom::Class(), options);
}

absl::StatusOr<ConsistencyReport> CheckConsistency(const KnowledgeBase& kb,
                                                   const SimplexOptions& options) {
  const KbProgram program = BuildLp(kb);
  ASSIGN_OR_RETURN(const LpSolution solution, SolveLp(program.lp, options));
  if (solution.status != LpStatus::kOptimal) {
    return absl::InternalError(absl::StrCat("deviation stage ended ",
                                            LpStatusName(solution.status)));
  }
  ConsistencyReport report;
  report.objective_min = std::max(0.0, solution.objective_value);
  report.consistent_hint = report.objective_min <= kConsistencyTolerance;
  return report;
}

}  // namespace plkb
