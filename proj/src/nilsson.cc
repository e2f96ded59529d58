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

#include "plkb/nilsson.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "absl/strings/str_cat.h"

namespace plkb {
namespace {

constexpr double kEps = 1e-11;
// Phase-1 residual above this means the equality system has no solution.
constexpr double kInfeasibleResidual = 1e-9;

// Tableau rows 0..m-1 hold [A | b]; `cost` holds reduced costs and, in its
// last slot, minus the objective value.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)),
        cost_(cols + 1, 0.0), basis_(rows, -1), eligible_(cols, true) {}

  double& at(int i, int j) { return t_[i][j]; }
  double& rhs(int i) { return t_[i][n_]; }
  std::vector<double>& cost() { return cost_; }
  std::vector<int>& basis() { return basis_; }
  std::vector<bool>& eligible() { return eligible_; }
  int rows() const { return m_; }

  void Pivot(int r, int q) {
    const double piv = t_[r][q];
    for (double& v : t_[r]) v /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i != r) Eliminate(t_[i], r, q);
    }
    Eliminate(cost_, r, q);
    basis_[r] = q;
  }

  // Bland's rule: smallest eligible improving column, smallest-index
  // leaving variable among ratio ties. Returns false when unbounded.
  bool Optimize() {
    while (true) {
      int q = -1;
      for (int j = 0; j < n_; ++j) {
        if (eligible_[j] && cost_[j] < -kEps) {
          q = j;
          break;
        }
      }
      if (q < 0) return true;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][q] <= kEps) continue;
        const double ratio = t_[i][n_] / t_[i][q];
        if (r < 0 || ratio < best - kEps ||
            (ratio <= best + kEps && basis_[i] < basis_[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      Pivot(r, q);
    }
  }

  void RemoveRow(int r) {
    t_.erase(t_.begin() + r);
    basis_.erase(basis_.begin() + r);
    --m_;
  }

 private:
  void Eliminate(std::vector<double>& row, int r, int q) {
    const double f = row[q];
    if (f == 0.0) return;
    const std::vector<double>& pr = t_[r];
    for (int j = 0; j <= n_; ++j) row[j] -= f * pr[j];
    row[q] = 0.0;
  }

  int m_;
  int n_;
  std::vector<std::vector<double>> t_;
  std::vector<double> cost_;
  std::vector<int> basis_;
  std::vector<bool> eligible_;
};

}  // namespace

DenseLpResult SolveStandardFormDense(const std::vector<std::vector<double>>& a,
                                     const std::vector<double>& b,
                                     const std::vector<double>& c) {
  const int m = static_cast<int>(b.size());
  const int n = static_cast<int>(c.size());
  // Columns n..n+m-1 are artificials.
  Tableau tab(m, n + m);
  for (int i = 0; i < m; ++i) {
    const double sign = b[i] < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.at(i, j) = sign * a[i][j];
    tab.at(i, n + i) = 1.0;
    tab.rhs(i) = sign * b[i];
    tab.basis()[i] = n + i;
  }
  // Phase 1: minimize the sum of artificials.
  std::vector<double>& cost = tab.cost();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) cost[j] -= tab.at(i, j);
    cost[n + m] -= tab.rhs(i);
  }
  tab.Optimize();
  DenseLpResult result;
  if (-cost[n + m] > kInfeasibleResidual) return result;

  // Drive artificials out of the basis; rows where that fails are redundant.
  for (int i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basis()[i] < n) continue;
    int q = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > 1e-9) {
        q = j;
        break;
      }
    }
    if (q >= 0) {
      tab.Pivot(i, q);
    } else {
      tab.RemoveRow(i);
    }
  }
  for (int j = n; j < n + m; ++j) tab.eligible()[j] = false;

  // Phase 2 reduced costs: c_j - c_B B^-1 a_j.
  std::fill(cost.begin(), cost.end(), 0.0);
  for (int j = 0; j < n; ++j) cost[j] = c[j];
  for (int i = 0; i < tab.rows(); ++i) {
    const int bj = tab.basis()[i];
    const double cb = c[bj];
    if (cb == 0.0) continue;
    for (int j = 0; j < n + m; ++j) cost[j] -= cb * tab.at(i, j);
    cost[n + m] -= cb * tab.rhs(i);
  }
  if (!tab.Optimize()) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (int i = 0; i < tab.rows(); ++i) {
    if (tab.basis()[i] < n) result.x[tab.basis()[i]] = tab.rhs(i);
  }
  result.objective = 0.0;
  for (int j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

absl::StatusOr<OracleResult> NilssonOracle(const KnowledgeBase& kb, Atom target) {
  std::vector<Atom> atoms = kb.Universe();
  if (std::find(atoms.begin(), atoms.end(), target) == atoms.end()) {
    atoms.push_back(target);
  }
  const int n = static_cast<int>(atoms.size());
  if (n > kMaxOracleAtoms) {
    return absl::InvalidArgumentError(absl::StrCat(
        n, " atoms exceed the oracle's limit of ", kMaxOracleAtoms));
  }
  auto bit_of = [&](Atom a) {
    return static_cast<int>(std::find(atoms.begin(), atoms.end(), a) - atoms.begin());
  };
  const uint32_t worlds = uint32_t{1} << n;

  // Row 0: total mass. Row 1 + i: mass of the worlds satisfying clause i.
  std::vector<std::vector<double>> a(kb.size() + 1, std::vector<double>(worlds, 0.0));
  std::vector<double> b(kb.size() + 1, 0.0);
  std::fill(a[0].begin(), a[0].end(), 1.0);
  b[0] = 1.0;
  for (size_t i = 0; i < kb.size(); ++i) {
    std::vector<std::pair<int, bool>> lits;
    for (const Literal& lit : kb.clause(i)) lits.emplace_back(bit_of(lit.atom), lit.negated);
    for (uint32_t w = 0; w < worlds; ++w) {
      bool satisfied = false;
      for (const auto& [bit, negated] : lits) {
        if ((((w >> bit) & 1) != 0) != negated) {
          satisfied = true;
          break;
        }
      }
      a[i + 1][w] = satisfied ? 1.0 : 0.0;
    }
    b[i + 1] = kb.probability(i);
  }
  const int target_bit = bit_of(target);
  std::vector<double> c(worlds, 0.0);
  for (uint32_t w = 0; w < worlds; ++w) c[w] = (w >> target_bit) & 1 ? 1.0 : 0.0;

  OracleResult result;
  const DenseLpResult low = SolveStandardFormDense(a, b, c);
  if (low.status != LpStatus::kOptimal) return result;
  for (double& v : c) v = -v;
  const DenseLpResult high = SolveStandardFormDense(a, b, c);
  if (high.status != LpStatus::kOptimal) {
    return absl::InternalError("oracle maximization failed on a feasible system");
  }
  result.feasible = true;
  result.p_min = low.objective;
  result.p_max = -high.objective;
  return result;
}

}  // namespace plkb
