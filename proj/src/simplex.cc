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

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <span>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "plkb/status_macros.h"
#include "presolve.h"

namespace plkb {
namespace {

using internal::Presolver;
using internal::SparseLp;

// Entries of B^-1 a_q below this are not considered as pivots.
constexpr double kPivotTolerance = 1e-9;
// Eta entries below this are dropped.
constexpr double kEtaDropTolerance = 1e-14;
// Slack bases tried after a singular refactorization before giving up.
constexpr int kMaxBasisResets = 5;

enum class VarStatus : uint8_t { kBasic, kAtLower, kAtUpper, kFree, kFixed };

// Bounded primal simplex over [A | -I] with logical r = A x.
class SimplexEngine {
 public:
  SimplexEngine(const SparseLp& lp, const SimplexOptions& options)
      : options_(options), n_(lp.num_cols), m_(lp.num_rows) {
    col_start_ = lp.col_start;
    row_index_ = lp.row_index;
    value_ = lp.value;
    lower_ = lp.col_lower;
    upper_ = lp.col_upper;
    lower_.insert(lower_.end(), lp.row_lower.begin(), lp.row_lower.end());
    upper_.insert(upper_.end(), lp.row_upper.begin(), lp.row_upper.end());
    x_.assign(n_ + m_, 0.0);
    status_.assign(n_ + m_, VarStatus::kBasic);
    pos_.assign(n_ + m_, -1);
    for (int j = 0; j < n_; ++j) SetNonbasicAtNearestBound(j, 0.0);
    head_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      pos_[n_ + i] = i;
    }
    BuildRowCopy();
    RecomputeActivities();
    PlaceNonbasics();
    Crash();
  }

  // Minimizes cost . x over the structural columns, starting from the
  // current basis.
  absl::StatusOr<LpStatus> Minimize(const std::vector<double>& cost);

  // Appends lower <= coefs . x <= upper with its logical basic.
  void AddRow(const std::vector<double>& coefs, double lower, double upper);

  std::vector<double> StructuralValues() const {
    return std::vector<double>(x_.begin(), x_.begin() + n_);
  }
  int64_t iterations() const { return iterations_; }

 private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  bool IsLogical(int var) const { return var >= n_; }
  void SetNonbasicAtNearestBound(int j, double near);
  void RecomputeActivities();
  void BuildRowCopy();
  void PlaceNonbasics();
  void Crash();
  bool Refactor();
  void ResetToSlackBasis();
  absl::Status RefactorOrReset();
  void RecomputeBasicValues();
  // Row space in, position space out.
  void Ftran(std::vector<double>& v);
  // Position space in, row space out. `nonzeros`, when given, lists every
  // nonzero position of `c`.
  void Btran(std::vector<double>& c, std::span<const int> nonzeros = {});
  void LoadColumn(int var, std::vector<double>& v) const;
  double PrimalInfeasibility(int var) const;

  const SimplexOptions& options_;
  int n_;
  int m_;
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  // Row-wise copy of the structural part.
  std::vector<int> row_start_;
  std::vector<int> col_of_entry_;
  std::vector<double> row_value_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  // Basic variable at each position, and position of each basic variable.
  std::vector<int> head_;
  std::vector<int> pos_;

  // Kernel A[R, S]: rows whose logical is nonbasic, basic structural columns.
  std::vector<int> kernel_rows_;
  std::vector<int> kernel_pos_;
  std::vector<int> kernel_of_row_;
  std::vector<int> kernel_of_col_;
  std::vector<int> logical_pos_;
  // Basis head at the last factorization; etas apply on top of it.
  std::vector<int> factored_head_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>,
                                  Eigen::COLAMDOrdering<int>>>
      lu_;
  std::vector<Eta> etas_;
  // Per position, the (eta, value) entries in eta order.
  std::vector<std::vector<std::pair<int, double>>> eta_rows_;
  std::vector<double> eta_acc_;
  std::vector<double> btran_out_;
  std::vector<double> ftran_out_;
  bool need_refactor_ = true;
  int resets_ = 0;

  std::vector<double> work_;
  int64_t iterations_ = 0;
  // Phase 1 finished with residual violations below the final check; they are
  // no longer driven out.
  bool tolerate_residual_ = false;
};

void SimplexEngine::SetNonbasicAtNearestBound(int j, double near) {
  const double l = lower_[j];
  const double u = upper_[j];
  if (l == u) {
    status_[j] = VarStatus::kFixed;
    x_[j] = l;
  } else if (std::isinf(l) && std::isinf(u)) {
    status_[j] = VarStatus::kFree;
    x_[j] = 0.0;
  } else if (std::isinf(u) || (!std::isinf(l) && near - l <= u - near)) {
    status_[j] = VarStatus::kAtLower;
    x_[j] = l;
  } else {
    status_[j] = VarStatus::kAtUpper;
    x_[j] = u;
  }
}

void SimplexEngine::RecomputeActivities() {
  for (int i = 0; i < m_; ++i) x_[n_ + i] = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      x_[n_ + row_index_[k]] += value_[k] * x_[j];
    }
  }
}

void SimplexEngine::BuildRowCopy() {
  row_start_.assign(m_ + 1, 0);
  for (int e = 0; e < col_start_[n_]; ++e) ++row_start_[row_index_[e] + 1];
  for (int i = 0; i < m_; ++i) row_start_[i + 1] += row_start_[i];
  col_of_entry_.resize(col_start_[n_]);
  row_value_.resize(col_start_[n_]);
  std::vector<int> next(row_start_.begin(), row_start_.end() - 1);
  for (int j = 0; j < n_; ++j) {
    for (int e = col_start_[j]; e < col_start_[j + 1]; ++e) {
      const int k = next[row_index_[e]]++;
      col_of_entry_[k] = j;
      row_value_[k] = value_[e];
    }
  }
}

void SimplexEngine::PlaceNonbasics() {
  // Greedy bound flips of boxed columns that lower the total row violation.
  // Rows owning a free-moving singleton column are skipped; Crash repairs them.
  std::vector<bool> absorbing(m_, false);
  for (int j = 0; j < n_; ++j) {
    if (col_start_[j + 1] - col_start_[j] == 1 && status_[j] != VarStatus::kFixed) {
      absorbing[row_index_[col_start_[j]]] = true;
    }
  }
  auto violation = [&](int i, double activity) {
    return std::max({0.0, lower_[n_ + i] - activity, activity - upper_[n_ + i]});
  };
  constexpr int kMaxPasses = 10;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool changed = false;
    for (int j = 0; j < n_; ++j) {
      if (status_[j] != VarStatus::kAtLower && status_[j] != VarStatus::kAtUpper) continue;
      if (std::isinf(lower_[j]) || std::isinf(upper_[j])) continue;
      const double delta =
          status_[j] == VarStatus::kAtLower ? upper_[j] - lower_[j] : lower_[j] - upper_[j];
      double gain = 0.0;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        const int i = row_index_[k];
        if (absorbing[i]) continue;
        const double r = x_[n_ + i];
        gain += violation(i, r) - violation(i, r + value_[k] * delta);
      }
      if (gain <= options_.primal_tolerance) continue;
      changed = true;
      x_[j] += delta;
      status_[j] = delta > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        x_[n_ + row_index_[k]] += value_[k] * delta;
      }
    }
    if (!changed) break;
  }
}

void SimplexEngine::Crash() {
  // Column singletons absorb the violation of their row, keeping the kernel
  // diagonal.
  for (int j = 0; j < n_; ++j) {
    if (col_start_[j + 1] - col_start_[j] != 1 || status_[j] == VarStatus::kFixed) {
      continue;
    }
    const int i = row_index_[col_start_[j]];
    const double a = value_[col_start_[j]];
    const int logical = n_ + i;
    if (status_[logical] != VarStatus::kBasic || std::abs(a) < 1e-3) continue;
    const double activity = x_[logical];
    const double target = std::clamp(activity, lower_[logical], upper_[logical]);
    if (target == activity) continue;
    const double v = x_[j] + (target - activity) / a;
    if (v < lower_[j] || v > upper_[j]) continue;
    x_[j] = v;
    status_[j] = VarStatus::kBasic;
    head_[i] = j;
    pos_[j] = i;
    pos_[logical] = -1;
    x_[logical] = target;
    status_[logical] = lower_[logical] == upper_[logical] ? VarStatus::kFixed
                       : target == lower_[logical]        ? VarStatus::kAtLower
                                                          : VarStatus::kAtUpper;
  }
}

bool SimplexEngine::Refactor() {
  etas_.clear();
  eta_rows_.resize(m_);
  for (auto& row : eta_rows_) row.clear();
  kernel_rows_.clear();
  kernel_pos_.clear();
  logical_pos_.clear();
  kernel_of_row_.assign(m_, -1);
  kernel_of_col_.assign(n_, -1);
  factored_head_ = head_;
  std::vector<bool> logical_basic(m_, false);
  for (int p = 0; p < m_; ++p) {
    if (IsLogical(head_[p])) {
      logical_basic[head_[p] - n_] = true;
      logical_pos_.push_back(p);
    } else {
      kernel_of_col_[head_[p]] = static_cast<int>(kernel_pos_.size());
      kernel_pos_.push_back(p);
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (!logical_basic[i]) {
      kernel_of_row_[i] = static_cast<int>(kernel_rows_.size());
      kernel_rows_.push_back(i);
    }
  }
  const int k = static_cast<int>(kernel_pos_.size());
  need_refactor_ = false;
  if (k == 0) {
    lu_.reset();
    return true;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int t = 0; t < k; ++t) {
    const int j = head_[kernel_pos_[t]];
    for (int e = col_start_[j]; e < col_start_[j + 1]; ++e) {
      const int r = kernel_of_row_[row_index_[e]];
      if (r >= 0) triplets.emplace_back(r, t, value_[e]);
    }
  }
  Eigen::SparseMatrix<double> kernel(k, k);
  kernel.setFromTriplets(triplets.begin(), triplets.end());
  kernel.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>,
                                         Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(kernel);
  lu_->factorize(kernel);
  return lu_->info() == Eigen::Success;
}

void SimplexEngine::ResetToSlackBasis() {
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    if (!IsLogical(j)) {
      pos_[j] = -1;
      SetNonbasicAtNearestBound(j, x_[j]);
    }
  }
  for (int i = 0; i < m_; ++i) {
    head_[i] = n_ + i;
    pos_[n_ + i] = i;
    status_[n_ + i] = VarStatus::kBasic;
  }
  RecomputeActivities();
}

absl::Status SimplexEngine::RefactorOrReset() {
  if (Refactor()) {
    RecomputeBasicValues();
    return absl::OkStatus();
  }
  if (++resets_ > kMaxBasisResets) {
    return absl::InternalError("simplex basis repeatedly singular");
  }
  ResetToSlackBasis();
  if (!Refactor()) return absl::InternalError("slack basis failed to factor");
  RecomputeBasicValues();
  return absl::OkStatus();
}

void SimplexEngine::RecomputeBasicValues() {
  // B x_B = -N x_N.
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      rhs[row_index_[k]] -= value_[k] * x_[j];
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (status_[n_ + i] != VarStatus::kBasic) rhs[i] += x_[n_ + i];
  }
  Ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

void SimplexEngine::LoadColumn(int var, std::vector<double>& v) const {
  std::fill(v.begin(), v.end(), 0.0);
  if (IsLogical(var)) {
    v[var - n_] = -1.0;
    return;
  }
  for (int k = col_start_[var]; k < col_start_[var + 1]; ++k) {
    v[row_index_[k]] = value_[k];
  }
}

void SimplexEngine::Ftran(std::vector<double>& v) {
  const int k = static_cast<int>(kernel_pos_.size());
  work_.assign(m_, 0.0);
  std::vector<double>& w = work_;
  ftran_out_.assign(m_, 0.0);
  std::vector<double>& out = ftran_out_;
  if (k > 0) {
    Eigen::VectorXd b(k);
    for (int t = 0; t < k; ++t) b[t] = v[kernel_rows_[t]];
    const Eigen::VectorXd xs = b.isZero(0.0) ? b : Eigen::VectorXd(lu_->solve(b));
    for (int t = 0; t < k; ++t) {
      const int p = kernel_pos_[t];
      out[p] = xs[t];
      if (xs[t] == 0.0) continue;
      const int j = factored_head_[p];
      for (int e = col_start_[j]; e < col_start_[j + 1]; ++e) {
        const int i = row_index_[e];
        if (kernel_of_row_[i] < 0) w[i] += value_[e] * xs[t];
      }
    }
  }
  for (int p : logical_pos_) {
    const int i = factored_head_[p] - n_;
    out[p] = w[i] - v[i];
  }
  for (const Eta& eta : etas_) {
    const double xp = out[eta.pos] / eta.pivot;
    out[eta.pos] = xp;
    if (xp == 0.0) continue;
    for (size_t t = 0; t < eta.index.size(); ++t) {
      out[eta.index[t]] -= eta.value[t] * xp;
    }
  }
  v.swap(out);
}

void SimplexEngine::Btran(std::vector<double>& c, std::span<const int> nonzeros) {
  const int num_etas = static_cast<int>(etas_.size());
  if (num_etas > 0 && !nonzeros.empty()) {
    // Sparse input: eta t needs c at its entries after etas t+1.. have been
    // applied, so push contributions from nonzeros through the row-wise copy.
    eta_acc_.assign(num_etas, 0.0);
    for (int p : nonzeros) {
      for (const auto& [t, v] : eta_rows_[p]) eta_acc_[t] += v * c[p];
    }
    for (int t = num_etas - 1; t >= 0; --t) {
      const Eta& eta = etas_[t];
      const double old = c[eta.pos];
      if (old == 0.0 && eta_acc_[t] == 0.0) continue;
      const double updated = (old - eta_acc_[t]) / eta.pivot;
      c[eta.pos] = updated;
      const double delta = updated - old;
      for (const auto& [s, v] : eta_rows_[eta.pos]) {
        if (s >= t) break;
        eta_acc_[s] += v * delta;
      }
    }
  } else {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double sum = c[it->pos];
      for (size_t t = 0; t < it->index.size(); ++t) {
        sum -= it->value[t] * c[it->index[t]];
      }
      c[it->pos] = sum / it->pivot;
    }
  }
  btran_out_.assign(m_, 0.0);
  std::vector<double>& y = btran_out_;
  const int k = static_cast<int>(kernel_pos_.size());
  Eigen::VectorXd rhs(k);
  for (int t = 0; t < k; ++t) rhs[t] = c[kernel_pos_[t]];
  // Kernel right-hand side: subtract the logical rows' part through the row
  // copy, touching only rows with a nonzero dual.
  for (int p : logical_pos_) {
    const int i = factored_head_[p] - n_;
    y[i] = -c[p];
    if (y[i] == 0.0 || k == 0) continue;
    for (int e = row_start_[i]; e < row_start_[i + 1]; ++e) {
      const int t = kernel_of_col_[col_of_entry_[e]];
      if (t >= 0) rhs[t] -= row_value_[e] * y[i];
    }
  }
  if (k > 0 && !rhs.isZero(0.0)) {
    const Eigen::VectorXd yr = lu_->transpose().solve(rhs);
    for (int t = 0; t < k; ++t) y[kernel_rows_[t]] = yr[t];
  }
  c.swap(y);
}

double SimplexEngine::PrimalInfeasibility(int var) const {
  return std::max({0.0, lower_[var] - x_[var], x_[var] - upper_[var]});
}

absl::StatusOr<LpStatus> SimplexEngine::Minimize(const std::vector<double>& cost) {
  const double ptol = options_.primal_tolerance;
  const double dtol = options_.dual_tolerance;
  const int total = n_ + m_;
  tolerate_residual_ = false;
  std::vector<double> y(m_);
  std::vector<double> alpha(m_);
  std::vector<double> rho(m_);
  std::vector<int> support;
  std::vector<double> pivot_row(total, 0.0);
  std::vector<int> row_support;
  std::vector<bool> in_row(total, false);
  // Reduced costs of nonbasic variables; kept current by pivot-row updates
  // in phase 2 and recomputed otherwise.
  std::vector<double> d(total, 0.0);
  std::vector<double> devex(total, 1.0);
  bool duals_valid = false;
  bool primal_feasible = false;
  int stalled = 0;
  bool bland = false;
  bool fresh = false;

  while (true) {
    if (need_refactor_ || static_cast<int>(etas_.size()) >= options_.refactor_interval) {
      RETURN_IF_ERROR(RefactorOrReset());
      fresh = true;
      duals_valid = false;
      primal_feasible = false;
    }
    if (iterations_ > options_.max_iterations) {
      return absl::ResourceExhaustedError("simplex iteration limit reached");
    }

    // Phase 1 prices the sum of bound violations of basic variables. Phase 2
    // steps keep the basis feasible, so the full scan runs only after values
    // were recomputed or a step left a violation.
    bool phase1 = false;
    if (!primal_feasible) {
      for (int p = 0; p < m_; ++p) {
        y[p] = 0.0;
        if (tolerate_residual_) continue;
        const int j = head_[p];
        if (x_[j] < lower_[j] - ptol) {
          y[p] = -1.0;
          phase1 = true;
        } else if (x_[j] > upper_[j] + ptol) {
          y[p] = 1.0;
          phase1 = true;
        }
      }
      primal_feasible = !phase1;
    }
    if (phase1 || !duals_valid) {
      if (!phase1) {
        for (int p = 0; p < m_; ++p) {
          y[p] = IsLogical(head_[p]) ? 0.0 : cost[head_[p]];
        }
      }
      Btran(y);
      for (int j = 0; j < total; ++j) {
        if (status_[j] == VarStatus::kBasic) {
          d[j] = 0.0;
        } else if (IsLogical(j)) {
          d[j] = y[j - n_];
        } else {
          double dj = phase1 ? 0.0 : cost[j];
          for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
            dj -= value_[k] * y[row_index_[k]];
          }
          d[j] = dj;
        }
      }
      duals_valid = !phase1;
    }

    // Devex pricing: largest d_j^2 / w_j among improving columns.
    int entering = -1;
    double best = 0.0;
    for (int j = 0; j < total; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::kBasic || s == VarStatus::kFixed) continue;
      const double dj = d[j];
      const bool improving = (s == VarStatus::kAtLower && dj < -dtol) ||
                             (s == VarStatus::kAtUpper && dj > dtol) ||
                             (s == VarStatus::kFree && std::abs(dj) > dtol);
      if (!improving) continue;
      if (bland) {
        entering = j;
        break;
      }
      const double score = dj * dj / devex[j];
      if (score > best) {
        best = score;
        entering = j;
      }
    }

    if (entering < 0) {
      if (!fresh && !etas_.empty()) {
        // Confirm on a fresh factorization before concluding.
        need_refactor_ = true;
        continue;
      }
      if (!fresh && !phase1 && duals_valid) {
        duals_valid = false;
        fresh = true;
        continue;
      }
      if (!phase1) return LpStatus::kOptimal;
      double worst = 0.0;
      for (int p = 0; p < m_; ++p) {
        worst = std::max(worst, PrimalInfeasibility(head_[p]));
      }
      if (worst <= options_.feasibility_check * 0.1) {
        tolerate_residual_ = true;
        primal_feasible = false;
        continue;
      }
      return LpStatus::kInfeasible;
    }
    fresh = false;
    const double d_entering = d[entering];

    LoadColumn(entering, alpha);
    Ftran(alpha);
    support.clear();
    for (int p = 0; p < m_; ++p) {
      if (alpha[p] != 0.0) support.push_back(p);
    }
    const double dir = d_entering < 0 ? 1.0 : -1.0;

    // Harris ratio test: pass 1 bounds the step with relaxed bounds, pass 2
    // picks the largest pivot among rows blocking within that bound.
    auto blocking_bound = [&](int p, double rate, double* bound) {
      const int j = head_[p];
      const double v = x_[j];
      const bool below = !tolerate_residual_ && v < lower_[j] - ptol;
      const bool above = !tolerate_residual_ && v > upper_[j] + ptol;
      if (rate < 0) {
        if (phase1 && above) {
          *bound = upper_[j];
          return true;
        }
        if (phase1 && below) return false;
        *bound = lower_[j];
      } else {
        if (phase1 && below) {
          *bound = lower_[j];
          return true;
        }
        if (phase1 && above) return false;
        *bound = upper_[j];
      }
      return !std::isinf(*bound);
    };

    double harris = kInfinity;
    for (int p : support) {
      if (std::abs(alpha[p]) < kPivotTolerance) continue;
      const double rate = -dir * alpha[p];
      double bound;
      if (!blocking_bound(p, rate, &bound)) continue;
      const double v = x_[head_[p]];
      const double relaxed =
          rate < 0 ? (v - (bound - ptol)) / -rate : ((bound + ptol) - v) / rate;
      harris = std::min(harris, relaxed);
    }
    int leave_pos = -1;
    double step = kInfinity;
    double leave_bound = 0.0;
    double best_pivot = 0.0;
    for (int p : support) {
      if (std::abs(alpha[p]) < kPivotTolerance) continue;
      const double rate = -dir * alpha[p];
      double bound;
      if (!blocking_bound(p, rate, &bound)) continue;
      const double exact = (bound - x_[head_[p]]) / rate;
      if (bland) {
        if (exact < step - 1e-12 ||
            (exact <= step + 1e-12 && leave_pos >= 0 && head_[p] < head_[leave_pos])) {
          step = exact;
          leave_pos = p;
          leave_bound = bound;
        }
      } else if (exact <= harris && std::abs(alpha[p]) > best_pivot) {
        best_pivot = std::abs(alpha[p]);
        leave_pos = p;
        leave_bound = bound;
        step = exact;
      }
    }
    const double span = upper_[entering] - lower_[entering];
    const bool flip = !std::isinf(span) && span <= (bland ? step : harris) &&
                      status_[entering] != VarStatus::kFree;
    if (!flip && leave_pos < 0) {
      if (phase1) return absl::InternalError("unbounded phase 1 ray");
      return LpStatus::kUnbounded;
    }
    if (flip) step = span;
    step = std::max(step, 0.0);

    ++iterations_;
    if (step * std::abs(d_entering) > 1e-12) {
      stalled = 0;
      bland = false;
    } else if (++stalled > options_.stall_limit) {
      bland = true;
    }

    x_[entering] += dir * step;
    if (step != 0.0) {
      for (int p : support) {
        const int j = head_[p];
        x_[j] -= dir * step * alpha[p];
        if (x_[j] < lower_[j] - ptol || x_[j] > upper_[j] + ptol) primal_feasible = false;
      }
    }
    if (flip) {
      const bool to_upper = dir > 0;
      status_[entering] = to_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x_[entering] = to_upper ? upper_[entering] : lower_[entering];
      continue;
    }

    // Pivot row alpha_r = e_r^T B^-1 [A | -I] from rho = B^-T e_r.
    const double pivot = alpha[leave_pos];
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[leave_pos] = 1.0;
    Btran(rho, std::span<const int>(&leave_pos, 1));
    row_support.clear();
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (ri == 0.0) continue;
      for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        const int j = col_of_entry_[k];
        if (!in_row[j]) {
          in_row[j] = true;
          row_support.push_back(j);
        }
        pivot_row[j] += ri * row_value_[k];
      }
      const int logical = n_ + i;
      in_row[logical] = true;
      row_support.push_back(logical);
      pivot_row[logical] = -ri;
    }
    const double row_pivot = in_row[entering] ? pivot_row[entering] : 0.0;
    if (std::abs(row_pivot - pivot) > 1e-7 * (1.0 + std::abs(pivot))) {
      // The factorization has drifted; rebuild it after this pivot.
      need_refactor_ = true;
    }

    const int leaving = head_[leave_pos];
    const double theta = d_entering / pivot;
    const double w_entering = std::max(devex[entering], 1.0);
    double max_weight = 0.0;
    for (int j : row_support) {
      const double arj = pivot_row[j];
      pivot_row[j] = 0.0;
      in_row[j] = false;
      if (status_[j] == VarStatus::kBasic || j == entering) continue;
      if (duals_valid) d[j] -= theta * arj;
      const double ratio = arj / pivot;
      devex[j] = std::max(devex[j], ratio * ratio * w_entering);
      max_weight = std::max(max_weight, devex[j]);
    }
    d[entering] = 0.0;
    d[leaving] = -theta;
    devex[leaving] = std::max(w_entering / (pivot * pivot), 1.0);
    if (max_weight > 1e8) std::fill(devex.begin(), devex.end(), 1.0);

    x_[leaving] = leave_bound;
    status_[leaving] = lower_[leaving] == upper_[leaving] ? VarStatus::kFixed
                       : leave_bound == lower_[leaving]   ? VarStatus::kAtLower
                                                          : VarStatus::kAtUpper;
    pos_[leaving] = -1;
    head_[leave_pos] = entering;
    pos_[entering] = leave_pos;
    status_[entering] = VarStatus::kBasic;

    const int eta_id = static_cast<int>(etas_.size());
    Eta eta{leave_pos, pivot, {}, {}};
    for (int p : support) {
      if (p != leave_pos && std::abs(alpha[p]) > kEtaDropTolerance) {
        eta.index.push_back(p);
        eta.value.push_back(alpha[p]);
        eta_rows_[p].emplace_back(eta_id, alpha[p]);
      }
    }
    etas_.push_back(std::move(eta));
  }
}

void SimplexEngine::AddRow(const std::vector<double>& coefs, double lower,
                           double upper) {
  std::vector<int> start(n_ + 1, 0);
  std::vector<int> index;
  std::vector<double> value;
  double activity = 0.0;
  for (int j = 0; j < n_; ++j) {
    index.insert(index.end(), row_index_.begin() + col_start_[j],
                 row_index_.begin() + col_start_[j + 1]);
    value.insert(value.end(), value_.begin() + col_start_[j],
                 value_.begin() + col_start_[j + 1]);
    if (coefs[j] != 0.0) {
      index.push_back(m_);
      value.push_back(coefs[j]);
      activity += coefs[j] * x_[j];
    }
    start[j + 1] = static_cast<int>(index.size());
  }
  col_start_ = std::move(start);
  row_index_ = std::move(index);
  value_ = std::move(value);
  const int logical = n_ + m_;
  lower_.push_back(lower);
  upper_.push_back(upper);
  x_.push_back(activity);
  status_.push_back(VarStatus::kBasic);
  pos_.push_back(m_);
  head_.push_back(logical);
  ++m_;
  BuildRowCopy();
  need_refactor_ = true;
}

}  // namespace

absl::StatusOr<LexicographicSolution> SolveLexicographic(
    const LinearProgram& lp, std::span<const SecondaryObjective> secondary,
    double tolerance, const SimplexOptions& options) {
  RETURN_IF_ERROR(lp.Validate());
  const int n = lp.num_variables();
  std::vector<std::vector<double>> costs;
  const double primary_sign = lp.sense() == ObjectiveSense::kMinimize ? 1.0 : -1.0;
  costs.emplace_back(n);
  for (int j = 0; j < n; ++j) costs[0][j] = primary_sign * lp.variables()[j].cost;
  for (const SecondaryObjective& obj : secondary) {
    const double sign = obj.sense == ObjectiveSense::kMinimize ? 1.0 : -1.0;
    std::vector<double>& c = costs.emplace_back(n, 0.0);
    for (const LpTerm& t : obj.terms) {
      if (t.var < 0 || t.var >= n) {
        return absl::InvalidArgumentError("secondary objective references undeclared variable");
      }
      c[t.var] += sign * t.coef;
    }
  }

  LexicographicSolution result;
  auto fill_status = [&](LpStatus status) {
    result.primary.status = status;
    result.secondary.assign(secondary.size(), LpSolution{status, 0.0, {}, 0});
    return result;
  };

  Presolver presolver(lp, std::move(costs), options.primal_tolerance);
  if (!presolver.Run(options.presolve)) return fill_status(LpStatus::kInfeasible);
  const SparseLp& reduced = presolver.reduced();

  SimplexEngine engine(reduced, options);
  auto finish = [&](LpStatus status, LpSolution& out) -> absl::Status {
    out.status = status;
    out.iterations = static_cast<int>(engine.iterations());
    if (status != LpStatus::kOptimal) return absl::OkStatus();
    out.values = presolver.Postsolve(engine.StructuralValues());
    const double violation = lp.MaxViolation(out.values);
    if (violation > options.feasibility_check) {
      return absl::InternalError(absl::StrFormat(
          "simplex solution violates constraints by %g", violation));
    }
    return absl::OkStatus();
  };

  ASSIGN_OR_RETURN(const LpStatus primary_status, engine.Minimize(reduced.costs[0]));
  RETURN_IF_ERROR(finish(primary_status, result.primary));
  if (primary_status != LpStatus::kOptimal) return fill_status(primary_status);
  result.primary.objective_value = lp.ObjectiveValue(result.primary.values);
  if (secondary.empty()) return result;

  // Hold the primary objective (in reduced space; the offset cancels).
  const std::vector<double> reduced_values = engine.StructuralValues();
  double reduced_optimum = 0.0;
  for (int j = 0; j < reduced.num_cols; ++j) {
    reduced_optimum += reduced.costs[0][j] * reduced_values[j];
  }
  engine.AddRow(reduced.costs[0], -kInfinity, reduced_optimum + tolerance);
  for (size_t k = 0; k < secondary.size(); ++k) {
    LpSolution& out = result.secondary.emplace_back();
    ASSIGN_OR_RETURN(const LpStatus status, engine.Minimize(reduced.costs[k + 1]));
    RETURN_IF_ERROR(finish(status, out));
    if (status != LpStatus::kOptimal) continue;
    for (const LpTerm& t : secondary[k].terms) {
      out.objective_value += t.coef * out.values[t.var];
    }
  }
  return result;
}

absl::StatusOr<LpSolution> SolveLp(const LinearProgram& lp,
                                   const SimplexOptions& options) {
  ASSIGN_OR_RETURN(LexicographicSolution solution,
                   SolveLexicographic(lp, {}, 0.0, options));
  return std::move(solution.primary);
}

}  // namespace plkb
