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

#include "presolve.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/hash/hash.h"

namespace plkb::internal {
namespace {

// Coefficients below this magnitude are dropped after substitution.
constexpr double kDropTolerance = 1e-12;
// A doubleton column is substituted out only if its coefficient is at least
// this fraction of the larger one.
constexpr double kAggregatePivotRatio = 0.1;

// Image of the interval [lo, hi] of x under x -> (rhs - b * x) / a.
std::pair<double, double> AffineImage(double lo, double hi, double rhs,
                                      double a, double b) {
  const double slope = -b / a;
  auto map = [&](double x) {
    if (std::isinf(x)) return (slope > 0) == (x > 0) ? kInfinity : -kInfinity;
    return (rhs - b * x) / a;
  };
  const double p = map(lo);
  const double q = map(hi);
  return {std::min(p, q), std::max(p, q)};
}

}  // namespace

Presolver::Presolver(const LinearProgram& lp,
                     std::vector<std::vector<double>> objectives,
                     double tolerance)
    : tol_(tolerance),
      num_cols_(lp.num_variables()),
      costs_(std::move(objectives)),
      offsets_(costs_.size(), 0.0) {
  col_lower_.reserve(num_cols_);
  col_upper_.reserve(num_cols_);
  for (const LpVariable& v : lp.variables()) {
    col_lower_.push_back(v.lower);
    col_upper_.push_back(v.upper);
  }
  col_alive_.assign(num_cols_, true);
  col_rows_.resize(num_cols_);
  const int m = lp.num_rows();
  rows_.resize(m);
  row_lower_.resize(m);
  row_upper_.resize(m);
  row_alive_.assign(m, true);
  for (int i = 0; i < m; ++i) {
    const LpRow& row = lp.rows()[i];
    row_lower_[i] = row.lower;
    row_upper_[i] = row.upper;
    for (const LpTerm& t : row.terms) {
      if (t.coef == 0.0) continue;
      const int at = FindEntry(i, t.var);
      if (at >= 0) {
        rows_[i][at].coef += t.coef;
      } else {
        rows_[i].push_back({t.var, t.coef});
        col_rows_[t.var].push_back(i);
      }
    }
    std::erase_if(rows_[i], [](const Entry& e) { return e.coef == 0.0; });
  }
  row_queued_.assign(m, false);
  col_queued_.assign(num_cols_, false);
}

void Presolver::PushRow(int i) {
  if (row_alive_[i] && !row_queued_[i]) {
    row_queued_[i] = true;
    row_queue_.push_back(i);
  }
}

void Presolver::PushCol(int j) {
  if (col_alive_[j] && !col_queued_[j]) {
    col_queued_[j] = true;
    col_queue_.push_back(j);
  }
}

int Presolver::FindEntry(int row, int col) const {
  const std::vector<Entry>& r = rows_[row];
  for (size_t k = 0; k < r.size(); ++k) {
    if (r[k].col == col) return static_cast<int>(k);
  }
  return -1;
}

void Presolver::RemoveEntry(int row, int col) {
  const int at = FindEntry(row, col);
  if (at < 0) return;
  rows_[row][at] = rows_[row].back();
  rows_[row].pop_back();
}

void Presolver::AddToEntry(int row, int col, double delta) {
  const int at = FindEntry(row, col);
  if (at < 0) {
    if (std::abs(delta) <= kDropTolerance) return;
    rows_[row].push_back({col, delta});
    col_rows_[col].push_back(row);
    return;
  }
  rows_[row][at].coef += delta;
  if (std::abs(rows_[row][at].coef) <= kDropTolerance) RemoveEntry(row, col);
}

void Presolver::FixColumn(int j, double v) {
  for (int i : col_rows_[j]) {
    if (!row_alive_[i]) continue;
    const int at = FindEntry(i, j);
    if (at < 0) continue;
    const double a = rows_[i][at].coef;
    row_lower_[i] -= a * v;
    row_upper_[i] -= a * v;
    RemoveEntry(i, j);
    PushRow(i);
  }
  for (size_t k = 0; k < costs_.size(); ++k) offsets_[k] += costs_[k][j] * v;
  col_alive_[j] = false;
  col_rows_[j].clear();
  steps_.push_back({Step::kFixed, j, v, -1, 0.0, 0.0});
}

bool Presolver::ProcessRow(int i) {
  if (!row_alive_[i]) return true;
  std::vector<Entry>& row = rows_[i];
  if (row.empty()) {
    if (row_lower_[i] > tol_ || row_upper_[i] < -tol_) return false;
    row_alive_[i] = false;
    return true;
  }
  if (row.size() == 1) {
    const auto [j, a] = row.front();
    if (std::abs(a) < 1e-9) return true;
    double lo = row_lower_[i] / a;
    double hi = row_upper_[i] / a;
    if (a < 0) std::swap(lo, hi);
    double new_lo = std::max(col_lower_[j], lo);
    double new_hi = std::min(col_upper_[j], hi);
    if (new_lo > new_hi + tol_) return false;
    if (new_lo > new_hi) new_lo = new_hi = 0.5 * (new_lo + new_hi);
    col_lower_[j] = new_lo;
    col_upper_[j] = new_hi;
    row_alive_[i] = false;
    row.clear();
    PushCol(j);
    return true;
  }
  if (row.size() == 2 && row_lower_[i] == row_upper_[i]) {
    Entry p = row[0];
    Entry q = row[1];
    // Substitute out the column with fewer rows, among well-scaled choices.
    const double big = std::max(std::abs(p.coef), std::abs(q.coef));
    const bool p_ok = std::abs(p.coef) >= kAggregatePivotRatio * big;
    const bool q_ok = std::abs(q.coef) >= kAggregatePivotRatio * big;
    bool elim_p = p_ok && (!q_ok || col_rows_[p.col].size() < col_rows_[q.col].size());
    if (elim_p) std::swap(p, q);
    return Aggregate(i, p.col, p.coef, q.col, q.coef);
  }
  return true;
}

bool Presolver::Aggregate(int row, int keep, double keep_coef, int elim,
                          double coef) {
  const double rhs = row_lower_[row];
  // elim = (rhs - keep_coef * keep) / coef, so keep must map into elim's box.
  const auto [lo, hi] =
      AffineImage(col_lower_[elim], col_upper_[elim], rhs, keep_coef, coef);
  double new_lo = std::max(col_lower_[keep], lo);
  double new_hi = std::min(col_upper_[keep], hi);
  if (new_lo > new_hi + tol_) return false;
  if (new_lo > new_hi) new_lo = new_hi = 0.5 * (new_lo + new_hi);
  col_lower_[keep] = new_lo;
  col_upper_[keep] = new_hi;

  row_alive_[row] = false;
  rows_[row].clear();
  std::vector<int> touched = std::move(col_rows_[elim]);
  col_rows_[elim].clear();
  for (int r : touched) {
    if (!row_alive_[r]) continue;
    const int at = FindEntry(r, elim);
    if (at < 0) continue;
    const double c = rows_[r][at].coef;
    RemoveEntry(r, elim);
    row_lower_[r] -= c * rhs / coef;
    row_upper_[r] -= c * rhs / coef;
    AddToEntry(r, keep, -c * keep_coef / coef);
    PushRow(r);
  }
  for (size_t k = 0; k < costs_.size(); ++k) {
    const double c = costs_[k][elim];
    if (c == 0.0) continue;
    costs_[k][keep] -= c * keep_coef / coef;
    offsets_[k] += c * rhs / coef;
    costs_[k][elim] = 0.0;
  }
  col_alive_[elim] = false;
  steps_.push_back({Step::kAggregated, elim, rhs, keep, keep_coef, coef});
  PushCol(keep);
  return true;
}

bool Presolver::ProcessCol(int j) {
  if (!col_alive_[j]) return true;
  if (col_lower_[j] == col_upper_[j]) {
    FixColumn(j, col_lower_[j]);
    return true;
  }
  // Compact the row list while checking for emptiness.
  std::vector<int>& rows = col_rows_[j];
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::erase_if(rows, [&](int i) { return !row_alive_[i] || FindEntry(i, j) < 0; });
  if (!rows.empty()) return true;
  for (const std::vector<double>& c : costs_) {
    if (c[j] != 0.0) return true;
  }
  FixColumn(j, std::clamp(0.0, col_lower_[j], col_upper_[j]));
  return true;
}

bool Presolver::MergeParallelRows() {
  // Returns false on proven infeasibility. Rows are compared after sorting and scaling the first coefficient to 1.
  absl::flat_hash_map<size_t, std::vector<int>> buckets;
  std::vector<std::vector<Entry>> normalized(rows_.size());
  std::vector<double> scale(rows_.size(), 1.0);
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (!row_alive_[i] || rows_[i].size() < 2) continue;
    std::vector<Entry> e = rows_[i];
    std::sort(e.begin(), e.end(),
              [](const Entry& a, const Entry& b) { return a.col < b.col; });
    scale[i] = e.front().coef;
    size_t h = 0;
    for (Entry& x : e) {
      x.coef /= scale[i];
      h = absl::Hash<std::tuple<size_t, int, double>>{}({h, x.col, x.coef});
    }
    normalized[i] = std::move(e);
    buckets[h].push_back(static_cast<int>(i));
  }
  for (auto& [h, members] : buckets) {
    for (size_t a = 0; a < members.size(); ++a) {
      const int i = members[a];
      if (!row_alive_[i]) continue;
      for (size_t b = a + 1; b < members.size(); ++b) {
        const int k = members[b];
        if (!row_alive_[k] || normalized[k].size() != normalized[i].size()) continue;
        bool same = true;
        for (size_t t = 0; t < normalized[i].size() && same; ++t) {
          same = normalized[i][t].col == normalized[k][t].col &&
                 normalized[i][t].coef == normalized[k][t].coef;
        }
        if (!same) continue;
        // Row k scaled onto row i: (row_k / scale_k) * scale_i.
        const double f = scale[i] / scale[k];
        double lo = row_lower_[k] * f;
        double hi = row_upper_[k] * f;
        if (f < 0) std::swap(lo, hi);
        row_lower_[i] = std::max(row_lower_[i], lo);
        row_upper_[i] = std::min(row_upper_[i], hi);
        if (row_lower_[i] > row_upper_[i] + tol_) return false;
        if (row_lower_[i] > row_upper_[i]) {
          row_lower_[i] = row_upper_[i] = 0.5 * (row_lower_[i] + row_upper_[i]);
        }
        row_alive_[k] = false;
        rows_[k].clear();
        PushRow(i);
      }
    }
  }
  return true;
}

bool Presolver::Run(bool reduce) {
  if (!reduce) {
    Assemble();
    return true;
  }
  for (int i = 0; i < static_cast<int>(rows_.size()); ++i) PushRow(i);
  for (int j = 0; j < num_cols_; ++j) PushCol(j);
  bool parallel_done = false;
  while (true) {
    while (!row_queue_.empty() || !col_queue_.empty()) {
      while (!row_queue_.empty()) {
        const int i = row_queue_.back();
        row_queue_.pop_back();
        row_queued_[i] = false;
        if (!ProcessRow(i)) return false;
      }
      while (!col_queue_.empty()) {
        const int j = col_queue_.back();
        col_queue_.pop_back();
        col_queued_[j] = false;
        if (!ProcessCol(j)) return false;
      }
    }
    if (parallel_done) break;
    parallel_done = true;
    const size_t before = row_queue_.size();
    if (!MergeParallelRows()) return false;
    if (row_queue_.size() == before) break;
  }
  Assemble();
  return true;
}

void Presolver::Assemble() {
  reduced_of_col_.assign(num_cols_, -1);
  SparseLp& lp = reduced_;
  for (int j = 0; j < num_cols_; ++j) {
    if (!col_alive_[j]) continue;
    reduced_of_col_[j] = lp.num_cols++;
    lp.col_lower.push_back(col_lower_[j]);
    lp.col_upper.push_back(col_upper_[j]);
  }
  std::vector<int> reduced_of_row(rows_.size(), -1);
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (!row_alive_[i]) continue;
    reduced_of_row[i] = lp.num_rows++;
    lp.row_lower.push_back(row_lower_[i]);
    lp.row_upper.push_back(row_upper_[i]);
  }
  std::vector<int> count(lp.num_cols, 0);
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (!row_alive_[i]) continue;
    for (const Entry& e : rows_[i]) ++count[reduced_of_col_[e.col]];
  }
  lp.col_start.assign(lp.num_cols + 1, 0);
  for (int j = 0; j < lp.num_cols; ++j) lp.col_start[j + 1] = lp.col_start[j] + count[j];
  lp.row_index.resize(lp.col_start.back());
  lp.value.resize(lp.col_start.back());
  std::vector<int> next(lp.col_start.begin(), lp.col_start.end() - 1);
  for (size_t i = 0; i < rows_.size(); ++i) {
    if (!row_alive_[i]) continue;
    for (const Entry& e : rows_[i]) {
      const int at = next[reduced_of_col_[e.col]]++;
      lp.row_index[at] = reduced_of_row[i];
      lp.value[at] = e.coef;
    }
  }
  lp.costs.resize(costs_.size());
  for (size_t k = 0; k < costs_.size(); ++k) {
    lp.costs[k].resize(lp.num_cols);
    for (int j = 0; j < num_cols_; ++j) {
      if (reduced_of_col_[j] >= 0) lp.costs[k][reduced_of_col_[j]] = costs_[k][j];
    }
  }
  lp.offsets = offsets_;
}

std::vector<double> Presolver::Postsolve(
    const std::vector<double>& reduced_values) const {
  std::vector<double> x(num_cols_, 0.0);
  for (int j = 0; j < num_cols_; ++j) {
    if (reduced_of_col_[j] >= 0) x[j] = reduced_values[reduced_of_col_[j]];
  }
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    if (it->kind == Step::kFixed) {
      x[it->col] = it->value;
    } else {
      x[it->col] = (it->value - it->keep_coef * x[it->keep]) / it->coef;
    }
  }
  return x;
}

}  // namespace plkb::internal
