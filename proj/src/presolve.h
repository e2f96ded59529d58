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

#ifndef PLKB_SRC_PRESOLVE_H_
#define PLKB_SRC_PRESOLVE_H_

#include <vector>

#include "absl/status/statusor.h"
#include "plkb/linear_program.h"

namespace plkb::internal {

// Column-compressed program handed to the simplex engine. All objectives are
// minimized.
struct SparseLp {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<int> col_start = {0};
  std::vector<int> row_index;
  std::vector<double> value;
  // One cost vector per objective, and the constant each objective lost to
  // eliminated columns.
  std::vector<std::vector<double>> costs;
  std::vector<double> offsets;
};

// Reductions: empty and singleton rows, fixed and empty columns, duplicate
// rows, and doubleton equalities (one column substituted out).
class Presolver {
 public:
  // `objectives` hold one cost per original variable, to be minimized.
  Presolver(const LinearProgram& lp, std::vector<std::vector<double>> objectives,
            double tolerance);

  // False when the reductions proved the program infeasible. With `reduce`
  // unset the program is only converted.
  bool Run(bool reduce = true);

  const SparseLp& reduced() const { return reduced_; }
  // Values of the original variables from values of the reduced columns.
  std::vector<double> Postsolve(const std::vector<double>& reduced_values) const;

 private:
  struct Entry {
    int col;
    double coef;
  };
  struct Step {
    enum Kind { kFixed, kAggregated } kind;
    int col;
    // kFixed: value. kAggregated: col = (rhs - keep_coef * keep) / coef.
    double value;
    int keep;
    double keep_coef;
    double coef;
  };

  void PushRow(int i);
  void PushCol(int j);
  int FindEntry(int row, int col) const;
  void RemoveEntry(int row, int col);
  void AddToEntry(int row, int col, double delta);
  void FixColumn(int j, double v);
  bool ProcessRow(int i);
  bool ProcessCol(int j);
  bool Aggregate(int row, int keep, double keep_coef, int elim, double coef);
  bool MergeParallelRows();
  void Assemble();

  double tol_;
  int num_cols_;
  std::vector<double> col_lower_;
  std::vector<double> col_upper_;
  std::vector<bool> col_alive_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<std::vector<double>> costs_;
  std::vector<double> offsets_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<double> row_lower_;
  std::vector<double> row_upper_;
  std::vector<bool> row_alive_;
  std::vector<int> row_queue_;
  std::vector<int> col_queue_;
  std::vector<bool> row_queued_;
  std::vector<bool> col_queued_;
  std::vector<Step> steps_;
  std::vector<int> reduced_of_col_;
  SparseLp reduced_;
};

}  // namespace plkb::internal

#endif  // PLKB_SRC_PRESOLVE_H_
