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

// A plain sparse linear program: boxed variables, ranged rows and a linear
// objective.

#ifndef PLKB_LINEAR_PROGRAM_H_
#define PLKB_LINEAR_PROGRAM_H_

#include <limits>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace plkb {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LpTerm {
  int var = 0;
  double coef = 0.0;
};

struct LpVariable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

// lower <= sum(terms) <= upper.
struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  double lower = -kInfinity;
  double upper = kInfinity;
};

enum class ObjectiveSense { kMinimize, kMaximize };

class LinearProgram {
 public:
  int AddVariable(std::string name, double lower, double upper,
                  double cost = 0.0);
  int AddRow(std::string name, std::vector<LpTerm> terms, double lower,
             double upper);

  void SetCost(int var, double cost) { variables_[var].cost = cost; }
  void ClearObjective();
  void SetSense(ObjectiveSense sense) { sense_ = sense; }
  void SetBounds(int var, double lower, double upper);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<LpVariable>& variables() const { return variables_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  ObjectiveSense sense() const { return sense_; }

  // Checks indices, bound order and finiteness of coefficients.
  absl::Status Validate() const;

  double ObjectiveValue(const std::vector<double>& values) const;
  // Largest bound or row violation of `values`.
  double MaxViolation(const std::vector<double>& values) const;

  // CPLEX LP text format.
  std::string ToLpFormat() const;

 private:
  std::vector<LpVariable> variables_;
  std::vector<LpRow> rows_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double objective_value = 0.0;
  // One value per variable; meaningful only when optimal.
  std::vector<double> values;
  int iterations = 0;
};

}  // namespace plkb

#endif  // PLKB_LINEAR_PROGRAM_H_
