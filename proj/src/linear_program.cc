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

#include "plkb/linear_program.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace plkb {
namespace {

void AppendExpression(const std::vector<LpTerm>& terms, std::string& out) {
  if (terms.empty()) {
    out += " 0 x0";
    return;
  }
  for (const LpTerm& t : terms) {
    absl::StrAppendFormat(&out, " %s %.17g x%d", t.coef < 0 ? "-" : "+",
                          std::abs(t.coef), t.var);
  }
}

std::string FormatBound(double v) {
  if (v == kInfinity) return "+inf";
  if (v == -kInfinity) return "-inf";
  return absl::StrFormat("%.17g", v);
}

}  // namespace

int LinearProgram::AddVariable(std::string name, double lower, double upper,
                               double cost) {
  variables_.push_back({std::move(name), lower, upper, cost});
  return num_variables() - 1;
}

int LinearProgram::AddRow(std::string name, std::vector<LpTerm> terms,
                          double lower, double upper) {
  rows_.push_back({std::move(name), std::move(terms), lower, upper});
  return num_rows() - 1;
}

void LinearProgram::ClearObjective() {
  for (LpVariable& v : variables_) v.cost = 0.0;
}

void LinearProgram::SetBounds(int var, double lower, double upper) {
  variables_[var].lower = lower;
  variables_[var].upper = upper;
}

absl::Status LinearProgram::Validate() const {
  for (const LpVariable& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
        v.lower == kInfinity || v.upper == -kInfinity) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad bounds on variable ", v.name));
    }
    if (!std::isfinite(v.cost)) {
      return absl::InvalidArgumentError(
          absl::StrCat("non-finite cost on variable ", v.name));
    }
  }
  for (const LpRow& r : rows_) {
    if (std::isnan(r.lower) || std::isnan(r.upper) || r.lower > r.upper) {
      return absl::InvalidArgumentError(absl::StrCat("bad bounds on row ", r.name));
    }
    for (const LpTerm& t : r.terms) {
      if (t.var < 0 || t.var >= num_variables()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", r.name, " references undeclared variable ", t.var));
      }
      if (!std::isfinite(t.coef)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite coefficient in row ", r.name));
      }
    }
  }
  return absl::OkStatus();
}

double LinearProgram::ObjectiveValue(const std::vector<double>& values) const {
  double sum = 0.0;
  for (size_t j = 0; j < variables_.size(); ++j) {
    sum += variables_[j].cost * values[j];
  }
  return sum;
}

double LinearProgram::MaxViolation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max({worst, variables_[j].lower - values[j],
                      values[j] - variables_[j].upper});
  }
  for (const LpRow& r : rows_) {
    double activity = 0.0;
    for (const LpTerm& t : r.terms) activity += t.coef * values[t.var];
    worst = std::max({worst, r.lower - activity, activity - r.upper});
  }
  return worst;
}

std::string LinearProgram::ToLpFormat() const {
  std::string out;
  for (size_t j = 0; j < variables_.size(); ++j) {
    absl::StrAppend(&out, "\\ x", j, " = ", variables_[j].name, "\n");
  }
  out += sense_ == ObjectiveSense::kMinimize ? "Minimize\n" : "Maximize\n";
  out += " obj:";
  std::vector<LpTerm> objective;
  for (size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].cost != 0.0) {
      objective.push_back({static_cast<int>(j), variables_[j].cost});
    }
  }
  AppendExpression(objective, out);
  out += "\nSubject To\n";
  for (size_t i = 0; i < rows_.size(); ++i) {
    const LpRow& r = rows_[i];
    auto emit = [&](absl::string_view suffix, absl::string_view op, double rhs) {
      absl::StrAppend(&out, " r", i, suffix, ":");
      AppendExpression(r.terms, out);
      absl::StrAppendFormat(&out, " %s %.17g\n", op, rhs);
    };
    if (r.lower == r.upper) {
      emit("", "=", r.lower);
      continue;
    }
    if (r.lower > -kInfinity) emit("_lo", ">=", r.lower);
    if (r.upper < kInfinity) emit("_hi", "<=", r.upper);
  }
  out += "Bounds\n";
  for (size_t j = 0; j < variables_.size(); ++j) {
    const LpVariable& v = variables_[j];
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      absl::StrAppend(&out, " x", j, " free\n");
    } else {
      absl::StrAppend(&out, " ", FormatBound(v.lower), " <= x", j,
                      " <= ", FormatBound(v.upper), "\n");
    }
  }
  out += "End\n";
  return out;
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

}  // namespace plkb
