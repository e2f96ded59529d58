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

// k-feature explanations: the size-k part of a query that pushes the
// classification furthest in the direction of the full query's label.

#ifndef PLKB_EXPLAIN_H_
#define PLKB_EXPLAIN_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "plkb/inference.h"
#include "plkb/kb.h"
#include "plkb/query.h"
#include "plkb/synthetic.h"

namespace plkb {

// Sub-query scores closer than this are ties.
inline constexpr double kExplanationTieTolerance = 1e-9;
// Upper limit on the number of sub-queries one explanation may evaluate.
inline constexpr int64_t kMaxSubQueries = int64_t{1} << 22;

enum class ExplanationDirection { kMax, kMin };

struct ScoredSubQuery {
  Query sub_query;
  double p_avg = 0.0;
};

struct Explanation {
  Query sub_query;
  // p_avg of the winning sub-query.
  double score = 0.0;
  // kMax when the full query classifies positive.
  ExplanationDirection direction = ExplanationDirection::kMin;
  double full_query_p_avg = 0.0;
  // Every size-k sub-query in enumeration order.
  std::vector<ScoredSubQuery> evaluated;
};

struct ExplainOptions {
  // Evaluate each sub-query on the clauses relevant to it. Only sound for
  // bases whose clauses are all rules over feature-value bodies, such as
  // direct bases.
  bool use_relevant_kb = false;
  std::optional<int> max_arity;
  InferenceOptions inference;
  // Sub-queries are split over this many threads.
  int num_threads = 1;
};

// Scores every size-k subset of `query` by p_avg. Picks the maximum when the
// full query is positive and the minimum otherwise; ties go to the
// lexicographically smallest sub-query text.
absl::StatusOr<Explanation> ComputeExplanation(const Query& query,
                                               const KnowledgeBase& kb,
                                               const Domains& domains, int k,
                                               const ExplainOptions& options = {});

// p_avg for `query`, on the relevant clauses when requested.
absl::StatusOr<InferenceResult> ClassifyQuery(const Query& query,
                                              const KnowledgeBase& kb,
                                              const Domains& domains,
                                              const ExplainOptions& options);

// Fraction of the explanation's assignments that agree with the seed at
// their position.
absl::StatusOr<double> ExplanationAccuracy(const Query& sub_query,
                                           const SeedSpec& spec);

// `323--1-1--`: the explained symbols at their positions, '-' elsewhere.
absl::StatusOr<std::string> MaskedString(const Query& sub_query, int length);

}  // namespace plkb

#endif  // PLKB_EXPLAIN_H_
