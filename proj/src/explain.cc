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

#include "plkb/explain.h"

#include <algorithm>
#include <cstdint>
#include <thread>

#include "absl/strings/str_cat.h"
#include "plkb/direct_kb.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

// Masks of all size-k subsets of n items, in lexicographic order of the
// chosen index lists.
std::vector<uint64_t> Combinations(int n, int k) {
  std::vector<uint64_t> masks;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    uint64_t mask = 0;
    for (int i : idx) mask |= uint64_t{1} << i;
    masks.push_back(mask);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return masks;
}

int64_t Binomial(int n, int k) {
  int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxSubQueries) return r;
  }
  return r;
}

}  // namespace

absl::StatusOr<InferenceResult> ClassifyQuery(const Query& query,
                                              const KnowledgeBase& kb,
                                              const Domains& domains,
                                              const ExplainOptions& options) {
  if (!options.use_relevant_kb) {
    return InferPos(kb, query, domains, options.inference);
  }
  ASSIGN_OR_RETURN(const KnowledgeBase relevant,
                   RelevantKb(query, kb, options.max_arity));
  return InferPos(relevant, query, domains, options.inference);
}

absl::StatusOr<Explanation> ComputeExplanation(const Query& query,
                                               const KnowledgeBase& kb,
                                               const Domains& domains, int k,
                                               const ExplainOptions& options) {
  const int n = static_cast<int>(query.size());
  if (k < 1 || k > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("k = ", k, " outside [1, ", n, "]"));
  }
  if (n > 63) return absl::InvalidArgumentError("query has more than 63 items");
  if (Binomial(n, k) > kMaxSubQueries) {
    return absl::ResourceExhaustedError(
        absl::StrCat("C(", n, ", ", k, ") sub-queries exceed the limit"));
  }

  Explanation result;
  ASSIGN_OR_RETURN(const InferenceResult full,
                   ClassifyQuery(query, kb, domains, options));
  result.full_query_p_avg = full.p_avg;
  result.direction = full.label ? ExplanationDirection::kMax : ExplanationDirection::kMin;

  const std::vector<uint64_t> masks = Combinations(n, k);
  std::vector<absl::StatusOr<InferenceResult>> scores(
      masks.size(), absl::UnknownError("not evaluated"));
  auto evaluate = [&](size_t first, size_t stride) {
    for (size_t t = first; t < masks.size(); t += stride) {
      scores[t] = ClassifyQuery(query.Subset(masks[t]), kb, domains, options);
    }
  };
  const size_t threads = static_cast<size_t>(
      std::clamp<int64_t>(options.num_threads, 1, static_cast<int64_t>(masks.size())));
  if (threads == 1) {
    evaluate(0, 1);
  } else {
    std::vector<std::jthread> workers;
    for (size_t w = 0; w < threads; ++w) workers.emplace_back(evaluate, w, threads);
  }

  // Sequential reduction keeps the tie-break independent of thread timing.
  std::string best_text;
  const double sign = result.direction == ExplanationDirection::kMax ? 1.0 : -1.0;
  bool have_best = false;
  for (size_t t = 0; t < masks.size(); ++t) {
    if (!scores[t].ok()) return scores[t].status();
    ScoredSubQuery& scored = result.evaluated.emplace_back();
    scored.sub_query = query.Subset(masks[t]);
    scored.p_avg = scores[t]->p_avg;
    const std::string text = scored.sub_query.ToString();
    const double margin = sign * (scored.p_avg - result.score);
    const bool better =
        !have_best || margin > kExplanationTieTolerance ||
        (margin >= -kExplanationTieTolerance && text < best_text);
    if (better) {
      have_best = true;
      result.sub_query = scored.sub_query;
      result.score = scored.p_avg;
      best_text = text;
    }
  }
  return result;
}

absl::StatusOr<double> ExplanationAccuracy(const Query& sub_query,
                                           const SeedSpec& spec) {
  RETURN_IF_ERROR(spec.Validate());
  if (sub_query.empty()) return absl::InvalidArgumentError("empty explanation");
  int correct = 0;
  for (const auto& [feature, value] : sub_query.assignments()) {
    ASSIGN_OR_RETURN(const int position, SyntheticPosition(feature));
    if (position >= spec.length) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature '", feature, "' is past the seed length ", spec.length));
    }
    if (value.size() == 1 && value[0] == spec.seed[position]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(sub_query.size());
}

absl::StatusOr<std::string> MaskedString(const Query& sub_query, int length) {
  std::string out(std::max(length, 0), '-');
  for (const auto& [feature, value] : sub_query.assignments()) {
    ASSIGN_OR_RETURN(const int position, SyntheticPosition(feature));
    if (position >= length) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature '", feature, "' is past length ", length));
    }
    if (value.size() != 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("value '", value, "' is not a single symbol"));
    }
    out[position] = value[0];
  }
  return out;
}

}  // namespace plkb
