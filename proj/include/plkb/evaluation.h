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

// Training, classification and the experiment drivers behind the CLI.

#ifndef PLKB_EVALUATION_H_
#define PLKB_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "plkb/dataset.h"
#include "plkb/inference.h"
#include "plkb/kb.h"
#include "plkb/synthetic.h"

namespace plkb {

enum class TrainMethod {
  // Rules for the root-to-leaf paths of an ID3 tree.
  kTree,
  // Rules for every root-to-node path.
  kTreeAll,
  // Rules counted directly from the data.
  kDirect,
};

absl::StatusOr<TrainMethod> ParseTrainMethod(absl::string_view name);
absl::string_view TrainMethodName(TrainMethod method);

struct EvalReport {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  int64_t n_test = 0;
  int64_t true_positive = 0;
  int64_t false_positive = 0;
  int64_t false_negative = 0;
  int64_t true_negative = 0;
};

// Positive class is `true`. Empty ratios count as 0.
absl::StatusOr<EvalReport> F1Score(const std::vector<bool>& predictions,
                                   const std::vector<bool>& labels);

absl::StatusOr<KnowledgeBase> TrainKb(const Dataset& train, TrainMethod method,
                                      std::optional<int> max_arity);

// A trained base plus optional domain knowledge, ready to classify queries.
// Direct bases are queried through their relevant clauses, with the
// knowledge clauses added to every query's base.
class Classifier {
 public:
  static absl::StatusOr<Classifier> Train(const Dataset& train, TrainMethod method,
                                          std::optional<int> max_arity,
                                          const KnowledgeBase* knowledge,
                                          Domains domains);

  absl::StatusOr<InferenceResult> Classify(const Query& query,
                                           const InferenceOptions& options = {}) const;
  // The base one query is classified against.
  absl::StatusOr<KnowledgeBase> BaseFor(const Query& query) const;

  const KnowledgeBase& kb() const { return kb_; }
  const Domains& domains() const { return domains_; }
  bool uses_relevant_kb() const { return relevant_; }

 private:
  KnowledgeBase kb_;
  KnowledgeBase knowledge_;
  bool relevant_ = false;
  std::optional<int> max_arity_;
  Domains domains_;
};

struct ExperimentConfig {
  uint64_t rng_seed = 1;
  TrainMethod method = TrainMethod::kDirect;
  std::optional<int> max_arity;
  double train_fraction = 0.7;
  // Merged into the trained base before classification.
  std::optional<KnowledgeBase> knowledge;
  // Test instances are classified on this many threads.
  int num_threads = 1;
  InferenceOptions inference;
};

// Balances, splits, trains, merges the knowledge and classifies every test
// instance. Deterministic in the config.
absl::StatusOr<EvalReport> RunEval(const Dataset& data, const ExperimentConfig& config);

struct ExplanationEvalReport {
  double mean_accuracy = 0.0;
  // Test instances classified positive, each explained once.
  int64_t n_explained = 0;
  EvalReport classification;
};

// Explains every test instance classified positive and scores the
// explanations against the seed. The config's knowledge is not used.
absl::StatusOr<ExplanationEvalReport> RunExplanationEval(const Dataset& data,
                                                         const SeedSpec& spec,
                                                         const ExperimentConfig& config,
                                                         int k);

struct BenchResult {
  int n_vars = 0;
  // Distinct clauses generated; repeats collapse.
  int n_clauses = 0;
  uint64_t rng_seed = 0;
  double seconds = 0.0;
  double objective = 0.0;
  int iterations = 0;
};

// Random base over propositions x0..x{n-1}: clause lengths uniform in
// [1, min(10, n_vars)], random signs, probabilities uniform in [0, 1).
absl::StatusOr<KnowledgeBase> RandomKb(int n_vars, int n_clauses, uint64_t rng_seed);

// Times building and solving the deviation stage for a random base.
absl::StatusOr<BenchResult> BenchLp(int n_vars, int n_clauses, uint64_t rng_seed,
                                    const SimplexOptions& options = {});
std::string BenchCsvHeader();
std::string BenchCsvRow(const BenchResult& result);

// `n_true` rules whose bodies agree with the seed on a random set of
// positions, weighted by P(pos | body) measured on `data`, and `n_random`
// rules with 1 to 10 random feature-value pairs and uniform probabilities.
absl::StatusOr<KnowledgeBase> MakeKnowledge(const Dataset& data, const SeedSpec& spec,
                                            int n_true, int n_random,
                                            uint64_t rng_seed);

// RunEval with MakeKnowledge(...) merged into the trained base.
absl::StatusOr<EvalReport> RunKnowledgeExperiment(const Dataset& data,
                                                  const SeedSpec& spec,
                                                  const ExperimentConfig& config,
                                                  int n_true, int n_random,
                                                  uint64_t rng_seed);

}  // namespace plkb

#endif  // PLKB_EVALUATION_H_
