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

#include "plkb/evaluation.h"

#include <algorithm>
#include <chrono>
#include <iterator>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "plkb/direct_kb.h"
#include "plkb/explain.h"
#include "plkb/id3_tree.h"
#include "plkb/random.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

// Runs fn(i) for i in [0, n) on `threads` threads; results land by index.
template <typename T, typename Fn>
std::vector<absl::StatusOr<T>> ParallelMap(size_t n, int threads, Fn fn) {
  std::vector<absl::StatusOr<T>> out(n, absl::UnknownError("not evaluated"));
  const size_t workers =
      std::clamp<size_t>(static_cast<size_t>(std::max(threads, 1)), 1, std::max<size_t>(n, 1));
  auto run = [&](size_t first) {
    for (size_t i = first; i < n; i += workers) out[i] = fn(i);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return out;
}

struct SplitData {
  Dataset train;
  Dataset test;
};

absl::StatusOr<SplitData> BalanceAndSplit(const Dataset& data,
                                          const ExperimentConfig& config) {
  ASSIGN_OR_RETURN(const Dataset balanced, Balance(data, config.rng_seed));
  ASSIGN_OR_RETURN(auto parts, Split(balanced, config.train_fraction, config.rng_seed));
  if (parts.first.empty() || parts.second.empty()) {
    return absl::InvalidArgumentError("split left an empty training or test set");
  }
  return SplitData{std::move(parts.first), std::move(parts.second)};
}

}  // namespace

absl::StatusOr<TrainMethod> ParseTrainMethod(absl::string_view name) {
  if (name == "tree") return TrainMethod::kTree;
  if (name == "tree-all") return TrainMethod::kTreeAll;
  if (name == "direct") return TrainMethod::kDirect;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown method '", name, "'; expected tree, tree-all or direct"));
}

absl::string_view TrainMethodName(TrainMethod method) {
  switch (method) {
    case TrainMethod::kTree:
      return "tree";
    case TrainMethod::kTreeAll:
      return "tree-all";
    case TrainMethod::kDirect:
      return "direct";
  }
  return "unknown";
}

absl::StatusOr<EvalReport> F1Score(const std::vector<bool>& predictions,
                                   const std::vector<bool>& labels) {
  if (predictions.size() != labels.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        predictions.size(), " predictions for ", labels.size(), " labels"));
  }
  if (labels.empty()) return absl::InvalidArgumentError("no predictions to score");
  EvalReport r;
  r.n_test = static_cast<int64_t>(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i]) {
      ++(labels[i] ? r.true_positive : r.false_positive);
    } else {
      ++(labels[i] ? r.false_negative : r.true_negative);
    }
  }
  const auto ratio = [](int64_t num, int64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(r.true_positive, r.true_positive + r.false_positive);
  r.recall = ratio(r.true_positive, r.true_positive + r.false_negative);
  r.f1 = r.precision + r.recall == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

absl::StatusOr<KnowledgeBase> TrainKb(const Dataset& train, TrainMethod method,
                                      std::optional<int> max_arity) {
  if (method == TrainMethod::kDirect) {
    return BuildDirectKb(train, DirectKbOptions{max_arity, 1});
  }
  ASSIGN_OR_RETURN(const std::unique_ptr<TreeNode> tree, BuildId3(train));
  return KbFromTree(*tree, method == TrainMethod::kTree ? PathMode::kLeaves
                                                        : PathMode::kAllNodes);
}

absl::StatusOr<Classifier> Classifier::Train(const Dataset& train, TrainMethod method,
                                             std::optional<int> max_arity,
                                             const KnowledgeBase* knowledge,
                                             Domains domains) {
  Classifier c;
  ASSIGN_OR_RETURN(c.kb_, TrainKb(train, method, max_arity));
  c.relevant_ = method == TrainMethod::kDirect;
  c.max_arity_ = max_arity;
  c.domains_ = std::move(domains);
  if (knowledge != nullptr) {
    if (c.relevant_) {
      c.knowledge_ = *knowledge;
    } else {
      ASSIGN_OR_RETURN(c.kb_, Merge(c.kb_, *knowledge));
    }
  }
  return c;
}

absl::StatusOr<KnowledgeBase> Classifier::BaseFor(const Query& query) const {
  if (!relevant_) return kb_;
  ASSIGN_OR_RETURN(KnowledgeBase base, RelevantKb(query, kb_, max_arity_));
  if (knowledge_.empty()) return base;
  return Merge(base, knowledge_);
}

absl::StatusOr<InferenceResult> Classifier::Classify(
    const Query& query, const InferenceOptions& options) const {
  if (!relevant_) return InferPos(kb_, query, domains_, options);
  ASSIGN_OR_RETURN(const KnowledgeBase base, BaseFor(query));
  return InferPos(base, query, domains_, options);
}

absl::StatusOr<EvalReport> RunEval(const Dataset& data, const ExperimentConfig& config) {
  ASSIGN_OR_RETURN(const SplitData parts, BalanceAndSplit(data, config));
  const KnowledgeBase* knowledge =
      config.knowledge.has_value() ? &*config.knowledge : nullptr;
  ASSIGN_OR_RETURN(const Classifier model,
                   Classifier::Train(parts.train, config.method, config.max_arity,
                                     knowledge, data.domains()));
  const auto results = ParallelMap<InferenceResult>(
      parts.test.size(), config.num_threads, [&](size_t i) {
        return model.Classify(parts.test.QueryOf(i), config.inference);
      });
  std::vector<bool> predictions;
  for (const auto& r : results) {
    if (!r.ok()) return r.status();
    predictions.push_back(r->label);
  }
  return F1Score(predictions, parts.test.Labels());
}

absl::StatusOr<ExplanationEvalReport> RunExplanationEval(const Dataset& data,
                                                         const SeedSpec& spec,
                                                         const ExperimentConfig& config,
                                                         int k) {
  RETURN_IF_ERROR(spec.Validate());
  ASSIGN_OR_RETURN(const SplitData parts, BalanceAndSplit(data, config));
  ASSIGN_OR_RETURN(const Classifier model,
                   Classifier::Train(parts.train, config.method, config.max_arity,
                                     nullptr, data.domains()));
  ExplainOptions explain;
  explain.use_relevant_kb = model.uses_relevant_kb();
  explain.max_arity = config.max_arity;
  explain.inference = config.inference;

  struct Outcome {
    bool label = false;
    std::optional<double> accuracy;
  };
  const auto outcomes = ParallelMap<Outcome>(
      parts.test.size(), config.num_threads, [&](size_t i) -> absl::StatusOr<Outcome> {
        const Query query = parts.test.QueryOf(i);
        Outcome out;
        ASSIGN_OR_RETURN(const InferenceResult r, model.Classify(query, config.inference));
        out.label = r.label;
        if (!r.label) return out;
        ASSIGN_OR_RETURN(const Explanation e,
                         ComputeExplanation(query, model.kb(), model.domains(), k, explain));
        ASSIGN_OR_RETURN(out.accuracy, ExplanationAccuracy(e.sub_query, spec));
        return out;
      });

  ExplanationEvalReport report;
  std::vector<bool> predictions;
  double total = 0.0;
  for (const auto& o : outcomes) {
    if (!o.ok()) return o.status();
    predictions.push_back(o->label);
    if (o->accuracy.has_value()) {
      total += *o->accuracy;
      ++report.n_explained;
    }
  }
  ASSIGN_OR_RETURN(report.classification, F1Score(predictions, parts.test.Labels()));
  if (report.n_explained > 0) {
    report.mean_accuracy = total / static_cast<double>(report.n_explained);
  }
  return report;
}

absl::StatusOr<KnowledgeBase> RandomKb(int n_vars, int n_clauses, uint64_t rng_seed) {
  if (n_vars < 1 || n_clauses < 1) {
    return absl::InvalidArgumentError("sizes must be at least 1");
  }
  std::vector<Atom> atoms;
  atoms.reserve(n_vars);
  for (int i = 0; i < n_vars; ++i) {
    ASSIGN_OR_RETURN(const Atom a, Atom::Proposition(absl::StrCat("x", i)));
    atoms.push_back(a);
  }
  Rng rng(rng_seed);
  KnowledgeBaseBuilder builder(DuplicatePolicy::kOverride);
  std::vector<int> order(n_vars);
  for (int t = 0; t < n_vars; ++t) order[t] = t;
  for (int c = 0; c < n_clauses; ++c) {
    const int len = static_cast<int>(rng.UniformInt(1, std::min(10, n_vars)));
    // Partial Fisher-Yates picks `len` distinct atoms; any starting
    // permutation works.
    std::vector<Literal> literals;
    for (int i = 0; i < len; ++i) {
      const int j = i + static_cast<int>(rng.UniformIndex(n_vars - i));
      std::swap(order[i], order[j]);
      literals.push_back(Literal{atoms[order[i]], rng.UniformIndex(2) == 1});
    }
    ASSIGN_OR_RETURN(const Clause clause, Clause::Make(std::move(literals)));
    RETURN_IF_ERROR(builder.Add(rng.UniformReal(), clause));
  }
  return std::move(builder).Build();
}

absl::StatusOr<BenchResult> BenchLp(int n_vars, int n_clauses, uint64_t rng_seed,
                                    const SimplexOptions& options) {
  ASSIGN_OR_RETURN(const KnowledgeBase kb, RandomKb(n_vars, n_clauses, rng_seed));
  const auto start = std::chrono::steady_clock::now();
  const KbProgram program = BuildLp(kb);
  ASSIGN_OR_RETURN(const LpSolution solution, SolveLp(program.lp, options));
  const auto stop = std::chrono::steady_clock::now();
  if (solution.status != LpStatus::kOptimal) {
    return absl::InternalError(absl::StrCat("deviation stage ended ",
                                            LpStatusName(solution.status)));
  }
  BenchResult r;
  r.n_vars = n_vars;
  r.n_clauses = static_cast<int>(kb.size());
  r.rng_seed = rng_seed;
  r.seconds = std::chrono::duration<double>(stop - start).count();
  r.objective = solution.objective_value;
  r.iterations = solution.iterations;
  return r;
}

std::string BenchCsvHeader() {
  return "n_vars,n_clauses,rng_seed,seconds,objective,iterations";
}

std::string BenchCsvRow(const BenchResult& r) {
  return absl::StrFormat("%d,%d,%d,%.6f,%.9g,%d", r.n_vars, r.n_clauses, r.rng_seed,
                         r.seconds, r.objective, r.iterations);
}

absl::StatusOr<KnowledgeBase> MakeKnowledge(const Dataset& data, const SeedSpec& spec,
                                            int n_true, int n_random,
                                            uint64_t rng_seed) {
  RETURN_IF_ERROR(spec.Validate());
  if (n_true < 0 || n_random < 0) {
    return absl::InvalidArgumentError("clause counts must be non-negative");
  }
  // Dataset column of each seed position.
  std::vector<int> column(spec.length, -1);
  for (size_t c = 0; c < data.features().size(); ++c) {
    const auto pos = SyntheticPosition(data.features()[c]);
    if (pos.ok() && *pos < spec.length) column[*pos] = static_cast<int>(c);
  }
  for (int p = 0; p < spec.length; ++p) {
    if (column[p] < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("dataset lacks feature ", SyntheticFeatureName(p)));
    }
  }

  Rng rng(rng_seed);
  KnowledgeBaseBuilder builder(DuplicatePolicy::kOverride);
  std::vector<int> order(spec.length);
  constexpr int kMaxDraws = 100;
  for (int c = 0; c < n_true; ++c) {
    for (int draw = 0; draw < kMaxDraws; ++draw) {
      const int len = static_cast<int>(rng.UniformInt(1, spec.length));
      for (int p = 0; p < spec.length; ++p) order[p] = p;
      rng.Shuffle(std::span<int>(order));
      std::vector<std::pair<std::string, std::string>> body;
      int64_t matched = 0;
      int64_t positive = 0;
      for (const Instance& inst : data.instances()) {
        bool all = true;
        for (int t = 0; t < len && all; ++t) {
          all = inst.values[column[order[t]]] == std::string(1, spec.seed[order[t]]);
        }
        if (!all) continue;
        ++matched;
        positive += inst.label ? 1 : 0;
      }
      if (matched == 0) continue;
      for (int t = 0; t < len; ++t) {
        body.emplace_back(SyntheticFeatureName(order[t]),
                          std::string(1, spec.seed[order[t]]));
      }
      ASSIGN_OR_RETURN(const Clause clause, Clause::ClassRule(body));
      RETURN_IF_ERROR(builder.Add(
          static_cast<double>(positive) / static_cast<double>(matched), clause));
      break;
    }
  }

  const std::vector<std::string>& features = data.features();
  const int n_features = static_cast<int>(features.size());
  std::vector<int> feature_order(n_features);
  for (int c = 0; c < n_random; ++c) {
    const int len = static_cast<int>(rng.UniformInt(1, std::min(10, n_features)));
    for (int f = 0; f < n_features; ++f) feature_order[f] = f;
    rng.Shuffle(std::span<int>(feature_order));
    std::vector<std::pair<std::string, std::string>> body;
    for (int t = 0; t < len; ++t) {
      const std::string& feature = features[feature_order[t]];
      const std::set<std::string>& domain = data.domains().at(feature);
      auto it = domain.begin();
      std::advance(it, rng.UniformIndex(domain.size()));
      body.emplace_back(feature, *it);
    }
    ASSIGN_OR_RETURN(const Clause clause, Clause::ClassRule(body));
    RETURN_IF_ERROR(builder.Add(rng.UniformReal(), clause));
  }
  return std::move(builder).Build();
}

absl::StatusOr<EvalReport> RunKnowledgeExperiment(const Dataset& data,
                                                  const SeedSpec& spec,
                                                  const ExperimentConfig& config,
                                                  int n_true, int n_random,
                                                  uint64_t rng_seed) {
  ASSIGN_OR_RETURN(KnowledgeBase knowledge,
                   MakeKnowledge(data, spec, n_true, n_random, rng_seed));
  ExperimentConfig with_knowledge = config;
  if (config.knowledge.has_value()) {
    ASSIGN_OR_RETURN(knowledge, Merge(*config.knowledge, knowledge));
  }
  if (!knowledge.empty()) with_knowledge.knowledge = std::move(knowledge);
  return RunEval(data, with_knowledge);
}

}  // namespace plkb
