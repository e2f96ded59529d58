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

// plkb: train rule bases, classify and explain queries, and run the
// evaluation experiments. Results go to stdout as JSON; errors are one line
// on stderr with a nonzero exit.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "plkb/dataset.h"
#include "plkb/direct_kb.h"
#include "plkb/evaluation.h"
#include "plkb/explain.h"
#include "plkb/inference.h"
#include "plkb/kb.h"
#include "plkb/query.h"
#include "plkb/status_macros.h"
#include "plkb/synthetic.h"

namespace plkb {
namespace {

using nlohmann::ordered_json;

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  return absl::OkStatus();
}

absl::StatusOr<KnowledgeBase> ReadKb(const std::string& path) {
  ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  return ParseKb(text);
}

struct CsvFlags {
  std::string label_col = std::string(kSyntheticLabelColumn);
  std::string pos_label = std::string(kSyntheticPositive);
};

void AddCsvFlags(CLI::App* cmd, CsvFlags& flags) {
  cmd->add_option("--label-col", flags.label_col, "Label column")->capture_default_str();
  cmd->add_option("--pos-label", flags.pos_label, "Label value of positives")
      ->capture_default_str();
}

// A CSV file, or a synthetic export directory holding data.csv and seed.txt.
struct Input {
  Dataset data;
  std::optional<SeedSpec> spec;
};

absl::StatusOr<Input> LoadInput(const std::string& path, const CsvFlags& csv) {
  if (std::filesystem::is_directory(path)) {
    ASSIGN_OR_RETURN(SyntheticExport ex, ReadSyntheticExport(path));
    return Input{std::move(ex.data), std::move(ex.spec)};
  }
  ASSIGN_OR_RETURN(Dataset data, LoadCsv(path, csv.label_col, csv.pos_label));
  return Input{std::move(data), std::nullopt};
}

ordered_json ReportJson(const EvalReport& r) {
  return ordered_json{{"f1", r.f1},
                      {"precision", r.precision},
                      {"recall", r.recall},
                      {"n_test", r.n_test},
                      {"confusion",
                       {{"tp", r.true_positive},
                        {"fp", r.false_positive},
                        {"fn", r.false_negative},
                        {"tn", r.true_negative}}}};
}

ordered_json InferenceJson(const InferenceResult& r) {
  return ordered_json{{"label", r.label},
                      {"p_lower", r.p_lower},
                      {"p_upper", r.p_upper},
                      {"p_avg", r.p_avg},
                      {"objective_min", r.objective_min}};
}

void PrintWarnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

// True when every feature is a synthetic position with one-symbol values.
std::optional<int> SyntheticLength(const Domains& domains) {
  int length = 0;
  for (const auto& [feature, values] : domains) {
    const auto pos = SyntheticPosition(feature);
    if (!pos.ok()) return std::nullopt;
    for (const std::string& v : values) {
      if (v.size() != 1) return std::nullopt;
    }
    length = std::max(length, *pos + 1);
  }
  if (length == 0) return std::nullopt;
  return length;
}

struct ModelFlags {
  std::string kb_path;
  std::string domains_path;
  std::string query;
  bool relevant = false;
  std::optional<int> max_arity;
  std::optional<std::string> dump_lp;
  CsvFlags csv;
};

void AddModelFlags(CLI::App* cmd, ModelFlags& flags) {
  cmd->add_option("--kb", flags.kb_path, "Knowledge base file")->required();
  cmd->add_option("--domains", flags.domains_path,
                  "CSV whose values give feature domains; defaults to the base's own atoms");
  cmd->add_option("--query", flags.query, "Query such as a1=0,a2=1")->required();
  cmd->add_flag("--relevant", flags.relevant,
                "Classify on the clauses relevant to the query (direct bases)");
  cmd->add_option("--max-arity", flags.max_arity, "Largest rule body in the base");
  cmd->add_option("--dump-lp", flags.dump_lp, "Write the program in LP format");
  AddCsvFlags(cmd, flags.csv);
}

struct Model {
  KnowledgeBase kb;
  Domains domains;
  Query query;
};

absl::StatusOr<Model> LoadModel(const ModelFlags& flags) {
  Model m;
  ASSIGN_OR_RETURN(m.kb, ReadKb(flags.kb_path));
  if (flags.domains_path.empty()) {
    m.domains = DomainsFromKb(m.kb);
  } else {
    ASSIGN_OR_RETURN(const Dataset data,
                     LoadCsv(flags.domains_path, flags.csv.label_col, flags.csv.pos_label));
    m.domains = data.domains();
  }
  ASSIGN_OR_RETURN(m.query, Query::Parse(flags.query));
  return m;
}

absl::Status RunClassify(const ModelFlags& flags) {
  ASSIGN_OR_RETURN(const Model m, LoadModel(flags));
  ExplainOptions options;
  options.use_relevant_kb = flags.relevant;
  options.max_arity = flags.max_arity;
  options.inference.dump_lp_path = flags.dump_lp;
  ASSIGN_OR_RETURN(const InferenceResult r, ClassifyQuery(m.query, m.kb, m.domains, options));
  PrintWarnings(r.warnings);
  std::cout << InferenceJson(r).dump() << "\n";
  return absl::OkStatus();
}

absl::Status RunExplain(const ModelFlags& flags, int k, int threads) {
  ASSIGN_OR_RETURN(const Model m, LoadModel(flags));
  ExplainOptions options;
  options.use_relevant_kb = flags.relevant;
  options.max_arity = flags.max_arity;
  options.num_threads = threads;
  ASSIGN_OR_RETURN(const Explanation e,
                   ComputeExplanation(m.query, m.kb, m.domains, k, options));
  ordered_json out;
  if (const std::optional<int> length = SyntheticLength(m.domains)) {
    ASSIGN_OR_RETURN(const std::string masked, MaskedString(e.sub_query, *length));
    out["explanation"] = masked;
  } else {
    out["explanation"] = e.sub_query.ToString();
  }
  out["score"] = e.score;
  out["direction"] = e.direction == ExplanationDirection::kMax ? "max" : "min";
  out["full_p_avg"] = e.full_query_p_avg;
  ordered_json subs = ordered_json::array();
  for (const ScoredSubQuery& s : e.evaluated) {
    subs.push_back({{"sub_query", s.sub_query.ToString()}, {"p_avg", s.p_avg}});
  }
  out["evaluated"] = std::move(subs);
  std::cout << out.dump() << "\n";
  return absl::OkStatus();
}

struct ExperimentFlags {
  std::string method = "direct";
  std::string input;
  std::optional<std::string> knowledge;
  uint64_t rng_seed = 1;
  int runs = 1;
  std::optional<int> max_arity;
  double train_fraction = 0.7;
  int threads = 1;
  CsvFlags csv;
};

void AddExperimentFlags(CLI::App* cmd, ExperimentFlags& flags) {
  cmd->add_option("--method", flags.method, "tree, tree-all or direct")
      ->capture_default_str();
  cmd->add_option("--input", flags.input, "CSV file or synthetic export directory")
      ->required();
  cmd->add_option("--rng-seed", flags.rng_seed, "Seed of the first run")->capture_default_str();
  cmd->add_option("--runs", flags.runs, "Runs with consecutive seeds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-arity", flags.max_arity, "Largest direct rule body");
  cmd->add_option("--train-fraction", flags.train_fraction, "Share of training data")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--threads", flags.threads, "Classification threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  AddCsvFlags(cmd, flags.csv);
}

absl::StatusOr<ExperimentConfig> MakeConfig(const ExperimentFlags& flags) {
  ExperimentConfig config;
  ASSIGN_OR_RETURN(config.method, ParseTrainMethod(flags.method));
  config.max_arity = flags.max_arity;
  config.train_fraction = flags.train_fraction;
  config.num_threads = flags.threads;
  if (flags.knowledge.has_value()) {
    ASSIGN_OR_RETURN(config.knowledge, ReadKb(*flags.knowledge));
  }
  return config;
}

// Runs `one` for each seed and prints the runs and their mean `key`.
template <typename Fn>
absl::Status ForEachRun(const ExperimentFlags& flags, const char* key, Fn one) {
  ordered_json runs = ordered_json::array();
  double total = 0.0;
  for (int r = 0; r < flags.runs; ++r) {
    const uint64_t seed = flags.rng_seed + static_cast<uint64_t>(r);
    ASSIGN_OR_RETURN(ordered_json run, one(seed));
    total += run[key].template get<double>();
    run["rng_seed"] = seed;
    runs.push_back(std::move(run));
  }
  ordered_json out;
  out["method"] = flags.method;
  out[absl::StrCat("mean_", key)] = total / flags.runs;
  out["runs"] = std::move(runs);
  std::cout << out.dump() << "\n";
  return absl::OkStatus();
}

absl::Status RunEvalCommand(const ExperimentFlags& flags) {
  ASSIGN_OR_RETURN(const Input input, LoadInput(flags.input, flags.csv));
  ASSIGN_OR_RETURN(ExperimentConfig config, MakeConfig(flags));
  return ForEachRun(flags, "f1", [&](uint64_t seed) -> absl::StatusOr<ordered_json> {
    config.rng_seed = seed;
    ASSIGN_OR_RETURN(const EvalReport r, RunEval(input.data, config));
    return ReportJson(r);
  });
}

absl::Status RunExplEval(const ExperimentFlags& flags, int k) {
  ASSIGN_OR_RETURN(const Input input, LoadInput(flags.input, flags.csv));
  if (!input.spec.has_value()) {
    return absl::InvalidArgumentError("--input must be a synthetic export directory");
  }
  ASSIGN_OR_RETURN(ExperimentConfig config, MakeConfig(flags));
  return ForEachRun(flags, "accuracy", [&](uint64_t seed) -> absl::StatusOr<ordered_json> {
    config.rng_seed = seed;
    ASSIGN_OR_RETURN(const ExplanationEvalReport r,
                     RunExplanationEval(input.data, *input.spec, config, k));
    return ordered_json{{"accuracy", r.mean_accuracy},
                        {"n_explained", r.n_explained},
                        {"classification", ReportJson(r.classification)}};
  });
}

absl::Status RunKnowledgeExp(const ExperimentFlags& flags, int n_true, int n_random) {
  ASSIGN_OR_RETURN(const Input input, LoadInput(flags.input, flags.csv));
  if (!input.spec.has_value()) {
    return absl::InvalidArgumentError("--input must be a synthetic export directory");
  }
  ASSIGN_OR_RETURN(ExperimentConfig config, MakeConfig(flags));
  return ForEachRun(flags, "f1", [&](uint64_t seed) -> absl::StatusOr<ordered_json> {
    config.rng_seed = seed;
    ASSIGN_OR_RETURN(const EvalReport r, RunKnowledgeExperiment(input.data, *input.spec,
                                                                config, n_true, n_random,
                                                                seed));
    ordered_json j = ReportJson(r);
    j["n_true"] = n_true;
    j["n_random"] = n_random;
    return j;
  });
}

int Main(int argc, char** argv) {
  CLI::App app{"Probabilistic rule bases: training, inference and explanation"};
  app.require_subcommand(1);

  // train
  CLI::App* train = app.add_subcommand("train", "Build a knowledge base from a CSV");
  std::string train_method = "direct";
  std::string train_input;
  std::string train_out;
  std::optional<int> train_arity;
  CsvFlags train_csv;
  train->add_option("--method", train_method, "tree, tree-all or direct")
      ->capture_default_str();
  train->add_option("--input", train_input, "Training CSV")->required();
  train->add_option("--max-arity", train_arity, "Largest direct rule body");
  train->add_option("--out", train_out, "Output knowledge base")->required();
  AddCsvFlags(train, train_csv);

  // classify / explain
  CLI::App* classify = app.add_subcommand("classify", "Classify one query");
  ModelFlags classify_flags;
  AddModelFlags(classify, classify_flags);
  CLI::App* explain = app.add_subcommand("explain", "Explain one query");
  ModelFlags explain_flags;
  int explain_k = 1;
  int explain_threads = 1;
  AddModelFlags(explain, explain_flags);
  explain->add_option("-k", explain_k, "Explanation size")->required();
  explain->add_option("--threads", explain_threads, "Sub-query threads")
      ->check(CLI::PositiveNumber);

  // synth
  CLI::App* synth = app.add_subcommand("synth", "Generate a seed-string dataset");
  int synth_length = 10;
  int synth_alphabet = 4;
  int synth_match = 5;
  int synth_n = 2000;
  uint64_t synth_seed = 1;
  std::string synth_out;
  synth->add_option("--length", synth_length, "String length")->capture_default_str();
  synth->add_option("--alphabet", synth_alphabet, "Alphabet size")->capture_default_str();
  synth->add_option("--match", synth_match, "Positions agreeing with the seed")
      ->capture_default_str();
  synth->add_option("--n", synth_n, "Instances")->capture_default_str();
  synth->add_option("--rng-seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output directory")->required();

  // eval / expl-eval / knowledge-exp
  CLI::App* eval = app.add_subcommand("eval", "F1 of a method over seeded splits");
  ExperimentFlags eval_flags;
  AddExperimentFlags(eval, eval_flags);
  eval->add_option("--knowledge", eval_flags.knowledge, "Knowledge base merged before testing");

  CLI::App* expl_eval = app.add_subcommand("expl-eval", "Explanation accuracy");
  ExperimentFlags expl_flags;
  int expl_k = 1;
  AddExperimentFlags(expl_eval, expl_flags);
  expl_eval->add_option("-k", expl_k, "Explanation size")->required();

  CLI::App* kexp = app.add_subcommand("knowledge-exp", "F1 with injected clauses");
  ExperimentFlags kexp_flags;
  int kexp_true = 0;
  int kexp_random = 0;
  AddExperimentFlags(kexp, kexp_flags);
  kexp->add_option("--true", kexp_true, "Clauses agreeing with the seed")
      ->check(CLI::NonNegativeNumber);
  kexp->add_option("--random", kexp_random, "Random clauses")->check(CLI::NonNegativeNumber);

  // bench-lp
  CLI::App* bench = app.add_subcommand("bench-lp", "Time the deviation stage");
  int bench_vars = 1000;
  int bench_clauses = 1000;
  uint64_t bench_seed = 1;
  std::optional<std::string> bench_csv;
  bench->add_option("--vars", bench_vars, "Atoms")->check(CLI::PositiveNumber);
  bench->add_option("--clauses", bench_clauses, "Clauses")->check(CLI::PositiveNumber);
  bench->add_option("--rng-seed", bench_seed, "Seed")->capture_default_str();
  bench->add_option("--csv", bench_csv, "Append a CSV row to this file");

  // inject
  CLI::App* inject = app.add_subcommand("inject", "Merge knowledge into a base");
  std::string inject_kb;
  std::string inject_knowledge;
  std::string inject_out;
  inject->add_option("--kb", inject_kb, "Base")->required();
  inject->add_option("--knowledge", inject_knowledge, "Clauses to add")->required();
  inject->add_option("--out", inject_out, "Merged base")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  absl::Status status;
  if (*train) {
    status = [&]() -> absl::Status {
      ASSIGN_OR_RETURN(const TrainMethod method, ParseTrainMethod(train_method));
      ASSIGN_OR_RETURN(const Dataset data,
                       LoadCsv(train_input, train_csv.label_col, train_csv.pos_label));
      ASSIGN_OR_RETURN(const KnowledgeBase kb, TrainKb(data, method, train_arity));
      RETURN_IF_ERROR(WriteFile(train_out, SerializeKb(kb)));
      std::cout << ordered_json{{"clauses", kb.size()}, {"out", train_out}}.dump() << "\n";
      return absl::OkStatus();
    }();
  } else if (*classify) {
    status = RunClassify(classify_flags);
  } else if (*explain) {
    status = RunExplain(explain_flags, explain_k, explain_threads);
  } else if (*synth) {
    status = [&]() -> absl::Status {
      ASSIGN_OR_RETURN(const SeedSpec spec,
                       SeedSpec::Random(synth_length, synth_alphabet, synth_match, synth_seed));
      ASSIGN_OR_RETURN(const Dataset data, GenerateSynthetic(spec, synth_n, synth_seed));
      std::filesystem::create_directories(synth_out);
      RETURN_IF_ERROR(WriteSyntheticExport(synth_out, data, spec));
      std::cout << ordered_json{{"seed", spec.seed}, {"n", data.size()}, {"out", synth_out}}
                       .dump()
                << "\n";
      return absl::OkStatus();
    }();
  } else if (*eval) {
    status = RunEvalCommand(eval_flags);
  } else if (*expl_eval) {
    status = RunExplEval(expl_flags, expl_k);
  } else if (*kexp) {
    status = RunKnowledgeExp(kexp_flags, kexp_true, kexp_random);
  } else if (*bench) {
    status = [&]() -> absl::Status {
      ASSIGN_OR_RETURN(const BenchResult r, BenchLp(bench_vars, bench_clauses, bench_seed));
      if (bench_csv.has_value()) {
        const bool fresh = !std::filesystem::exists(*bench_csv);
        std::ofstream out(*bench_csv, std::ios::app);
        if (fresh) out << BenchCsvHeader() << "\n";
        out << BenchCsvRow(r) << "\n";
        if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", *bench_csv));
      }
      std::cout << ordered_json{{"n_vars", r.n_vars},
                                {"n_clauses", r.n_clauses},
                                {"rng_seed", r.rng_seed},
                                {"seconds", r.seconds},
                                {"objective", r.objective},
                                {"iterations", r.iterations}}
                       .dump()
                << "\n";
      return absl::OkStatus();
    }();
  } else if (*inject) {
    status = [&]() -> absl::Status {
      ASSIGN_OR_RETURN(const KnowledgeBase base, ReadKb(inject_kb));
      ASSIGN_OR_RETURN(const KnowledgeBase extra, ReadKb(inject_knowledge));
      ASSIGN_OR_RETURN(const KnowledgeBase merged, Merge(base, extra));
      RETURN_IF_ERROR(WriteFile(inject_out, SerializeKb(merged)));
      std::cout << ordered_json{{"clauses", merged.size()}, {"out", inject_out}}.dump()
                << "\n";
      return absl::OkStatus();
    }();
  }
  if (!status.ok()) {
    std::cerr << "error: " << status.ToString() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace plkb

int main(int argc, char** argv) { return plkb::Main(argc, argv); }
