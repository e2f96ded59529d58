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

#include "plkb/synthetic.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "plkb/random.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

// Expected draws above this are treated as an infeasible class.
constexpr double kMaxExpectedDraws = 1e8;

double BinomialPmf(int n, int k, double p) {
  const double log_choose =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << content;
  return out ? absl::OkStatus()
             : absl::DataLossError(absl::StrCat("write failed: ", path));
}

}  // namespace

absl::Status SeedSpec::Validate() const {
  if (length <= 0) return absl::InvalidArgumentError("length must be positive");
  if (alphabet_size < 2 || alphabet_size > 9) {
    return absl::InvalidArgumentError("alphabet size must be in [2,9]");
  }
  if (match_count < 0 || match_count > length) {
    return absl::InvalidArgumentError(
        absl::StrCat("match count ", match_count, " outside [0,", length, "]"));
  }
  if (static_cast<int>(seed.size()) != length) {
    return absl::InvalidArgumentError(
        absl::StrCat("seed '", seed, "' does not have length ", length));
  }
  for (char c : seed) {
    if (c < '1' || c > '0' + alphabet_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("seed symbol '", std::string(1, c),
                       "' outside alphabet 1..", alphabet_size));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SeedSpec> SeedSpec::Random(int length, int alphabet_size,
                                          int match_count, uint64_t rng_seed) {
  SeedSpec spec{"", length, alphabet_size, match_count};
  Rng rng(rng_seed);
  for (int i = 0; i < length; ++i) {
    spec.seed.push_back(static_cast<char>('1' + rng.UniformIndex(alphabet_size)));
  }
  RETURN_IF_ERROR(spec.Validate());
  return spec;
}

std::string SyntheticFeatureName(int position) {
  return absl::StrCat("a", position + 1);
}

absl::StatusOr<int> SyntheticPosition(absl::string_view feature) {
  int index = 0;
  if (!absl::ConsumePrefix(&feature, "a") || !absl::SimpleAtoi(feature, &index) ||
      index < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", feature, "' is not a synthetic feature name"));
  }
  return index - 1;
}

absl::StatusOr<bool> LabelSynthetic(absl::string_view s, const SeedSpec& spec) {
  if (static_cast<int>(s.size()) != spec.length) {
    return absl::InvalidArgumentError(
        absl::StrCat("string '", s, "' does not have length ", spec.length));
  }
  int matches = 0;
  for (int i = 0; i < spec.length; ++i) {
    if (s[i] < '1' || s[i] > '0' + spec.alphabet_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("symbol '", std::string(1, s[i]), "' outside alphabet"));
    }
    matches += s[i] == spec.seed[i];
  }
  return matches == spec.match_count;
}

absl::StatusOr<Dataset> GenerateSynthetic(const SeedSpec& spec, int n_samples,
                                          uint64_t rng_seed) {
  RETURN_IF_ERROR(spec.Validate());
  if (n_samples <= 0) {
    return absl::InvalidArgumentError("n_samples must be positive");
  }
  const int want_pos = n_samples / 2;
  const int want_neg = n_samples - want_pos;
  const double p_pos =
      BinomialPmf(spec.length, spec.match_count, 1.0 / spec.alphabet_size);
  if ((want_pos > 0 && want_pos / p_pos > kMaxExpectedDraws) ||
      (want_neg > 0 && want_neg / (1.0 - p_pos) > kMaxExpectedDraws)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "match count ", spec.match_count, " makes one class too rare (p=",
        p_pos, ")"));
  }
  std::vector<std::string> features;
  for (int i = 0; i < spec.length; ++i) features.push_back(SyntheticFeatureName(i));

  Rng rng(rng_seed);
  std::vector<Instance> instances;
  instances.reserve(n_samples);
  int n_pos = 0;
  int n_neg = 0;
  std::string s(spec.length, '1');
  while (n_pos < want_pos || n_neg < want_neg) {
    for (char& c : s) {
      c = static_cast<char>('1' + rng.UniformIndex(spec.alphabet_size));
    }
    ASSIGN_OR_RETURN(const bool label, LabelSynthetic(s, spec));
    if (label ? n_pos >= want_pos : n_neg >= want_neg) continue;
    (label ? n_pos : n_neg)++;
    Instance inst;
    inst.label = label;
    for (char c : s) inst.values.emplace_back(1, c);
    instances.push_back(std::move(inst));
  }
  return Dataset::Create(std::move(features), std::move(instances));
}

std::string SyntheticString(const Dataset& ds, size_t index) {
  std::vector<std::pair<int, absl::string_view>> ordered;
  for (size_t j = 0; j < ds.features().size(); ++j) {
    absl::StatusOr<int> pos = SyntheticPosition(ds.features()[j]);
    ordered.emplace_back(pos.ok() ? *pos : static_cast<int>(j),
                         ds.instances()[index].values[j]);
  }
  std::sort(ordered.begin(), ordered.end());
  std::string s;
  for (const auto& [pos, value] : ordered) s.append(value.data(), value.size());
  return s;
}

std::string SeedSpecToText(const SeedSpec& spec) {
  return absl::StrCat("seed=", spec.seed, "\nlength=", spec.length,
                      "\nalphabet=", spec.alphabet_size,
                      "\nmatch=", spec.match_count, "\n");
}

absl::StatusOr<SeedSpec> SeedSpecFromText(absl::string_view text) {
  SeedSpec spec;
  bool has_seed = false;
  bool has_match = false;
  spec.alphabet_size = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipWhitespace())) {
    line = absl::StripAsciiWhitespace(line);
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrCat("bad seed line '", line, "'"));
    }
    const absl::string_view key = line.substr(0, eq);
    const absl::string_view value = line.substr(eq + 1);
    if (key == "seed") {
      spec.seed = std::string(value);
      has_seed = true;
    } else if (key == "length" || key == "alphabet" || key == "match") {
      int v = 0;
      if (!absl::SimpleAtoi(value, &v)) {
        return absl::InvalidArgumentError(absl::StrCat("bad integer in '", line, "'"));
      }
      if (key == "length") spec.length = v;
      if (key == "alphabet") spec.alphabet_size = v;
      if (key == "match") {
        spec.match_count = v;
        has_match = true;
      }
    } else {
      return absl::InvalidArgumentError(absl::StrCat("unknown seed key '", key, "'"));
    }
  }
  if (!has_seed || !has_match) {
    return absl::InvalidArgumentError("seed file needs seed= and match= lines");
  }
  if (spec.length == 0) spec.length = static_cast<int>(spec.seed.size());
  if (spec.alphabet_size == 0) {
    for (char c : spec.seed) spec.alphabet_size = std::max(spec.alphabet_size, c - '0');
  }
  RETURN_IF_ERROR(spec.Validate());
  return spec;
}

absl::Status WriteSyntheticExport(const std::string& dir, const Dataset& ds,
                                  const SeedSpec& spec) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return absl::PermissionDeniedError(absl::StrCat("cannot create ", dir));
  RETURN_IF_ERROR(WriteFile(
      dir + "/data.csv", ToCsv(ds, kSyntheticLabelColumn, kSyntheticPositive,
                               kSyntheticNegative)));
  return WriteFile(dir + "/seed.txt", SeedSpecToText(spec));
}

absl::StatusOr<SyntheticExport> ReadSyntheticExport(const std::string& dir) {
  ASSIGN_OR_RETURN(std::string seed_text, ReadFile(dir + "/seed.txt"));
  ASSIGN_OR_RETURN(SeedSpec spec, SeedSpecFromText(seed_text));
  ASSIGN_OR_RETURN(Dataset data, LoadCsv(dir + "/data.csv", kSyntheticLabelColumn,
                                         kSyntheticPositive));
  return SyntheticExport{std::move(data), std::move(spec)};
}

}  // namespace plkb
