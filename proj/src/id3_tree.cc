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

#include "plkb/id3_tree.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "plkb/status_macros.h"

namespace plkb {
namespace {

// Gains closer than this are considered tied.
constexpr double kGainTieTolerance = 1e-12;

double Entropy(int positive, int total) {
  if (total == 0 || positive == 0 || positive == total) return 0.0;
  const double p = static_cast<double>(positive) / total;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

class Id3Builder {
 public:
  explicit Id3Builder(const Dataset& ds) : ds_(ds) {
    // Column order sorted by feature name makes the tie-break a plain scan.
    for (size_t j = 0; j < ds.features().size(); ++j) columns_.push_back(j);
    std::sort(columns_.begin(), columns_.end(), [&](size_t a, size_t b) {
      return ds.features()[a] < ds.features()[b];
    });
  }

  std::unique_ptr<TreeNode> Grow(const std::vector<size_t>& rows,
                                 std::vector<bool>& used) {
    auto node = std::make_unique<TreeNode>();
    node->n_total = static_cast<int>(rows.size());
    for (size_t r : rows) node->n_positive += ds_.instances()[r].label;
    if (node->n_positive == 0 || node->n_positive == node->n_total) {
      return node;
    }
    const double parent_entropy = Entropy(node->n_positive, node->n_total);

    std::optional<size_t> best;
    double best_gain = 0.0;
    for (size_t col : columns_) {
      if (used[col]) continue;
      std::map<absl::string_view, std::pair<int, int>> counts;
      for (size_t r : rows) {
        auto& c = counts[ds_.instances()[r].values[col]];
        ++c.first;
        c.second += ds_.instances()[r].label;
      }
      if (counts.size() < 2) continue;
      double remainder = 0.0;
      for (const auto& [value, c] : counts) {
        remainder += static_cast<double>(c.first) / node->n_total *
                     Entropy(c.second, c.first);
      }
      const double gain = parent_entropy - remainder;
      if (!best.has_value() || gain > best_gain + kGainTieTolerance) {
        best = col;
        best_gain = gain;
      }
    }
    if (!best.has_value()) return node;

    node->split_feature = ds_.features()[*best];
    std::map<std::string, std::vector<size_t>> partition;
    for (size_t r : rows) partition[ds_.instances()[r].values[*best]].push_back(r);
    used[*best] = true;
    for (auto& [value, subset] : partition) {
      std::unique_ptr<TreeNode> child = Grow(subset, used);
      child->incoming_edge = FeatureValue(*node->split_feature, value);
      node->children.emplace(value, std::move(child));
    }
    used[*best] = false;
    return node;
  }

 private:
  const Dataset& ds_;
  std::vector<size_t> columns_;
};

absl::Status CollectPaths(const TreeNode& node, PathMode mode,
                          std::vector<FeatureValue>& path,
                          KnowledgeBaseBuilder& builder) {
  const bool emit = node.is_leaf() ||
                    (mode == PathMode::kAllNodes && node.incoming_edge.has_value());
  if (emit) {
    ASSIGN_OR_RETURN(Clause clause, ClauseFromPath(path));
    RETURN_IF_ERROR(builder.Add(
        static_cast<double>(node.n_positive) / node.n_total, clause));
  }
  for (const auto& [value, child] : node.children) {
    path.push_back(*child->incoming_edge);
    RETURN_IF_ERROR(CollectPaths(*child, mode, path, builder));
    path.pop_back();
  }
  return absl::OkStatus();
}

void Dump(const TreeNode& node, int depth, std::string& out) {
  const std::string label =
      node.incoming_edge.has_value()
          ? absl::StrCat(node.incoming_edge->first, "=", node.incoming_edge->second)
          : "root";
  absl::StrAppendFormat(&out, "%s%s [%d/%d]\n", std::string(2 * depth, ' '),
                        label, node.n_positive, node.n_total);
  for (const auto& [value, child] : node.children) Dump(*child, depth + 1, out);
}

}  // namespace

int TreeNode::CountNodes() const {
  int n = 1;
  for (const auto& [value, child] : children) n += child->CountNodes();
  return n;
}

absl::StatusOr<std::unique_ptr<TreeNode>> BuildId3(const Dataset& train) {
  if (train.empty()) {
    return absl::InvalidArgumentError("cannot grow a tree on an empty dataset");
  }
  std::vector<size_t> rows(train.size());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  std::vector<bool> used(train.features().size(), false);
  return Id3Builder(train).Grow(rows, used);
}

absl::StatusOr<Clause> ClauseFromPath(std::span<const FeatureValue> path) {
  return Clause::ClassRule(path);
}

absl::StatusOr<KnowledgeBase> KbFromTree(const TreeNode& root, PathMode mode) {
  KnowledgeBaseBuilder builder(DuplicatePolicy::kRejectConflicting);
  std::vector<FeatureValue> path;
  RETURN_IF_ERROR(CollectPaths(root, mode, path, builder));
  return std::move(builder).Build();
}

std::string DumpTree(const TreeNode& root) {
  std::string out;
  Dump(root, 0, out);
  return out;
}

}  // namespace plkb
