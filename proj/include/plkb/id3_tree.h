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

// ID3 decision trees over categorical features and the rule knowledge bases
// read off their paths.

#ifndef PLKB_ID3_TREE_H_
#define PLKB_ID3_TREE_H_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "plkb/dataset.h"
#include "plkb/kb.h"

namespace plkb {

using FeatureValue = std::pair<std::string, std::string>;

struct TreeNode {
  // Unset for leaves.
  std::optional<std::string> split_feature;
  // Keyed by the value of `split_feature`. Only observed values get a branch.
  std::map<std::string, std::unique_ptr<TreeNode>> children;
  int n_total = 0;
  int n_positive = 0;
  // Unset for the root.
  std::optional<FeatureValue> incoming_edge;

  bool is_leaf() const { return children.empty(); }
  // Number of nodes in the subtree, this one included.
  int CountNodes() const;
};

// Grows an unpruned ID3 tree. Each node splits on the feature with the
// largest information gain among the features not yet used on its path and
// taking at least two values at the node; ties go to the lexicographically
// smallest feature name. Growth stops at pure nodes and when no such feature
// remains.
absl::StatusOr<std::unique_ptr<TreeNode>> BuildId3(const Dataset& train);

// `pos | !a1=v1 | ... | !ak=vk` for the path a1=v1 -> ... -> ak=vk.
absl::StatusOr<Clause> ClauseFromPath(std::span<const FeatureValue> path);

enum class PathMode {
  // One clause per root-to-leaf path.
  kLeaves,
  // One clause per root-to-node path, for every node below the root (and the
  // root itself when it is a leaf).
  kAllNodes,
};

// Clause probabilities are n_positive / n_total of the path's end node.
absl::StatusOr<KnowledgeBase> KbFromTree(const TreeNode& root, PathMode mode);

// Indented dump, one node per line: `feature=value [n_pos/n_total]`.
std::string DumpTree(const TreeNode& root);

}  // namespace plkb

#endif  // PLKB_ID3_TREE_H_
