#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treecost/impurity.hpp"
#include "treecost/instance.hpp"

namespace treecost {

struct TreeNode {
  int test = -1;               // -1 marks a leaf
  std::vector<int> children;   // child id per outcome value, -1 for an empty branch
  int label = 0;               // majority class of the node's training mass
  std::vector<Units> class_units;
  Units units = 0;
  int depth = 0;

  bool is_leaf() const { return test < 0; }
};

/// An induced decision tree. nodes[0] is the root. Internal nodes carry the
/// test id; every node keeps its training mass and class distribution.
struct TreeModel {
  std::vector<TreeNode> nodes;
  std::vector<std::string> test_names;
  std::vector<std::string> classes;
  Units denom = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  int leaf_count() const;
  int internal_count() const;

  /// Leaf reached by an outcome vector. An outcome with no child (possible
  /// only for rows outside the training split) falls back to the
  /// largest-mass child; `fallbacks` counts those routings when given.
  int route(std::span<const std::uint8_t> outcomes, int* fallbacks = nullptr) const;

  /// Class-probability vector at a node (training class_units normalized).
  std::vector<double> distribution(int node) const;

  /// Structural equality: same tests, same branching, same leaf labels.
  bool same_structure(const TreeModel& other) const;
};

ClassHistogram node_histogram(const TreeModel& tree, int node);

}  // namespace treecost
