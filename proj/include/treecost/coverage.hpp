#pragma once

#include <cstdint>
#include <vector>

#include "treecost/impurity.hpp"
#include "treecost/instance.hpp"

namespace treecost {

/// A tree node's object set with cached mass, class histogram and
/// heterogeneous-pair count.
struct NodeState {
  std::vector<std::int32_t> members;
  Units units = 0;
  std::int64_t pairs = 0;
  ClassHistogram hist;

  std::size_t card() const { return members.size(); }
  bool homogeneous() const { return pairs == 0; }

  static NodeState make(const Instance& inst, std::vector<std::int32_t> members);
  static NodeState root(const Instance& inst);
};

/// Children of `node` under `test`, one per outcome value (possibly empty).
std::vector<NodeState> children_of(const Instance& inst, const NodeState& node, int test);
NodeState child_of(const Instance& inst, const NodeState& node, int test, int outcome);

/// Per-object coverage functions evaluated at a node.
///
/// Every object of a node shares that node as the end of its outcome path,
/// so all functions are O(1) per object given the node's cached statistics;
/// no per-object path history is kept. Saturation tests are exact integer
/// comparisons in the units representation.
class Coverage {
 public:
  explicit Coverage(const Instance& inst);

  std::int64_t root_pairs() const { return root_pairs_; }

  /// Truncated scaled excluded-mass function:
  /// min{ (1 - p(N)) / (1 - max{p(x), theta}), 1 }.
  double f_prob(int obj, const NodeState& node) const;

  /// Untruncated variant, denominator 1 - p(x).
  double f_prob_raw(int obj, const NodeState& node) const;

  /// Scaled excluded-heterogeneous-pairs function (P(X) - P(N)) / P(X);
  /// identically 1 on single-class instances. Same value for every member.
  double f_pairs(const NodeState& node) const;

  /// Disjunction 1 - (1 - f_prob)(1 - f_pairs).
  double f_or(int obj, const NodeState& node) const;

  /// Exact test for f_or == 1: node homogeneous, or
  /// units(N) <= max{units(x), theta_units}.
  bool covered(int obj, const NodeState& node) const;

  /// f_or at the child of `node` that `obj` falls into under `test`,
  /// minus f_or at `node`. Non-negative.
  double marginal_gain(int obj, const NodeState& node, int test) const;

 private:
  const Instance* inst_;
  std::int64_t root_pairs_ = 0;
};

}  // namespace treecost
