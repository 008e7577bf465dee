#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treecost/coverage.hpp"
#include "treecost/tree.hpp"

namespace treecost {

/// Splitting criteria. `enhanced` is the cost-benefit score
/// (balance + efficiency + lambda * discrimination) / cost; `asr` is its
/// lambda = 0 special case computed without the impurity machinery. The
/// rest are the classical baselines, all under the same stopping rule.
enum class Algo { enhanced, asr, ip, bal, c45, cart, c_c45, c_cart };

const char* to_string(Algo a);
Algo algo_from_string(const std::string& s);

struct GreedyConfig {
  Algo algo = Algo::enhanced;
  double lambda = 1.0;  // used by enhanced only
  ImpurityKind impurity = ImpurityKind::entropy;
};

struct ScoreBreakdown {
  int test = -1;
  double bal = 0.0;
  double eff = 0.0;
  double disc = 0.0;
  double cost = 1.0;
  double total = 0.0;
};

struct InductionStats {
  /// (object, test) pairs scored per tree level; at most m*n each.
  std::vector<std::uint64_t> touches_per_level;
};

class Inducer {
 public:
  Inducer(const Instance& inst, GreedyConfig cfg);

  TreeModel induce();

  /// p(N) - p(largest-cardinality child); ties on cardinality break to the
  /// smallest outcome value.
  double balance_term(const NodeState& node, int test) const;

  /// Probability-weighted normalized marginal gain of f_or, summed over
  /// the node's uncovered objects.
  double efficiency_term(const NodeState& node, int test) const;

  /// p(N) * (impurity(N) - impurity(N | test)).
  double discrimination_term(const NodeState& node, int test) const;

  /// P(N) - sum_v P(child_v), in unit-pairs.
  std::int64_t pair_reduction(const NodeState& node, int test) const;

  /// Chosen test for a node that fails the stopping predicate, or nullopt
  /// when every unused test is constant on the node (inseparable).
  /// Ties always break to the lowest test index.
  std::optional<int> select_test(const NodeState& node,
                                 const std::vector<std::uint8_t>& used,
                                 std::vector<ScoreBreakdown>* breakdown = nullptr);

  bool stop(const NodeState& node) const;

  const Coverage& coverage() const { return cov_; }
  const InductionStats& stats() const { return stats_; }

 private:
  double score(const NodeState& node, int test, ScoreBreakdown* out) const;
  int grow(NodeState node, std::vector<std::uint8_t>& used, int depth, TreeModel& tree);
  void touch(std::size_t card) {
    if (stats_.touches_per_level.size() <= static_cast<std::size_t>(depth_))
      stats_.touches_per_level.resize(depth_ + 1, 0);
    stats_.touches_per_level[depth_] += card;
  }

  const Instance* inst_;
  GreedyConfig cfg_;
  Coverage cov_;
  InductionStats stats_;
  int depth_ = 0;
};

TreeModel induce(const Instance& inst, const GreedyConfig& cfg);

}  // namespace treecost
