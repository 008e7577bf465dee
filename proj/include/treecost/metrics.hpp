#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecost/inducer.hpp"
#include "treecost/tree.hpp"

namespace treecost {

enum class EvalSplit { val, test };

struct RunReport {
  std::string dataset;
  std::string tag;
  std::string cost_mode = "unit";
  std::uint64_t seed = 0;
  std::optional<double> auc;   // absent on single-class splits
  double expected_cost = 0.0;
  double expected_height = 0.0;
  int tree_size = 0;
  double wall_ms = 0.0;
  std::optional<double> lambda_used;  // not part of the CSV schema
};

/// Expected test cost over the training distribution: sum over objects of
/// p(x) times the total cost of the tests on x's root-to-leaf path.
double expected_cost(const TreeModel& tree, const Instance& inst);

/// Same walk with every cost taken as 1; equals expected_cost bit-exactly
/// under unit costs.
double expected_height(const TreeModel& tree, const Instance& inst);

/// Independent route: sum over internal nodes of cost(test) * p(node).
double expected_cost_node_sum(const TreeModel& tree, const Instance& inst);

/// Mann-Whitney rank AUC with half credit for ties; multi-class inputs are
/// macro-averaged one-vs-rest over the classes that have both a positive
/// and a negative. Absent when no class qualifies.
std::optional<double> roc_auc(const std::vector<std::vector<double>>& scores,
                              const std::vector<int>& labels, int num_classes);

/// Routes rows through the tree (leaf class distributions as scores) and
/// computes roc_auc. `fallbacks` counts rows that hit an unseen branch.
std::optional<double> auc_on_rows(const TreeModel& tree,
                                  const std::vector<LabeledRow>& rows,
                                  int num_classes, int* fallbacks = nullptr);

RunReport evaluate(const TreeModel& tree, const Instance& inst, EvalSplit split);

struct LambdaStep {
  double lambda = 0.0;
  std::optional<double> auc;
  double expected_cost = 0.0;
};

struct LambdaChoice {
  double lambda = 0.0;
  TreeModel model;
  std::vector<LambdaStep> trace;
};

/// Walks lambda down a geometric grid (2^6 .. 2^-6, factor 1/2) and stops
/// before the first value whose validation AUC drops more than 1%
/// (relative) below the best seen at larger lambda. Returns the last safe
/// lambda, its model, and the full trace.
LambdaChoice tune_lambda(const Instance& inst, GreedyConfig base);

std::vector<double> lambda_grid();

}  // namespace treecost
