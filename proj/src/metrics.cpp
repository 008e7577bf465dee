#include "treecost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace treecost {

namespace {

double expected_path_cost(const TreeModel& tree, const Instance& inst, bool unit_costs) {
  double acc = 0.0;
  for (const auto& o : inst.objects) {
    std::int64_t path_cost = 0;
    int cur = 0;
    while (!tree.nodes[cur].is_leaf()) {
      const TreeNode& node = tree.nodes[cur];
      path_cost += unit_costs ? 1 : inst.tests[node.test].cost;
      const int next = node.children[o.outcomes[node.test]];
      if (next < 0) throw std::runtime_error("training object fell off the tree");
      cur = next;
    }
    acc += inst.prob(o.units) * static_cast<double>(path_cost);
  }
  return acc;
}

}  // namespace

double expected_cost(const TreeModel& tree, const Instance& inst) {
  return expected_path_cost(tree, inst, false);
}

double expected_height(const TreeModel& tree, const Instance& inst) {
  return expected_path_cost(tree, inst, true);
}

double expected_cost_node_sum(const TreeModel& tree, const Instance& inst) {
  double acc = 0.0;
  for (const auto& node : tree.nodes)
    if (!node.is_leaf())
      acc += inst.tests[node.test].cost * inst.prob(node.units);
  return acc;
}

std::optional<double> roc_auc(const std::vector<std::vector<double>>& scores,
                              const std::vector<int>& labels, int num_classes) {
  const std::size_t n = labels.size();
  if (scores.size() != n) throw std::runtime_error("scores/labels size mismatch");

  double auc_sum = 0.0;
  int classes_scored = 0;
  std::vector<std::size_t> order(n);

  for (int c = 0; c < num_classes; ++c) {
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += y == c;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) continue;

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores[a][c] < scores[b][c];
    });

    // average ranks across tie groups, then the Mann-Whitney statistic
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && scores[order[j]][c] == scores[order[i]][c]) ++j;
      const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
      for (std::size_t k = i; k < j; ++k)
        if (labels[order[k]] == c) pos_rank_sum += avg_rank;
      i = j;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    auc_sum += (pos_rank_sum - np * (np + 1) / 2.0) / (np * nn);
    ++classes_scored;
  }

  if (classes_scored == 0) return std::nullopt;
  return auc_sum / classes_scored;
}

std::optional<double> auc_on_rows(const TreeModel& tree,
                                  const std::vector<LabeledRow>& rows,
                                  int num_classes, int* fallbacks) {
  if (rows.empty()) return std::nullopt;
  std::vector<std::vector<double>> scores;
  std::vector<int> labels;
  scores.reserve(rows.size());
  labels.reserve(rows.size());
  for (const auto& row : rows) {
    const int leaf = tree.route(row.outcomes, fallbacks);
    scores.push_back(tree.distribution(leaf));
    labels.push_back(row.label);
  }
  return roc_auc(scores, labels, num_classes);
}

RunReport evaluate(const TreeModel& tree, const Instance& inst, EvalSplit split) {
  RunReport r;
  r.dataset = inst.name;
  r.expected_cost = expected_cost(tree, inst);
  r.expected_height = expected_height(tree, inst);
  r.tree_size = tree.size();
  const auto& rows = split == EvalSplit::val ? inst.val_rows : inst.test_rows;
  int fallbacks = 0;
  r.auc = auc_on_rows(tree, rows, inst.num_classes(), &fallbacks);
  if (fallbacks > 0)
    std::cerr << inst.name << ": " << fallbacks
              << " held-out rows hit an unseen branch and were routed to the heaviest child\n";
  return r;
}

std::vector<double> lambda_grid() {
  std::vector<double> grid;
  for (int e = 6; e >= -6; --e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

LambdaChoice tune_lambda(const Instance& inst, GreedyConfig base) {
  base.algo = Algo::enhanced;

  LambdaChoice choice;
  double best_auc = -1.0;
  bool have_model = false;

  for (const double lambda : lambda_grid()) {
    base.lambda = lambda;
    TreeModel model = induce(inst, base);
    LambdaStep step;
    step.lambda = lambda;
    step.expected_cost = expected_cost(model, inst);
    step.auc = auc_on_rows(model, inst.val_rows, inst.num_classes());
    choice.trace.push_back(step);

    if (step.auc && best_auc >= 0.0 && *step.auc < best_auc * 0.99) break;  // significant drop

    choice.lambda = lambda;
    choice.model = std::move(model);
    have_model = true;
    if (step.auc) best_auc = std::max(best_auc, *step.auc);
  }

  if (!have_model) throw std::runtime_error("lambda grid is empty");
  return choice;
}

}  // namespace treecost
