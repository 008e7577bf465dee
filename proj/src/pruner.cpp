#include "treecost/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "treecost/metrics.hpp"

namespace treecost {

namespace {

double node_risk(const TreeModel& tree, int id, ImpurityKind kind) {
  const TreeNode& n = tree.nodes[id];
  const double p = static_cast<double>(n.units) / static_cast<double>(tree.denom);
  return p * impurity(node_histogram(tree, id), kind);
}

/// Copy of `tree` with every node in `collapsed` turned into a leaf.
TreeModel snapshot(const TreeModel& tree, const std::vector<std::uint8_t>& collapsed) {
  TreeModel out;
  out.test_names = tree.test_names;
  out.classes = tree.classes;
  out.denom = tree.denom;

  std::function<int(int)> copy = [&](int id) {
    const TreeNode& src = tree.nodes[id];
    const int nid = out.size();
    out.nodes.push_back(src);
    if (collapsed[id] || src.is_leaf()) {
      out.nodes[nid].test = -1;
      out.nodes[nid].children.clear();
      return nid;
    }
    for (std::size_t v = 0; v < src.children.size(); ++v) {
      const int child = src.children[v];
      out.nodes[nid].children[v] = child < 0 ? -1 : copy(child);
    }
    return nid;
  };
  copy(0);
  return out;
}

}  // namespace

double tree_risk(const TreeModel& tree, ImpurityKind kind) {
  double acc = 0.0;
  for (int i = 0; i < tree.size(); ++i)
    if (tree.nodes[i].is_leaf()) acc += node_risk(tree, i, kind);
  return acc;
}

double prune_objective(const TreeModel& tree, ImpurityKind kind, double alpha) {
  return tree_risk(tree, kind) + alpha * tree.leaf_count();
}

PruneFamily weakest_link_sequence(const TreeModel& tree, ImpurityKind kind) {
  PruneFamily family;
  family.trees.push_back(tree);
  if (tree.nodes.empty() || tree.nodes[0].is_leaf()) return family;

  const int n = tree.size();
  std::vector<std::uint8_t> collapsed(n, 0);
  std::vector<double> leaf_risk(n);
  for (int i = 0; i < n; ++i) leaf_risk[i] = node_risk(tree, i, kind);

  const auto effective_leaf = [&](int id) {
    return collapsed[id] || tree.nodes[id].is_leaf();
  };

  // subtree risk and effective leaf count below each live internal node;
  // nodes below a collapsed ancestor are out of play entirely
  struct Sub {
    double risk = 0.0;
    int leaves = 0;
  };
  std::vector<Sub> sub(n);
  std::vector<std::uint8_t> live(n, 0);
  std::function<Sub(int)> walk = [&](int id) -> Sub {
    if (effective_leaf(id)) return {leaf_risk[id], 1};
    live[id] = 1;
    Sub acc;
    for (int child : tree.nodes[id].children) {
      if (child < 0) continue;
      const Sub s = walk(child);
      acc.risk += s.risk;
      acc.leaves += s.leaves;
    }
    sub[id] = acc;
    return acc;
  };

  while (!effective_leaf(0)) {
    std::fill(live.begin(), live.end(), 0);
    walk(0);
    double min_g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!live[i]) continue;
      const double g = (leaf_risk[i] - sub[i].risk) / (sub[i].leaves - 1);
      min_g = std::min(min_g, g);
    }
    min_g = std::max(min_g, 0.0);  // concavity; clamp float noise

    // collapse every weakest link at once (all nodes tied at min_g)
    std::function<void(int)> mark = [&](int id) {
      if (effective_leaf(id)) return;
      const double g = (leaf_risk[id] - sub[id].risk) / (sub[id].leaves - 1);
      if (g <= min_g + 1e-12) {
        collapsed[id] = 1;
        return;
      }
      for (int child : tree.nodes[id].children)
        if (child >= 0) mark(child);
    };
    mark(0);

    family.alphas.push_back(min_g);
    family.trees.push_back(snapshot(tree, collapsed));
  }

  // critical values are non-decreasing by construction; pin down float noise
  for (std::size_t k = 1; k < family.alphas.size(); ++k)
    family.alphas[k] = std::max(family.alphas[k], family.alphas[k - 1]);
  return family;
}

int family_index_at(const PruneFamily& family, double alpha) {
  int idx = 0;
  while (idx < static_cast<int>(family.alphas.size()) && family.alphas[idx] <= alpha) ++idx;
  return idx;
}

std::vector<double> alpha_grid() {
  std::vector<double> grid;
  const double lo = std::log10(1e-5), hi = std::log10(1.0);
  for (int i = 0; i < 20; ++i)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * i / 19.0));
  return grid;
}

TreeModel select_alpha(const PruneFamily& family, const Instance& inst,
                       const std::vector<double>& grid) {
  if (family.trees.empty()) throw std::runtime_error("empty prune family");

  std::vector<int> candidates;
  for (double alpha : grid) candidates.push_back(family_index_at(family, alpha));
  std::sort(candidates.begin(), candidates.end(), std::greater<>());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  int best = -1;
  double best_auc = -1.0;
  for (int idx : candidates) {  // smallest tree first: strict > keeps it on ties
    const auto auc = auc_on_rows(family.trees[idx], inst.val_rows, inst.num_classes());
    if (!auc) continue;
    if (*auc > best_auc) {
      best_auc = *auc;
      best = idx;
    }
  }
  return family.trees[best < 0 ? 0 : best];
}

}  // namespace treecost
