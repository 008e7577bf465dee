#include "treecost/tree.hpp"

#include <functional>

namespace treecost {

int TreeModel::leaf_count() const {
  int n = 0;
  for (const auto& node : nodes) n += node.is_leaf();
  return n;
}

int TreeModel::internal_count() const { return size() - leaf_count(); }

int TreeModel::route(std::span<const std::uint8_t> outcomes, int* fallbacks) const {
  int cur = 0;
  while (!nodes[cur].is_leaf()) {
    const TreeNode& node = nodes[cur];
    const std::uint8_t v = outcomes[node.test];
    int next = v < node.children.size() ? node.children[v] : -1;
    if (next < 0) {
      // unseen branch: follow the heaviest child
      if (fallbacks) ++*fallbacks;
      Units best_units = -1;
      for (int child : node.children) {
        if (child >= 0 && nodes[child].units > best_units) {
          best_units = nodes[child].units;
          next = child;
        }
      }
    }
    cur = next;
  }
  return cur;
}

std::vector<double> TreeModel::distribution(int node) const {
  const TreeNode& n = nodes[node];
  std::vector<double> dist(n.class_units.size(), 0.0);
  if (n.units > 0)
    for (std::size_t c = 0; c < dist.size(); ++c)
      dist[c] = static_cast<double>(n.class_units[c]) / static_cast<double>(n.units);
  return dist;
}

bool TreeModel::same_structure(const TreeModel& other) const {
  std::function<bool(int, int)> eq = [&](int a, int b) {
    const TreeNode& x = nodes[a];
    const TreeNode& y = other.nodes[b];
    if (x.is_leaf() != y.is_leaf()) return false;
    if (x.is_leaf()) return x.label == y.label;
    if (x.test != y.test || x.children.size() != y.children.size()) return false;
    for (std::size_t v = 0; v < x.children.size(); ++v) {
      const bool xe = x.children[v] < 0, ye = y.children[v] < 0;
      if (xe != ye) return false;
      if (!xe && !eq(x.children[v], y.children[v])) return false;
    }
    return true;
  };
  if (nodes.empty() || other.nodes.empty()) return nodes.empty() == other.nodes.empty();
  return eq(0, 0);
}

ClassHistogram node_histogram(const TreeModel& tree, int node) {
  ClassHistogram h(static_cast<int>(tree.classes.size()));
  for (std::size_t c = 0; c < tree.nodes[node].class_units.size(); ++c)
    h.add(static_cast<int>(c), tree.nodes[node].class_units[c]);
  return h;
}

}  // namespace treecost
