#pragma once

#include <vector>

#include "treecost/instance.hpp"
#include "treecost/tree.hpp"

namespace treecost {

/// Nested weakest-link family. trees[0] is the input; trees[k+1] is
/// obtained from trees[k] by collapsing the nodes whose link strength
/// equals alphas[k]. alphas is non-decreasing.
struct PruneFamily {
  std::vector<TreeModel> trees;
  std::vector<double> alphas;
};

/// Node risk is mass-weighted impurity, p(node) * f(node); the link
/// strength of an internal node is
/// (R(node) - R(subtree)) / (leaves(subtree) - 1).
PruneFamily weakest_link_sequence(const TreeModel& tree, ImpurityKind kind);

/// Sum of leaf risks.
double tree_risk(const TreeModel& tree, ImpurityKind kind);

/// tree_risk + alpha * leaf count.
double prune_objective(const TreeModel& tree, ImpurityKind kind, double alpha);

/// Index of the family member optimal at `alpha` (ties prefer the
/// smaller tree).
int family_index_at(const PruneFamily& family, double alpha);

/// 20 logarithmically spaced grid points in [1e-5, 1].
std::vector<double> alpha_grid();

/// Grid search on the validation split: evaluates the family member
/// optimal at each grid alpha and returns the one with the best
/// validation AUC; AUC ties prefer the smaller tree. Falls back to the
/// unpruned tree when no member has a defined validation AUC.
TreeModel select_alpha(const PruneFamily& family, const Instance& inst,
                       const std::vector<double>& grid = alpha_grid());

}  // namespace treecost
