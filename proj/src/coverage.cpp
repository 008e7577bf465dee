#include "treecost/coverage.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace treecost {

NodeState NodeState::make(const Instance& inst, std::vector<std::int32_t> members) {
  NodeState n;
  n.members = std::move(members);
  n.hist = ClassHistogram(inst.num_classes());
  for (std::int32_t idx : n.members) {
    const auto& o = inst.objects[idx];
    n.units += o.units;
    n.hist.add(o.label, o.units);
  }
  n.pairs = het_pairs(n.hist);
  return n;
}

NodeState NodeState::root(const Instance& inst) {
  std::vector<std::int32_t> all(inst.objects.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
  return make(inst, std::move(all));
}

std::vector<NodeState> children_of(const Instance& inst, const NodeState& node, int test) {
  const int arity = inst.tests[test].arity;
  std::vector<NodeState> children(arity);
  for (auto& c : children) c.hist = ClassHistogram(inst.num_classes());
  for (std::int32_t idx : node.members) {
    const auto& o = inst.objects[idx];
    NodeState& c = children[o.outcomes[test]];
    c.members.push_back(idx);
    c.units += o.units;
    c.hist.add(o.label, o.units);
  }
  for (auto& c : children) c.pairs = het_pairs(c.hist);
  return children;
}

NodeState child_of(const Instance& inst, const NodeState& node, int test, int outcome) {
  std::vector<std::int32_t> members;
  for (std::int32_t idx : node.members)
    if (inst.objects[idx].outcomes[test] == outcome) members.push_back(idx);
  return NodeState::make(inst, std::move(members));
}

Coverage::Coverage(const Instance& inst) : inst_(&inst) {
  root_pairs_ = het_pairs(NodeState::root(inst).hist);
}

double Coverage::f_prob(int obj, const NodeState& node) const {
  const Units floor_units = std::max(inst_->objects[obj].units, inst_->theta_units);
  if (node.units <= floor_units) return 1.0;  // truncation, exact
  const Units den = inst_->denom - floor_units;
  if (den <= 0) return 1.0;  // single-object universe
  return static_cast<double>(inst_->denom - node.units) / static_cast<double>(den);
}

double Coverage::f_prob_raw(int obj, const NodeState& node) const {
  const Units u = inst_->objects[obj].units;
  if (node.units <= u) return 1.0;
  const Units den = inst_->denom - u;
  if (den <= 0) return 1.0;
  return static_cast<double>(inst_->denom - node.units) / static_cast<double>(den);
}

double Coverage::f_pairs(const NodeState& node) const {
  if (root_pairs_ == 0) return 1.0;
  return static_cast<double>(root_pairs_ - node.pairs) / static_cast<double>(root_pairs_);
}

double Coverage::f_or(int obj, const NodeState& node) const {
  if (covered(obj, node)) return 1.0;
  return 1.0 - (1.0 - f_prob(obj, node)) * (1.0 - f_pairs(node));
}

bool Coverage::covered(int obj, const NodeState& node) const {
  if (node.pairs == 0 || root_pairs_ == 0) return true;
  return node.units <= std::max(inst_->objects[obj].units, inst_->theta_units);
}

double Coverage::marginal_gain(int obj, const NodeState& node, int test) const {
  const int outcome = inst_->objects[obj].outcomes[test];
  const NodeState child = child_of(*inst_, node, test, outcome);
  const double gain = f_or(obj, child) - f_or(obj, node);
  return gain > 0.0 ? gain : 0.0;
}

}  // namespace treecost
