#include "treecost/inducer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace treecost {

const char* to_string(Algo a) {
  switch (a) {
    case Algo::enhanced: return "enhanced";
    case Algo::asr: return "asr";
    case Algo::ip: return "ip";
    case Algo::bal: return "bal";
    case Algo::c45: return "c45";
    case Algo::cart: return "cart";
    case Algo::c_c45: return "c-c45";
    case Algo::c_cart: return "c-cart";
  }
  return "?";
}

Algo algo_from_string(const std::string& s) {
  if (s == "enhanced") return Algo::enhanced;
  if (s == "asr") return Algo::asr;
  if (s == "ip") return Algo::ip;
  if (s == "bal") return Algo::bal;
  if (s == "c45") return Algo::c45;
  if (s == "cart") return Algo::cart;
  if (s == "c-c45") return Algo::c_c45;
  if (s == "c-cart") return Algo::c_cart;
  throw std::runtime_error("unknown algorithm tag: " + s);
}

Inducer::Inducer(const Instance& inst, GreedyConfig cfg)
    : inst_(&inst), cfg_(cfg), cov_(inst) {
  if (cfg_.lambda < 0) throw std::runtime_error("lambda must be non-negative");
}

bool Inducer::stop(const NodeState& node) const {
  return node.homogeneous() || node.units <= inst_->theta_units;
}

double Inducer::balance_term(const NodeState& node, int test) const {
  const auto children = children_of(*inst_, node, test);
  std::size_t vstar = 0;
  for (std::size_t v = 1; v < children.size(); ++v)
    if (children[v].card() > children[vstar].card()) vstar = v;
  return inst_->prob(node.units - children[vstar].units);
}

double Inducer::efficiency_term(const NodeState& node, int test) const {
  const auto children = children_of(*inst_, node, test);
  double acc = 0.0;
  for (std::int32_t idx : node.members) {
    if (cov_.covered(idx, node)) continue;
    const auto& o = inst_->objects[idx];
    const NodeState& child = children[o.outcomes[test]];
    const double residual_node = (1.0 - cov_.f_prob(idx, node)) * (1.0 - cov_.f_pairs(node));
    const double residual_child =
        cov_.covered(idx, child)
            ? 0.0
            : (1.0 - cov_.f_prob(idx, child)) * (1.0 - cov_.f_pairs(child));
    const double normalized = (residual_node - residual_child) / residual_node;
    acc += inst_->prob(o.units) * std::clamp(normalized, 0.0, 1.0);
  }
  return acc;
}

double Inducer::discrimination_term(const NodeState& node, int test) const {
  const auto children = children_of(*inst_, node, test);
  std::vector<ClassHistogram> hists;
  hists.reserve(children.size());
  for (const auto& c : children) hists.push_back(c.hist);
  return inst_->prob(node.units) * impurity_reduction(node.hist, hists, cfg_.impurity);
}

std::int64_t Inducer::pair_reduction(const NodeState& node, int test) const {
  std::int64_t acc = node.pairs;
  for (const auto& c : children_of(*inst_, node, test)) acc -= c.pairs;
  return acc;
}

double Inducer::score(const NodeState& node, int test, ScoreBreakdown* out) const {
  const Instance& inst = *inst_;
  const int arity = inst.tests[test].arity;
  const double cost = inst.tests[test].cost;

  struct Agg {
    Units units = 0;
    std::int64_t card = 0;
    std::int64_t pairs = 0;
  };
  std::vector<Agg> agg(arity);
  std::vector<ClassHistogram> hists(arity, ClassHistogram(inst.num_classes()));
  for (std::int32_t idx : node.members) {
    const auto& o = inst.objects[idx];
    const std::uint8_t v = o.outcomes[test];
    agg[v].units += o.units;
    ++agg[v].card;
    hists[v].add(o.label, o.units);
  }
  int nonempty = 0;
  for (const auto& a : agg) nonempty += a.card > 0;
  if (nonempty < 2) return -std::numeric_limits<double>::infinity();  // constant test
  for (int v = 0; v < arity; ++v) agg[v].pairs = het_pairs(hists[v]);

  ScoreBreakdown sb;
  sb.test = test;
  sb.cost = cost;

  double total = 0.0;
  switch (cfg_.algo) {
    case Algo::enhanced:
    case Algo::asr: {
      int vstar = 0;
      for (int v = 1; v < arity; ++v)
        if (agg[v].card > agg[vstar].card) vstar = v;
      sb.bal = inst.prob(node.units - agg[vstar].units);

      const double fH_node = cov_.f_pairs(node);
      for (std::int32_t idx : node.members) {
        if (cov_.covered(idx, node)) continue;
        const auto& o = inst.objects[idx];
        const Agg& child = agg[o.outcomes[test]];
        const double residual_node =
            (1.0 - cov_.f_prob(idx, node)) * (1.0 - fH_node);
        double residual_child = 0.0;
        const Units floor_units = std::max(o.units, inst.theta_units);
        if (child.pairs != 0 && child.units > floor_units) {
          const double fp = static_cast<double>(inst.denom - child.units) /
                            static_cast<double>(inst.denom - floor_units);
          residual_child = (1.0 - fp) * (static_cast<double>(child.pairs) /
                                         static_cast<double>(cov_.root_pairs()));
        }
        const double normalized = (residual_node - residual_child) / residual_node;
        sb.eff += inst.prob(o.units) * std::clamp(normalized, 0.0, 1.0);
      }

      if (cfg_.algo == Algo::enhanced) {
        sb.disc = inst.prob(node.units) * impurity_reduction(node.hist, hists, cfg_.impurity);
        total = (sb.bal + sb.eff + cfg_.lambda * sb.disc) / cost;
      } else {
        total = (sb.bal + sb.eff) / cost;
      }
      break;
    }
    case Algo::ip: {
      std::int64_t red = node.pairs;
      for (const auto& a : agg) red -= a.pairs;
      total = static_cast<double>(red);
      break;
    }
    case Algo::bal: {
      std::int64_t max_card = 0;
      for (const auto& a : agg) max_card = std::max(max_card, a.card);
      total = -static_cast<double>(max_card);
      break;
    }
    case Algo::c45:
    case Algo::cart:
    case Algo::c_c45:
    case Algo::c_cart: {
      const ImpurityKind kind = (cfg_.algo == Algo::c45 || cfg_.algo == Algo::c_c45)
                                    ? ImpurityKind::entropy
                                    : ImpurityKind::gini;
      sb.disc = impurity_reduction(node.hist, hists, kind);
      total = sb.disc;
      if (cfg_.algo == Algo::c_c45 || cfg_.algo == Algo::c_cart) total /= cost;
      break;
    }
  }
  sb.total = total;
  if (out) *out = sb;
  return total;
}

std::optional<int> Inducer::select_test(const NodeState& node,
                                        const std::vector<std::uint8_t>& used,
                                        std::vector<ScoreBreakdown>* breakdown) {
  const int m = inst_->num_tests();
  int best = -1;
  double best_total = -std::numeric_limits<double>::infinity();
  if (breakdown) breakdown->clear();

  for (int t = 0; t < m; ++t) {
    if (used[t]) continue;
    touch(node.card());
    ScoreBreakdown sb;
    const double total = score(node, t, &sb);
    if (total == -std::numeric_limits<double>::infinity()) continue;
    if (breakdown) breakdown->push_back(sb);
    if (total > best_total) {  // strict: ties keep the lowest test index
      best_total = total;
      best = t;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

int Inducer::grow(NodeState node, std::vector<std::uint8_t>& used, int depth, TreeModel& tree) {
  const int id = tree.size();
  tree.nodes.emplace_back();
  tree.nodes[id].label = node.hist.majority();
  tree.nodes[id].class_units = node.hist.units;
  tree.nodes[id].units = node.units;
  tree.nodes[id].depth = depth;

  if (stop(node)) return id;

  depth_ = depth;
  const auto chosen = select_test(node, used);
  if (!chosen) return id;  // inseparable node becomes a leaf

  const int t = *chosen;
  auto children = children_of(*inst_, node, t);
  node.members.clear();
  node.members.shrink_to_fit();

  tree.nodes[id].test = t;
  tree.nodes[id].children.assign(inst_->tests[t].arity, -1);
  used[t] = 1;
  for (std::size_t v = 0; v < children.size(); ++v) {
    if (children[v].card() == 0) continue;
    const int child_id = grow(std::move(children[v]), used, depth + 1, tree);
    tree.nodes[id].children[v] = child_id;
  }
  used[t] = 0;
  return id;
}

TreeModel Inducer::induce() {
  stats_ = InductionStats{};
  depth_ = 0;

  TreeModel tree;
  tree.classes = inst_->classes;
  tree.denom = inst_->denom;
  tree.test_names.reserve(inst_->tests.size());
  for (const auto& t : inst_->tests) tree.test_names.push_back(t.name);

  std::vector<std::uint8_t> used(inst_->num_tests(), 0);
  grow(NodeState::root(*inst_), used, 0, tree);
  return tree;
}

TreeModel induce(const Instance& inst, const GreedyConfig& cfg) {
  return Inducer(inst, cfg).induce();
}

}  // namespace treecost
