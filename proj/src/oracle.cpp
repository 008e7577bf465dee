#include "treecost/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "treecost/metrics.hpp"

namespace treecost {

void require_tiny(const Instance& inst) {
  if (inst.num_objects() > kTinyMaxObjects)
    throw std::runtime_error("tiny instance cap exceeded: too many objects");
  if (inst.num_tests() > kTinyMaxTests)
    throw std::runtime_error("tiny instance cap exceeded: too many tests");
  for (const auto& t : inst.tests)
    if (t.arity != 2) throw std::runtime_error("tiny instances use binary tests");
}

Instance random_tiny(std::uint64_t seed, const TinyOptions& opt) {
  std::mt19937_64 rng(seed);
  const auto draw = [&rng](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  Instance inst;
  inst.name = "tiny-" + std::to_string(seed);

  const int n = draw(2, opt.max_objects);
  int m_min = 1;
  while ((1 << m_min) < n) ++m_min;
  const int m = draw(m_min, std::max(m_min, opt.max_tests));

  const int l = draw(1, opt.max_classes);
  for (int c = 0; c < l; ++c) inst.classes.push_back("c" + std::to_string(c));
  for (int t = 0; t < m; ++t)
    inst.tests.push_back({"t" + std::to_string(t), 2, opt.unit_costs ? 1 : draw(1, 10)});

  // distinct outcome vectors keep the instance realizable
  std::set<unsigned> rows;
  while (static_cast<int>(rows.size()) < n)
    rows.insert(static_cast<unsigned>(rng() % (1u << m)));
  for (unsigned bits : rows) {
    ObjectRow o;
    for (int t = 0; t < m; ++t) o.outcomes.push_back((bits >> t) & 1u);
    o.label = draw(0, l - 1);
    o.units = opt.uniform_units ? 1 : draw(1, 3);
    inst.denom += o.units;
    inst.objects.push_back(std::move(o));
  }
  inst.theta_units = draw(0, opt.max_theta_units);
  inst.theta = static_cast<double>(inst.theta_units) / static_cast<double>(inst.denom);
  inst.validate();
  return inst;
}

namespace {

struct MaskStats {
  Units units = 0;
  std::int64_t pairs = 0;
};

class OptimalSolver {
 public:
  explicit OptimalSolver(const Instance& inst) : inst_(&inst) {
    require_tiny(inst);
    const int n = inst.num_objects();
    memo_.assign(std::size_t{1} << n, -1.0);
    choice_.assign(std::size_t{1} << n, -1);
  }

  double solve(unsigned mask) {
    if (memo_[mask] >= 0.0) return memo_[mask];
    const MaskStats st = stats(mask);
    double best = 0.0;
    int best_test = -1;
    if (!(st.pairs == 0 || st.units <= inst_->theta_units)) {
      best = std::numeric_limits<double>::infinity();
      for (int t = 0; t < inst_->num_tests(); ++t) {
        const auto [m0, m1] = split(mask, t);
        if (m0 == 0 || m1 == 0) continue;  // constant test
        const double c = inst_->tests[t].cost * inst_->prob(st.units) + solve(m0) + solve(m1);
        if (c < best) {
          best = c;
          best_test = t;
        }
      }
      if (best_test < 0)
        throw std::runtime_error("inseparable subset in an exact solve (instance not realizable)");
    }
    memo_[mask] = best;
    choice_[mask] = best_test;
    return best;
  }

  TreeModel build_tree() {
    TreeModel tree;
    tree.classes = inst_->classes;
    tree.denom = inst_->denom;
    for (const auto& t : inst_->tests) tree.test_names.push_back(t.name);
    const unsigned full = (1u << inst_->num_objects()) - 1u;
    solve(full);
    emit(full, 0, tree);
    return tree;
  }

 private:
  MaskStats stats(unsigned mask) const {
    ClassHistogram h(inst_->num_classes());
    for (int i = 0; i < inst_->num_objects(); ++i)
      if (mask >> i & 1u) h.add(inst_->objects[i].label, inst_->objects[i].units);
    return {h.total, het_pairs(h)};
  }

  std::pair<unsigned, unsigned> split(unsigned mask, int test) const {
    unsigned m0 = 0, m1 = 0;
    for (int i = 0; i < inst_->num_objects(); ++i) {
      if (!(mask >> i & 1u)) continue;
      (inst_->objects[i].outcomes[test] ? m1 : m0) |= 1u << i;
    }
    return {m0, m1};
  }

  int emit(unsigned mask, int depth, TreeModel& tree) const {
    ClassHistogram h(inst_->num_classes());
    for (int i = 0; i < inst_->num_objects(); ++i)
      if (mask >> i & 1u) h.add(inst_->objects[i].label, inst_->objects[i].units);

    const int id = tree.size();
    tree.nodes.emplace_back();
    tree.nodes[id].label = h.majority();
    tree.nodes[id].class_units = h.units;
    tree.nodes[id].units = h.total;
    tree.nodes[id].depth = depth;

    const int t = choice_[mask];
    if (t < 0) return id;
    const auto [m0, m1] = split(mask, t);
    const int c0 = emit(m0, depth + 1, tree);
    const int c1 = emit(m1, depth + 1, tree);
    tree.nodes[id].test = t;
    tree.nodes[id].children = {c0, c1};
    return id;
  }

  const Instance* inst_;
  std::vector<double> memo_;
  std::vector<int> choice_;
};

double enumerate_opt(const Instance& inst, unsigned mask, unsigned used) {
  ClassHistogram h(inst.num_classes());
  for (int i = 0; i < inst.num_objects(); ++i)
    if (mask >> i & 1u) h.add(inst.objects[i].label, inst.objects[i].units);
  if (het_pairs(h) == 0 || h.total <= inst.theta_units) return 0.0;

  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < inst.num_tests(); ++t) {
    if (used >> t & 1u) continue;
    unsigned m0 = 0, m1 = 0;
    for (int i = 0; i < inst.num_objects(); ++i) {
      if (!(mask >> i & 1u)) continue;
      (inst.objects[i].outcomes[t] ? m1 : m0) |= 1u << i;
    }
    if (m0 == 0 || m1 == 0) continue;
    best = std::min(best, inst.tests[t].cost * inst.prob(h.total) +
                              enumerate_opt(inst, m0, used | 1u << t) +
                              enumerate_opt(inst, m1, used | 1u << t));
  }
  return best;
}

}  // namespace

OptimalResult optimal_tree(const Instance& inst) {
  OptimalSolver solver(inst);
  OptimalResult result;
  result.tree = solver.build_tree();
  result.cost = solver.solve((1u << inst.num_objects()) - 1u);
  return result;
}

double optimal_cost_enumerated(const Instance& inst) {
  require_tiny(inst);
  return enumerate_opt(inst, (1u << inst.num_objects()) - 1u, 0u);
}

double approx_bound(const Instance& inst, double lambda) {
  const double n = inst.num_objects();
  const double delta = inst.min_prob();
  const double gamma = std::log2(1.0 / delta);  // entropy bound; Gini would be 1
  const double pairs = n * (n - 1) / 2.0;
  const double direct = 300.0 * (1.0 + std::log2(1.0 / delta) + std::log2(n) + lambda * gamma);
  double stretched = direct;
  if (pairs > 0) {
    const double eps = delta / pairs;
    stretched = 20.0 * 15.0 * (1.0 + std::log(1.0 / eps) + std::log2(n) + lambda * gamma);
  }
  return std::max(direct, stretched);
}

std::vector<SweepRow> approx_ratio_sweep(std::uint64_t seed, int count,
                                         const std::vector<double>& lambdas) {
  std::vector<SweepRow> rows;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const std::uint64_t inst_seed = rng();
    const Instance inst = random_tiny(inst_seed);
    const OptimalResult opt = optimal_tree(inst);
    for (double lambda : lambdas) {
      GreedyConfig cfg;
      cfg.algo = Algo::enhanced;
      cfg.lambda = lambda;
      const double greedy = expected_cost(induce(inst, cfg), inst);

      SweepRow row;
      row.seed = inst_seed;
      row.n = inst.num_objects();
      row.m = inst.num_tests();
      row.lambda = lambda;
      row.greedy_cost = greedy;
      row.optimal_cost = opt.cost;
      row.ratio = opt.cost > 0.0 ? greedy / opt.cost : 1.0;
      row.bound = approx_bound(inst, lambda);
      rows.push_back(row);
    }
  }
  return rows;
}

NodeState node_on_path(const Instance& inst, int obj, unsigned mask) {
  std::vector<std::int32_t> members;
  const auto& target = inst.objects[obj].outcomes;
  for (int i = 0; i < inst.num_objects(); ++i) {
    bool agree = true;
    for (int t = 0; t < inst.num_tests() && agree; ++t)
      if (mask >> t & 1u) agree = inst.objects[i].outcomes[t] == target[t];
    if (agree) members.push_back(i);
  }
  return NodeState::make(inst, std::move(members));
}

const char* to_string(CoverageFn fn) {
  switch (fn) {
    case CoverageFn::f_prob_raw: return "f_prob_raw";
    case CoverageFn::f_prob: return "f_prob";
    case CoverageFn::f_pairs: return "f_pairs";
    case CoverageFn::f_or: return "f_or";
  }
  return "?";
}

SetFunction coverage_set_function(const Instance& inst, CoverageFn fn) {
  auto cov = std::make_shared<Coverage>(inst);
  const Instance* ip = &inst;
  return [ip, cov, fn](int obj, unsigned mask) {
    const NodeState node = node_on_path(*ip, obj, mask);
    switch (fn) {
      case CoverageFn::f_prob_raw: return cov->f_prob_raw(obj, node);
      case CoverageFn::f_prob: return cov->f_prob(obj, node);
      case CoverageFn::f_pairs: return cov->f_pairs(node);
      case CoverageFn::f_or: return cov->f_or(obj, node);
    }
    return 0.0;
  };
}

AuditReport audit_set_function(const Instance& inst, const SetFunction& fn,
                               const std::string& name, double tol) {
  require_tiny(inst);
  const int n = inst.num_objects();
  const int m = inst.num_tests();
  const unsigned full = 1u << m;

  std::vector<std::vector<double>> value(n, std::vector<double>(full));
  for (int i = 0; i < n; ++i)
    for (unsigned mask = 0; mask < full; ++mask) value[i][mask] = fn(i, mask);

  const auto fail = [&](const char* what, int i, unsigned a, unsigned b, int t) {
    std::ostringstream os;
    os << name << " " << what << ": object " << i << ", S=" << a << ", S'=" << b
       << ", test " << t;
    return AuditReport{false, os.str()};
  };

  for (int i = 0; i < n; ++i) {
    for (unsigned mask = 0; mask < full; ++mask) {
      for (int t = 0; t < m; ++t) {
        if (mask >> t & 1u) continue;
        const unsigned with = mask | 1u << t;
        if (value[i][with] < value[i][mask] - tol)
          return fail("monotonicity violated", i, mask, with, t);
        // diminishing returns against every superset not containing t
        for (unsigned rest = static_cast<unsigned>(~mask) & (full - 1u);;
             rest = (rest - 1) & static_cast<unsigned>(~mask) & (full - 1u)) {
          const unsigned sup = mask | rest;
          if (!(sup >> t & 1u)) {
            const double gain_here = value[i][with] - value[i][mask];
            const double gain_there = value[i][sup | 1u << t] - value[i][sup];
            if (gain_here < gain_there - tol)
              return fail("submodularity violated", i, mask, sup, t);
          }
          if (rest == 0) break;
        }
      }
    }
  }
  return {};
}

AuditReport submodularity_audit(const Instance& inst, double tol) {
  for (CoverageFn fn : {CoverageFn::f_prob_raw, CoverageFn::f_prob,
                        CoverageFn::f_pairs, CoverageFn::f_or}) {
    AuditReport report =
        audit_set_function(inst, coverage_set_function(inst, fn), to_string(fn), tol);
    if (!report.ok) return report;
  }
  return {};
}

IncrementReport min_increment_check(const Instance& inst) {
  require_tiny(inst);
  const int n = inst.num_objects();
  const int m = inst.num_tests();
  const unsigned full = 1u << m;
  const SetFunction f_or = coverage_set_function(inst, CoverageFn::f_or);

  IncrementReport report;
  report.observed_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (unsigned mask = 0; mask < full; ++mask) {
      const double base = f_or(i, mask);
      for (int t = 0; t < m; ++t) {
        if (mask >> t & 1u) continue;
        const double gain = f_or(i, mask | 1u << t) - base;
        if (gain > 1e-12) {
          report.any_positive = true;
          report.observed_min = std::min(report.observed_min, gain);
        }
      }
    }
  }
  report.bound = inst.min_prob() / (n >= 2 ? n * (n - 1) / 2.0 : 1.0);
  report.ok = !report.any_positive || report.observed_min >= report.bound - 1e-12;
  if (!report.any_positive) report.observed_min = 0.0;
  return report;
}

}  // namespace treecost
