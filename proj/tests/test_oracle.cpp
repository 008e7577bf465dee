#include <doctest.h>

#include <algorithm>
#include <random>

#include "treecost/metrics.hpp"
#include "treecost/oracle.hpp"

using namespace treecost;

namespace {

Instance separable_pair() {
  Instance inst;
  inst.classes = {"A", "B"};
  inst.tests = {{"t0", 2, 1}};
  inst.objects = {{{0}, 0, 1}, {{1}, 1, 1}};
  inst.denom = 2;
  inst.validate();
  return inst;
}

Instance permuted_tests(const Instance& inst, const std::vector<int>& perm) {
  Instance out = inst;
  for (std::size_t t = 0; t < perm.size(); ++t) out.tests[t] = inst.tests[perm[t]];
  for (std::size_t i = 0; i < inst.objects.size(); ++i)
    for (std::size_t t = 0; t < perm.size(); ++t)
      out.objects[i].outcomes[t] = inst.objects[i].outcomes[perm[t]];
  return out;
}

}  // namespace

TEST_CASE("optimal tree on hand-checkable instances") {
  CHECK(optimal_tree(separable_pair()).cost == doctest::Approx(1.0));

  Instance single;
  single.classes = {"A"};
  single.tests = {{"t0", 2, 1}};
  single.objects = {{{0}, 0, 1}, {{1}, 0, 1}};
  single.denom = 2;
  CHECK(optimal_tree(single).cost == doctest::Approx(0.0));
  CHECK(optimal_tree(single).tree.size() == 1);

  // x0 (p = 1/2) needs both tests, the rest are identified after one
  Instance chain;
  chain.classes = {"A", "B"};
  chain.tests = {{"t0", 2, 1}, {"t1", 2, 1}};
  chain.objects = {{{0, 0}, 0, 2}, {{0, 1}, 1, 1}, {{1, 0}, 1, 1}};
  chain.denom = 4;
  chain.validate();
  const OptimalResult opt = optimal_tree(chain);
  CHECK(opt.cost == doctest::Approx(optimal_cost_enumerated(chain)));
  CHECK(opt.cost == doctest::Approx(expected_cost(opt.tree, chain)));
}

TEST_CASE("caps are enforced") {
  TinyOptions opt;
  const Instance inst = random_tiny(1, opt);
  Instance too_big = inst;
  for (int i = 0; too_big.num_tests() <= kTinyMaxTests; ++i) {
    too_big.tests.push_back({"extra" + std::to_string(i), 2, 1});
    for (auto& o : too_big.objects) o.outcomes.push_back(0);
  }
  CHECK_THROWS(optimal_tree(too_big));
}

TEST_CASE("memoized and enumerated optima agree exactly") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    TinyOptions opt;
    opt.max_objects = 6;
    opt.max_tests = 5;
    opt.uniform_units = false;
    const Instance inst = random_tiny(seed, opt);
    CHECK(optimal_tree(inst).cost == optimal_cost_enumerated(inst));
  }
}

TEST_CASE("the optimal tree value is achieved by its own tree") {
  for (std::uint64_t seed = 40; seed < 70; ++seed) {
    TinyOptions opt;
    opt.uniform_units = false;
    const Instance inst = random_tiny(seed, opt);
    const OptimalResult opt_result = optimal_tree(inst);
    CHECK(opt_result.cost ==
          doctest::Approx(expected_cost(opt_result.tree, inst)).epsilon(1e-12));
  }
}

TEST_CASE("optimum is invariant to test permutation and class relabeling") {
  for (std::uint64_t seed = 80; seed < 100; ++seed) {
    const Instance inst = random_tiny(seed);
    std::vector<int> perm(inst.num_tests());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng() % i]);
    CHECK(optimal_tree(inst).cost ==
          doctest::Approx(optimal_tree(permuted_tests(inst, perm)).cost).epsilon(1e-12));

    Instance relabeled = inst;
    std::reverse(relabeled.classes.begin(), relabeled.classes.end());
    for (auto& o : relabeled.objects) o.label = inst.num_classes() - 1 - o.label;
    CHECK(optimal_tree(inst).cost ==
          doctest::Approx(optimal_tree(relabeled).cost).epsilon(1e-12));
  }
}

TEST_CASE("no inducer beats the exact optimum") {
  for (std::uint64_t seed = 110; seed < 140; ++seed) {
    TinyOptions opt;
    opt.uniform_units = false;
    const Instance inst = random_tiny(seed, opt);
    const double best = optimal_tree(inst).cost;
    for (Algo algo : {Algo::enhanced, Algo::asr, Algo::ip, Algo::bal, Algo::c45, Algo::cart}) {
      const TreeModel tree = induce(inst, {algo, 1.0, ImpurityKind::entropy});
      CHECK(expected_cost(tree, inst) >= best - 1e-9);
    }
  }
}

TEST_CASE("approx ratio sweep stays within the guarantee") {
  const auto rows = approx_ratio_sweep(11, 30, {0.0, 1.0, 1e6});
  CHECK(rows.size() == 90);
  for (const auto& row : rows) {
    CHECK(row.ratio >= 1.0 - 1e-9);
    CHECK(row.ratio <= row.bound);
  }
}

TEST_CASE("lambda-zero sweep entries match a direct asr run") {
  std::mt19937_64 rng(17);
  const auto rows = approx_ratio_sweep(17, 10, {0.0});
  for (const auto& row : rows) {
    const Instance inst = random_tiny(row.seed);
    const double asr_cost =
        expected_cost(induce(inst, {Algo::asr, 0.0, ImpurityKind::entropy}), inst);
    CHECK(row.greedy_cost == doctest::Approx(asr_cost).epsilon(1e-12));
  }
}

TEST_CASE("submodularity audit passes on random instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    TinyOptions opt;
    opt.max_objects = 6;
    opt.max_tests = 6;
    opt.uniform_units = false;
    const AuditReport report = submodularity_audit(random_tiny(seed, opt));
    CHECK(report.ok);
    if (!report.ok) MESSAGE(report.counterexample);
  }
}

TEST_CASE("audit catches a corrupted function") {
  const Instance inst = random_tiny(3);
  const SetFunction good = coverage_set_function(inst, CoverageFn::f_or);
  const SetFunction bad = [&](int obj, unsigned mask) { return -good(obj, mask); };
  const AuditReport report = audit_set_function(inst, bad, "corrupted");
  CHECK(!report.ok);
  CHECK(!report.counterexample.empty());
}

TEST_CASE("audit passes with theta equal to one object mass") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst = random_tiny(seed);
    inst.theta_units = 1;  // exactly the uniform object mass
    inst.theta = inst.prob(1);
    CHECK(submodularity_audit(inst).ok);
  }
}

TEST_CASE("minimum positive increment respects the bound") {
  // uniform four-object two-class instance: bound is delta / 6
  Instance inst;
  inst.classes = {"A", "B"};
  inst.tests = {{"t0", 2, 1}, {"t1", 2, 1}};
  inst.objects = {{{0, 0}, 0, 1}, {{0, 1}, 0, 1}, {{1, 0}, 1, 1}, {{1, 1}, 1, 1}};
  inst.denom = 4;
  inst.validate();
  const IncrementReport rep = min_increment_check(inst);
  CHECK(rep.any_positive);
  CHECK(rep.bound == doctest::Approx(0.25 / 6.0));
  CHECK(rep.observed_min >= rep.bound - 1e-12);
  CHECK(rep.ok);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const IncrementReport r = min_increment_check(random_tiny(seed));
    CHECK(r.ok);
  }

  // single class: every heterogeneity gain is saturated from the start
  Instance single;
  single.classes = {"A"};
  single.tests = {{"t0", 2, 1}};
  single.objects = {{{0}, 0, 1}, {{1}, 0, 1}};
  single.denom = 2;
  const IncrementReport r = min_increment_check(single);
  CHECK(!r.any_positive);
  CHECK(r.ok);
}
