#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "treecost/coverage.hpp"
#include "treecost/inducer.hpp"

namespace treecost {

inline constexpr int kTinyMaxObjects = 8;
inline constexpr int kTinyMaxTests = 8;

/// Enforces the brute-force caps: n <= 8, m <= 8, binary tests.
void require_tiny(const Instance& inst);

struct TinyOptions {
  int max_objects = kTinyMaxObjects;
  int max_tests = kTinyMaxTests;
  int max_classes = 3;
  int max_theta_units = 2;
  bool uniform_units = true;   // multiplicity 1 per object
  bool unit_costs = false;
};

/// Seeded random realizable instance within the caps.
Instance random_tiny(std::uint64_t seed, const TinyOptions& opt = {});

struct OptimalResult {
  double cost = 0.0;
  TreeModel tree;
};

/// Exact minimum expected cost over all feasible trees, by memoized
/// recursion on the object-subset bitmask. For binary tests the used-test
/// set does not affect the optimum of a fixed subset (a test constant on
/// the subset is never useful), so the subset alone keys the memo; see
/// optimal_cost_enumerated for the full-key cross-check.
OptimalResult optimal_tree(const Instance& inst);

/// Independent non-memoized enumeration with an explicit used-test set.
double optimal_cost_enumerated(const Instance& inst);

struct SweepRow {
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  double lambda = 0.0;
  double greedy_cost = 0.0;
  double optimal_cost = 0.0;
  double ratio = 1.0;
  double bound = 0.0;
};

/// greedy/optimal expected-cost ratios on `count` random tiny instances,
/// one row per (instance, lambda).
std::vector<SweepRow> approx_ratio_sweep(std::uint64_t seed, int count,
                                         const std::vector<double>& lambdas);

/// Looser of the two guarantee constants:
/// 300 (1 + log2(1/delta) + log2 n + lambda*gamma) and 20 F with
/// F = 15 (1 + ln(1/eps) + log2 n + lambda*gamma), eps = delta / C(n,2);
/// gamma = log2(1/delta) for entropy.
double approx_bound(const Instance& inst, double lambda);

/// Objects that agree with `obj` on every test in `mask`.
NodeState node_on_path(const Instance& inst, int obj, unsigned mask);

using SetFunction = std::function<double(int obj, unsigned mask)>;

enum class CoverageFn { f_prob_raw, f_prob, f_pairs, f_or };
const char* to_string(CoverageFn fn);
SetFunction coverage_set_function(const Instance& inst, CoverageFn fn);

struct AuditReport {
  bool ok = true;
  std::string counterexample;
};

/// Exhaustive monotonicity and diminishing-returns check of one
/// per-object set function over all test subsets.
AuditReport audit_set_function(const Instance& inst, const SetFunction& fn,
                               const std::string& name, double tol = 1e-12);

/// Audits f^P, truncated f^P, f^H and f^OR.
AuditReport submodularity_audit(const Instance& inst, double tol = 1e-12);

struct IncrementReport {
  bool any_positive = false;
  double observed_min = 0.0;
  double bound = 0.0;   // delta / C(n, 2); valid under uniform multiplicities
  bool ok = true;
};

/// Enumerates every positive marginal gain of f^OR and compares the
/// minimum against the delta / C(n,2) lower bound.
IncrementReport min_increment_check(const Instance& inst);

}  // namespace treecost
