#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace treecost {

/// Probability mass expressed as an integer multiple of 1/denom.
using Units = std::int64_t;

struct TestDef {
  std::string name;
  int arity = 2;
  int cost = 1;
};

/// A coalesced training object: outcome per test, class label, multiplicity.
struct ObjectRow {
  std::vector<std::uint8_t> outcomes;
  int label = 0;
  Units units = 1;
};

/// A held-out (validation/test) row. Never coalesced, weight 1.
struct LabeledRow {
  std::vector<std::uint8_t> outcomes;
  int label = 0;
};

/// Full problem input: tests with costs, coalesced training objects with
/// integer multiplicities over a common denominator, the stopping
/// threshold, and the held-out splits.
///
/// Keeping probabilities as integer units makes threshold and saturation
/// comparisons exact: p(N) <= theta iff units(N) <= theta_units.
struct Instance {
  std::string name;
  double theta = 0.0;      // requested threshold, for metadata
  Units theta_units = 0;   // a node stops when its units are <= this
  Units denom = 0;         // total training units; p(x) = units(x)/denom
  std::vector<std::string> classes;
  std::vector<TestDef> tests;
  std::vector<ObjectRow> objects;
  std::vector<LabeledRow> val_rows;
  std::vector<LabeledRow> test_rows;

  int num_tests() const { return static_cast<int>(tests.size()); }
  int num_classes() const { return static_cast<int>(classes.size()); }
  int num_objects() const { return static_cast<int>(objects.size()); }

  double prob(Units u) const { return static_cast<double>(u) / static_cast<double>(denom); }

  /// Smallest object multiplicity (delta * denom).
  Units min_units() const;
  /// delta = min_x p(x).
  double min_prob() const;

  /// Throws std::runtime_error when a structural invariant is broken:
  /// unit sum != denom, empty classes/objects, bad labels or outcomes,
  /// non-positive costs or multiplicities.
  void validate() const;

  /// True when no two objects share all test outcomes. Guaranteed by the
  /// preprocessing pipeline; hand-built instances may legitimately violate
  /// it (the inducer then falls back to inseparable leaves).
  bool realizable() const;
};

}  // namespace treecost
