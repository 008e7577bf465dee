#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treecost/instance.hpp"

namespace treecost {

/// Impurity family: a weighted sum over per-class scores of the class
/// fraction. Entropy uses log base 2 throughout.
enum class ImpurityKind { entropy, gini };

const char* to_string(ImpurityKind kind);
ImpurityKind impurity_from_string(const std::string& s);

/// Per-class mass of a node, in probability units.
struct ClassHistogram {
  std::vector<Units> units;
  Units total = 0;

  explicit ClassHistogram(int num_classes = 0) : units(num_classes, 0) {}

  void add(int cls, Units u) {
    units[cls] += u;
    total += u;
  }
  void clear() {
    std::fill(units.begin(), units.end(), 0);
    total = 0;
  }

  bool pure() const;
  /// Majority class; ties break to the smallest class index.
  int majority() const;
};

/// Number of heterogeneous (distinct-class) pairs, counted over raw
/// multiplicities: (U^2 - sum_c U_c^2) / 2.
std::int64_t het_pairs(const ClassHistogram& h);

/// Impurity of a node. Throws on zero total mass.
double impurity(const ClassHistogram& h, ImpurityKind kind);

/// Mass-weighted impurity of the children of a split. Empty children
/// contribute nothing. Throws when the children exceed the parent mass.
double conditional_impurity(const ClassHistogram& parent,
                            std::span<const ClassHistogram> children,
                            ImpurityKind kind);

/// impurity(parent) - conditional_impurity(children). Non-negative by
/// concavity; float noise below zero is clamped to 0.
double impurity_reduction(const ClassHistogram& parent,
                          std::span<const ClassHistogram> children,
                          ImpurityKind kind);

}  // namespace treecost
