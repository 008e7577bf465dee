#include "treecost/impurity.hpp"

#include <cmath>
#include <stdexcept>

namespace treecost {

const char* to_string(ImpurityKind kind) {
  return kind == ImpurityKind::entropy ? "entropy" : "gini";
}

ImpurityKind impurity_from_string(const std::string& s) {
  if (s == "entropy") return ImpurityKind::entropy;
  if (s == "gini") return ImpurityKind::gini;
  throw std::runtime_error("unknown impurity kind: " + s);
}

bool ClassHistogram::pure() const {
  int nonempty = 0;
  for (Units u : units) nonempty += u > 0;
  return nonempty <= 1;
}

int ClassHistogram::majority() const {
  int best = 0;
  for (std::size_t c = 1; c < units.size(); ++c)
    if (units[c] > units[best]) best = static_cast<int>(c);
  return best;
}

std::int64_t het_pairs(const ClassHistogram& h) {
  std::int64_t sq = 0;
  for (Units u : h.units) sq += u * u;
  return (h.total * h.total - sq) / 2;
}

double impurity(const ClassHistogram& h, ImpurityKind kind) {
  if (h.total <= 0) throw std::runtime_error("impurity of a zero-mass node");
  const double total = static_cast<double>(h.total);
  double acc = 0.0;
  for (Units u : h.units) {
    if (u == 0) continue;  // 0 * log(0) = 0
    const double frac = static_cast<double>(u) / total;
    if (kind == ImpurityKind::entropy)
      acc -= frac * std::log2(frac);
    else
      acc += frac * (1.0 - frac);
  }
  return acc;
}

double conditional_impurity(const ClassHistogram& parent,
                            std::span<const ClassHistogram> children,
                            ImpurityKind kind) {
  if (parent.total <= 0) throw std::runtime_error("conditional impurity of a zero-mass node");
  Units child_sum = 0;
  double acc = 0.0;
  for (const auto& child : children) {
    if (child.total == 0) continue;
    child_sum += child.total;
    acc += (static_cast<double>(child.total) / static_cast<double>(parent.total)) *
           impurity(child, kind);
  }
  if (child_sum > parent.total)
    throw std::runtime_error("children mass exceeds parent mass");
  return acc;
}

double impurity_reduction(const ClassHistogram& parent,
                          std::span<const ClassHistogram> children,
                          ImpurityKind kind) {
  const double raw = impurity(parent, kind) - conditional_impurity(parent, children, kind);
  return raw > 0.0 ? raw : 0.0;
}

}  // namespace treecost
