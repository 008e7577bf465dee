#include "treecost/instance.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace treecost {

Units Instance::min_units() const {
  Units m = denom;
  for (const auto& o : objects) m = std::min(m, o.units);
  return m;
}

double Instance::min_prob() const { return prob(min_units()); }

void Instance::validate() const {
  if (objects.empty()) throw std::runtime_error("instance has no objects");
  if (classes.empty()) throw std::runtime_error("instance has no classes");
  if (tests.empty()) throw std::runtime_error("instance has no tests");
  if (theta_units < 0) throw std::runtime_error("negative theta_units");

  for (const auto& t : tests) {
    if (t.cost < 1) throw std::runtime_error("test cost must be a positive integer: " + t.name);
    if (t.arity < 1) throw std::runtime_error("test arity must be >= 1: " + t.name);
  }

  Units sum = 0;
  for (const auto& o : objects) {
    if (o.units <= 0) throw std::runtime_error("object multiplicity must be positive");
    if (o.label < 0 || o.label >= num_classes()) throw std::runtime_error("object label out of range");
    if (static_cast<int>(o.outcomes.size()) != num_tests())
      throw std::runtime_error("object outcome vector has wrong length");
    for (int t = 0; t < num_tests(); ++t)
      if (o.outcomes[t] >= tests[t].arity)
        throw std::runtime_error("outcome exceeds arity of test " + tests[t].name);
    sum += o.units;
  }
  // Sum p(x) = 1 holds exactly in the units representation.
  if (sum != denom) throw std::runtime_error("object units do not sum to the denominator");
}

bool Instance::realizable() const {
  std::unordered_set<std::string> seen;
  seen.reserve(objects.size());
  for (const auto& o : objects) {
    std::string key(o.outcomes.begin(), o.outcomes.end());
    if (!seen.insert(std::move(key)).second) return false;
  }
  return true;
}

}  // namespace treecost
