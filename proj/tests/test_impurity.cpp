#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "treecost/impurity.hpp"
#include "treecost/oracle.hpp"

using namespace treecost;

namespace {

ClassHistogram hist(std::initializer_list<Units> units) {
  ClassHistogram h(static_cast<int>(units.size()));
  int c = 0;
  for (Units u : units) h.add(c++, u);
  return h;
}

}  // namespace

TEST_CASE("impurity of basic histograms") {
  CHECK(impurity(hist({1, 1}), ImpurityKind::entropy) == doctest::Approx(1.0));
  CHECK(impurity(hist({4, 0}), ImpurityKind::gini) == doctest::Approx(0.0));
  CHECK(impurity(hist({4, 0}), ImpurityKind::entropy) == doctest::Approx(0.0));
  // hand evaluation at fractions 1/4 and 3/4
  CHECK(impurity(hist({1, 3}), ImpurityKind::entropy) == doctest::Approx(0.811278).epsilon(1e-6));
  CHECK(impurity(hist({1, 3}), ImpurityKind::gini) == doctest::Approx(0.375));
  CHECK_THROWS(impurity(ClassHistogram(2), ImpurityKind::gini));
}

TEST_CASE("impurity is symmetric under class permutation") {
  CHECK(impurity(hist({1, 3}), ImpurityKind::entropy) ==
        impurity(hist({3, 1}), ImpurityKind::entropy));
  CHECK(impurity(hist({2, 5, 9}), ImpurityKind::gini) ==
        impurity(hist({9, 2, 5}), ImpurityKind::gini));
}

TEST_CASE("conditional impurity") {
  // splitting a pure node
  std::vector<ClassHistogram> pure_split{hist({2, 0}), hist({2, 0})};
  CHECK(conditional_impurity(hist({4, 0}), pure_split, ImpurityKind::entropy) ==
        doctest::Approx(0.0));

  // children that replicate the parent distribution keep its impurity
  std::vector<ClassHistogram> copy_split{hist({2, 2}), hist({3, 3})};
  CHECK(conditional_impurity(hist({5, 5}), copy_split, ImpurityKind::entropy) ==
        doctest::Approx(1.0));

  // the discriminative two-way split of a 50/50 node into (24,0) and (26,50)
  std::vector<ClassHistogram> disc{hist({24, 0}), hist({26, 50})};
  CHECK(conditional_impurity(hist({50, 50}), disc, ImpurityKind::entropy) ==
        doctest::Approx(0.7043824886).epsilon(1e-9));

  std::vector<ClassHistogram> too_big{hist({50, 50}), hist({1, 0})};
  CHECK_THROWS(conditional_impurity(hist({50, 50}), too_big, ImpurityKind::entropy));
}

TEST_CASE("impurity reduction on the two appendix splits") {
  const auto parent = hist({50, 50});
  std::vector<ClassHistogram> disc{hist({24, 0}), hist({26, 50})};
  std::vector<ClassHistogram> even{hist({25, 25}), hist({25, 25})};
  const double disc_gain = impurity_reduction(parent, disc, ImpurityKind::entropy);
  const double even_gain = impurity_reduction(parent, even, ImpurityKind::entropy);
  CHECK(disc_gain == doctest::Approx(0.2956175114).epsilon(1e-9));
  CHECK(even_gain == doctest::Approx(0.0));
  CHECK(disc_gain > even_gain);

  std::vector<ClassHistogram> of_pure{hist({2, 0}), hist({2, 0})};
  CHECK(impurity_reduction(hist({4, 0}), of_pure, ImpurityKind::gini) == doctest::Approx(0.0));
}

TEST_CASE("non-negativity fuzz over random splits") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 10000; ++iter) {
    const int l = 2 + static_cast<int>(rng() % 3);
    const int k = 2 + static_cast<int>(rng() % 2);
    ClassHistogram parent(l);
    std::vector<ClassHistogram> children(k, ClassHistogram(l));
    for (int c = 0; c < l; ++c) {
      for (int v = 0; v < k; ++v) {
        const Units u = static_cast<Units>(rng() % 5);
        children[v].add(c, u);
        parent.add(c, u);
      }
    }
    if (parent.total == 0) continue;
    for (ImpurityKind kind : {ImpurityKind::entropy, ImpurityKind::gini}) {
      const double raw = impurity(parent, kind) - conditional_impurity(parent, children, kind);
      CHECK(raw >= -1e-12);
    }
  }
}

TEST_CASE("uniform histogram maximizes impurity at fixed mass and class count") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    const int l = 2 + static_cast<int>(rng() % 3);
    const Units per = 1 + static_cast<Units>(rng() % 20);
    ClassHistogram uniform(l);
    ClassHistogram other(l);
    for (int c = 0; c < l; ++c) uniform.add(c, per);
    // random histogram with the same total
    Units left = per * l;
    for (int c = 0; c + 1 < l; ++c) {
      const Units u = static_cast<Units>(rng() % (left + 1));
      other.add(c, u);
      left -= u;
    }
    other.add(l - 1, left);
    if (other.total == 0) continue;
    for (ImpurityKind kind : {ImpurityKind::entropy, ImpurityKind::gini})
      CHECK(impurity(uniform, kind) >= impurity(other, kind) - 1e-12);
  }
}

TEST_CASE("per-class scores over tree nodes stay within the gamma bound") {
  for (std::uint64_t seed = 900; seed < 930; ++seed) {
    TinyOptions opt;
    opt.uniform_units = false;
    const Instance inst = random_tiny(seed, opt);
    const double gamma_entropy = std::log2(1.0 / inst.min_prob());
    const TreeModel tree = induce(inst, {Algo::enhanced, 1.0, ImpurityKind::entropy});
    for (const auto& node : tree.nodes) {
      for (Units u : node.class_units) {
        if (u == 0) continue;
        const double frac = static_cast<double>(u) / static_cast<double>(node.units);
        CHECK(-std::log2(frac) <= gamma_entropy + 1e-12);  // entropy score
        CHECK(1.0 - frac <= 1.0);                          // gini score
      }
    }
  }
}

TEST_CASE("heterogeneous pair count") {
  CHECK(het_pairs(hist({50, 50})) == 2500);
  CHECK(het_pairs(hist({26, 50})) == 1300);
  CHECK(het_pairs(hist({24, 0})) == 0);
  CHECK(het_pairs(hist({2, 2})) == 4);
  CHECK(het_pairs(hist({1, 1, 1})) == 3);
}
