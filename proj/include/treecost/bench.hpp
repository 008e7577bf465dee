#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "treecost/dataset.hpp"
#include "treecost/metrics.hpp"
#include "treecost/pruner.hpp"

namespace treecost {

/// Algorithm tag as spelled on the command line and in result rows:
/// asr | ip | bal | c45 | cart | c-c45 | c-cart | e-c45 | e-cart,
/// optionally prefixed with "p-" for post-pruning. "enhanced" is an alias
/// for e-c45.
struct TagSpec {
  std::string text;
  Algo algo = Algo::c45;
  ImpurityKind impurity = ImpurityKind::entropy;
  bool prune = false;
};

TagSpec parse_tag(const std::string& s);

struct TrainResult {
  TreeModel model;
  std::optional<double> lambda_used;
};

/// Induce (tuning lambda on the validation split for enhanced tags unless
/// `fixed_lambda` >= 0), then optionally prune.
TrainResult train_tag(const Instance& inst, const TagSpec& tag, double fixed_lambda = -1.0);

struct BenchPlan {
  struct Dataset {
    std::string name;
    std::string csv;
    std::string label;
    int bins = 5;
  };
  std::vector<Dataset> datasets;
  std::vector<std::string> tags;
  std::vector<CostMode> modes = {CostMode::unit};
  int seeds = 5;
  double theta = 0.005;
  double fixed_lambda = -1.0;  // < 0 means tuned
  std::string out_dir = "bench-out";
};

BenchPlan load_plan(const std::string& path);

struct BenchOutcome {
  int cells_run = 0;
  int cells_skipped = 0;
  int failures = 0;
};

/// Executes every (dataset, tag, mode, seed) cell exactly once. Cells
/// already present in <out>/results.csv are skipped, so deleting a row
/// recomputes just that cell. Cells run on a worker pool sized by the
/// TREECOST_WORKERS environment variable; results are merged
/// deterministically at the end.
BenchOutcome run_bench(const BenchPlan& plan, std::ostream& log);

}  // namespace treecost
