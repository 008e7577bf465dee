#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "treecost/bench.hpp"
#include "treecost/io.hpp"
#include "treecost/oracle.hpp"

namespace {

using namespace treecost;

// exit codes: 0 success, 1 property/acceptance failure, 2 usage/data error

int cmd_prep(const std::string& csv, const std::string& label, const std::string& name,
             int bins, double theta, const std::string& costs, std::uint64_t seed,
             const std::vector<std::string>& categorical, const std::string& out) {
  const RawTable table = load_csv(csv, label, categorical);
  if (table.dropped > 0)
    std::cerr << "dropped " << table.dropped << " rows with missing values\n";

  PrepConfig cfg;
  cfg.name = name.empty() ? std::filesystem::path(csv).stem().string() : name;
  cfg.bins = bins;
  cfg.theta = theta;
  cfg.costs = cost_mode_from_string(costs);
  cfg.seed = seed;

  const Instance inst = preprocess(table, cfg);
  save_instance(inst, out);

  std::cout << "n=" << table.rows << " m=" << inst.num_tests() << " l=" << inst.num_classes()
            << "\n"
            << "train=" << inst.denom << " (coalesced to " << inst.num_objects()
            << " objects) val=" << inst.val_rows.size() << " test=" << inst.test_rows.size()
            << " theta_units=" << inst.theta_units << "\n"
            << "wrote " << out << "\n";
  return 0;
}

int cmd_train(const std::string& instance_path, const std::string& tag_text, double lambda,
              bool tune, bool prune, const std::string& out, const std::string& report_path) {
  const Instance inst = load_instance(instance_path);
  TagSpec tag = parse_tag(prune && tag_text.rfind("p-", 0) != 0 ? "p-" + tag_text : tag_text);

  const auto t0 = std::chrono::steady_clock::now();
  const double fixed = (tag.algo == Algo::enhanced && !tune) ? lambda : -1.0;
  const TrainResult trained = train_tag(inst, tag, fixed);
  RunReport report = evaluate(trained.model, inst, EvalSplit::test);
  report.tag = tag.text;
  report.seed = 0;
  report.lambda_used = trained.lambda_used;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (!out.empty()) save_model(trained.model, out);
  if (!report_path.empty()) append_report(report_path, report);

  std::cout << kResultsHeader << "\n" << report_csv_row(report) << "\n";
  if (report.lambda_used) std::cout << "lambda=" << *report.lambda_used << "\n";
  return 0;
}

int cmd_bench(const std::string& plan_path) {
  const BenchPlan plan = load_plan(plan_path);
  const BenchOutcome outcome = run_bench(plan, std::cout);
  std::cout << "cells run=" << outcome.cells_run << " skipped=" << outcome.cells_skipped
            << " failed=" << outcome.failures << "\n";
  return outcome.failures == 0 ? 0 : 1;
}

int cmd_export(const std::string& model_path, const std::string& format,
               const std::string& out) {
  const TreeModel model = load_model(model_path);
  std::string content;
  if (format == "dot") {
    content = to_dot(model);
  } else if (format == "json") {
    content = model_to_json(model).dump(1) + "\n";
  } else {
    std::cerr << "unknown format: " << format << "\n";
    return 2;
  }
  if (out.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(out, content);
  }
  return 0;
}

int cmd_audit(std::uint64_t seed, int count, const std::string& out_dir, bool self_test) {
  namespace fs = std::filesystem;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  bool ok = true;

  // submodularity + monotonicity on small random instances
  std::mt19937_64 rng(seed);
  TinyOptions audit_opt;
  audit_opt.max_objects = 6;
  audit_opt.max_tests = 6;
  audit_opt.uniform_units = false;
  const int audit_count = std::min(count, 100);
  for (int i = 0; i < audit_count; ++i) {
    const Instance tiny = random_tiny(rng(), audit_opt);
    AuditReport report;
    if (self_test) {
      // deliberately corrupted disjunction: the audit must catch it
      SetFunction good = coverage_set_function(tiny, CoverageFn::f_or);
      SetFunction bad = [good](int obj, unsigned mask) { return -good(obj, mask); };
      report = audit_set_function(tiny, bad, "corrupted f_or");
    } else {
      report = submodularity_audit(tiny);
    }
    if (!report.ok) {
      std::cerr << "audit violation on " << tiny.name << ": " << report.counterexample << "\n";
      ok = false;
      break;
    }
  }
  if (self_test) {
    if (!ok) {
      std::cout << "self-test: corruption detected as expected\n";
      return 1;  // the documented exit for the corrupted build
    }
    std::cerr << "self-test failed to detect the corruption\n";
    return 1;
  }

  // minimum positive increment vs the delta / C(n,2) bound
  TinyOptions inc_opt;
  inc_opt.uniform_units = true;
  for (int i = 0; i < std::min(count, 50); ++i) {
    const IncrementReport inc = min_increment_check(random_tiny(rng(), inc_opt));
    if (!inc.ok) {
      std::cerr << "min-increment violation: observed " << inc.observed_min << " < bound "
                << inc.bound << "\n";
      ok = false;
    }
  }

  // greedy vs exact optimum
  const std::vector<double> lambdas{0.0, 1.0, 1e6};
  const auto rows = approx_ratio_sweep(seed, count, lambdas);
  double max_ratio = 0.0;
  for (const auto& row : rows) {
    max_ratio = std::max(max_ratio, row.ratio);
    if (row.ratio < 1.0 - 1e-9 || row.ratio > row.bound) {
      std::cerr << "ratio violation: seed " << row.seed << " lambda " << row.lambda
                << " ratio " << row.ratio << " bound " << row.bound << "\n";
      ok = false;
    }
  }
  if (!out_dir.empty()) {
    std::ostringstream os;
    os << "seed,n,m,lambda,greedy_cost,optimal_cost,ratio,bound\n";
    for (const auto& row : rows)
      os << row.seed << ',' << row.n << ',' << row.m << ',' << row.lambda << ','
         << row.greedy_cost << ',' << row.optimal_cost << ',' << row.ratio << ','
         << row.bound << "\n";
    write_file_atomic(out_dir + "/ratio_sweep.csv", os.str());
  }
  std::cout << "audited " << audit_count << " instances, swept " << rows.size()
            << " greedy/optimal ratios (max " << max_ratio << ")\n";
  std::cout << (ok ? "audit: ok" : "audit: FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-aware decision-tree induction"};
  app.require_subcommand(1);

  auto* prep = app.add_subcommand("prep", "preprocess a CSV into an instance file");
  std::string prep_csv, prep_label, prep_name, prep_costs = "unit", prep_out = "instance.json";
  std::vector<std::string> prep_categorical;
  int prep_bins = 5;
  double prep_theta = 0.005;
  std::uint64_t prep_seed = 0;
  prep->add_option("csv", prep_csv, "input CSV with a header row")->required();
  prep->add_option("--label", prep_label, "label column name")->required();
  prep->add_option("--name", prep_name, "dataset name (default: file stem)");
  prep->add_option("--bins", prep_bins, "bins per numeric column");
  prep->add_option("--theta", prep_theta, "stopping mass threshold");
  prep->add_option("--costs", prep_costs, "unit|random");
  prep->add_option("--seed", prep_seed, "split/cost seed");
  prep->add_option("--categorical", prep_categorical,
                   "columns to treat as categorical instead of auto-detecting")
      ->delimiter(',');
  prep->add_option("--out", prep_out, "output instance file");

  auto* train = app.add_subcommand("train", "induce (and optionally prune) a tree");
  std::string train_instance, train_tag, train_out, train_report;
  double train_lambda = 1.0;
  bool train_tune = false, train_prune = false;
  train->add_option("instance", train_instance, "instance file from prep")->required();
  train->add_option("--tag", train_tag, "algorithm tag")->required();
  train->add_option("--lambda", train_lambda, "fixed lambda for enhanced tags");
  train->add_flag("--tune", train_tune, "tune lambda on the validation split");
  train->add_flag("--prune", train_prune, "apply cost-complexity post-pruning");
  train->add_option("--out", train_out, "output model file");
  train->add_option("--report", train_report, "append the report row to this CSV");

  auto* bench = app.add_subcommand("bench", "run a benchmark plan");
  std::string bench_plan;
  bench->add_option("plan", bench_plan, "plan JSON")->required();

  auto* exp = app.add_subcommand("export", "export a model");
  std::string export_model, export_format = "dot", export_out;
  exp->add_option("model", export_model, "model file")->required();
  exp->add_option("--format", export_format, "dot|json");
  exp->add_option("--out", export_out, "output path (default: stdout)");

  auto* audit = app.add_subcommand("audit", "run the brute-force property audits");
  std::uint64_t audit_seed = 0;
  int audit_count = 200;
  std::string audit_out;
  bool audit_self_test = false;
  audit->add_option("--seed", audit_seed, "generator seed");
  audit->add_option("--count", audit_count, "instances to sweep");
  audit->add_option("--out", audit_out, "directory for sweep CSVs");
  audit->add_flag("--self-test", audit_self_test, "verify the audit catches a corrupted build");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (prep->parsed())
      return cmd_prep(prep_csv, prep_label, prep_name, prep_bins, prep_theta, prep_costs,
                      prep_seed, prep_categorical, prep_out);
    if (train->parsed())
      return cmd_train(train_instance, train_tag, train_lambda, train_tune, train_prune,
                       train_out, train_report);
    if (bench->parsed()) return cmd_bench(bench_plan);
    if (exp->parsed()) return cmd_export(export_model, export_format, export_out);
    if (audit->parsed()) return cmd_audit(audit_seed, audit_count, audit_out, audit_self_test);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
