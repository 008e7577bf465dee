#include "treecost/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "treecost/io.hpp"

namespace treecost {

TagSpec parse_tag(const std::string& s) {
  TagSpec spec;
  std::string rest = s;
  if (rest.rfind("p-", 0) == 0) {
    spec.prune = true;
    rest = rest.substr(2);
  }
  if (rest == "enhanced") rest = "e-c45";
  spec.text = (spec.prune ? "p-" : "") + rest;

  if (rest == "e-c45") {
    spec.algo = Algo::enhanced;
    spec.impurity = ImpurityKind::entropy;
  } else if (rest == "e-cart") {
    spec.algo = Algo::enhanced;
    spec.impurity = ImpurityKind::gini;
  } else {
    spec.algo = algo_from_string(rest);
    spec.impurity = (spec.algo == Algo::cart || spec.algo == Algo::c_cart)
                        ? ImpurityKind::gini
                        : ImpurityKind::entropy;
  }
  return spec;
}

TrainResult train_tag(const Instance& inst, const TagSpec& tag, double fixed_lambda) {
  TrainResult result;
  GreedyConfig cfg;
  cfg.algo = tag.algo;
  cfg.impurity = tag.impurity;

  if (tag.algo == Algo::enhanced && fixed_lambda < 0.0) {
    LambdaChoice tuned = tune_lambda(inst, cfg);
    result.model = std::move(tuned.model);
    result.lambda_used = tuned.lambda;
  } else {
    if (tag.algo == Algo::enhanced) {
      cfg.lambda = fixed_lambda;
      result.lambda_used = fixed_lambda;
    }
    result.model = induce(inst, cfg);
  }

  if (tag.prune) {
    const PruneFamily family = weakest_link_sequence(result.model, tag.impurity);
    result.model = select_alpha(family, inst);
  }
  return result;
}

BenchPlan load_plan(const std::string& path) {
  const auto j = nlohmann::json::parse(read_file(path));
  BenchPlan plan;
  for (const auto& d : j.at("datasets")) {
    BenchPlan::Dataset ds;
    ds.name = d.at("name").get<std::string>();
    ds.csv = d.at("csv").get<std::string>();
    ds.label = d.at("label").get<std::string>();
    ds.bins = d.value("bins", 5);
    plan.datasets.push_back(std::move(ds));
  }
  plan.tags = j.at("tags").get<std::vector<std::string>>();
  for (const auto& tag : plan.tags) parse_tag(tag);  // validate early
  plan.modes.clear();
  for (const auto& m : j.value("cost_modes", std::vector<std::string>{"unit"}))
    plan.modes.push_back(cost_mode_from_string(m));
  plan.seeds = j.value("seeds", 5);
  plan.theta = j.value("theta", 0.005);
  if (j.contains("lambda") && j.at("lambda").is_number())
    plan.fixed_lambda = j.at("lambda").get<double>();
  plan.out_dir = j.value("out", std::string("bench-out"));
  return plan;
}

namespace {

struct Cell {
  int dataset = 0;
  std::string tag;
  CostMode mode = CostMode::unit;
  std::uint64_t seed = 0;
};

std::string cell_key(const std::string& dataset, const std::string& tag,
                     const std::string& mode, std::uint64_t seed) {
  return dataset + "|" + tag + "|" + mode + "|" + std::to_string(seed);
}

int worker_count() {
  if (const char* env = std::getenv("TREECOST_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 2;
}

}  // namespace

namespace {

nlohmann::json plan_to_json(const BenchPlan& plan) {
  nlohmann::json j;
  j["datasets"] = nlohmann::json::array();
  for (const auto& ds : plan.datasets)
    j["datasets"].push_back(
        {{"name", ds.name}, {"csv", ds.csv}, {"label", ds.label}, {"bins", ds.bins}});
  j["tags"] = plan.tags;
  std::vector<std::string> modes;
  for (CostMode mode : plan.modes) modes.emplace_back(to_string(mode));
  j["cost_modes"] = modes;
  j["seeds"] = plan.seeds;
  j["theta"] = plan.theta;
  if (plan.fixed_lambda >= 0.0)
    j["lambda"] = plan.fixed_lambda;
  else
    j["lambda"] = "tuned";
  j["out"] = plan.out_dir;
  return j;
}

}  // namespace

BenchOutcome run_bench(const BenchPlan& plan, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(plan.out_dir);
  fs::create_directories(plan.out_dir + "/models");
  // the executed plan travels with its results
  write_file_atomic(plan.out_dir + "/plan.json", plan_to_json(plan).dump(1) + "\n");
  const std::string results_path = plan.out_dir + "/results.csv";

  std::set<std::string> done;
  for (const auto& r : read_reports(results_path))
    done.insert(cell_key(r.dataset, r.tag, r.cost_mode, r.seed));

  BenchOutcome outcome;
  std::vector<Cell> todo;
  for (int d = 0; d < static_cast<int>(plan.datasets.size()); ++d)
    for (const auto& tag : plan.tags)
      for (CostMode mode : plan.modes)
        for (int seed = 0; seed < plan.seeds; ++seed) {
          if (done.count(cell_key(plan.datasets[d].name, parse_tag(tag).text,
                                  to_string(mode), seed))) {
            ++outcome.cells_skipped;
            continue;
          }
          todo.push_back({d, tag, mode, static_cast<std::uint64_t>(seed)});
        }

  std::mutex io_mutex;          // results file + log
  std::mutex cache_mutex;       // raw tables and instances
  std::map<int, RawTable> tables;
  std::map<std::string, Instance> instances;

  const auto get_instance = [&](const Cell& cell) -> const Instance& {
    std::lock_guard lock(cache_mutex);
    const auto& ds = plan.datasets[cell.dataset];
    const std::string key =
        ds.name + "|" + to_string(cell.mode) + "|" + std::to_string(cell.seed);
    auto it = instances.find(key);
    if (it == instances.end()) {
      if (!tables.count(cell.dataset)) tables[cell.dataset] = load_csv(ds.csv, ds.label);
      PrepConfig cfg;
      cfg.name = ds.name;
      cfg.bins = ds.bins;
      cfg.theta = plan.theta;
      cfg.costs = cell.mode;
      cfg.seed = cell.seed;
      it = instances.emplace(key, preprocess(tables[cell.dataset], cfg)).first;
    }
    return it->second;
  };

  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  std::atomic<int> ran{0};

  const auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const Cell& cell = todo[i];
      const TagSpec tag = parse_tag(cell.tag);
      const auto& ds = plan.datasets[cell.dataset];
      try {
        const Instance& inst = get_instance(cell);
        const auto t0 = std::chrono::steady_clock::now();
        const TrainResult trained = train_tag(inst, tag, plan.fixed_lambda);
        RunReport report = evaluate(trained.model, inst, EvalSplit::test);
        report.tag = tag.text;
        report.cost_mode = to_string(cell.mode);
        report.seed = cell.seed;
        report.lambda_used = trained.lambda_used;
        report.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();

        const std::string model_path = plan.out_dir + "/models/" + ds.name + "-" +
                                       tag.text + "-" + to_string(cell.mode) + "-" +
                                       std::to_string(cell.seed) + ".json";
        save_model(trained.model, model_path);

        std::lock_guard lock(io_mutex);
        append_report(results_path, report);
        log << report_csv_row(report) << "\n";
        ++ran;
      } catch (const std::exception& e) {
        std::lock_guard lock(io_mutex);
        log << "FAILED " << ds.name << " " << tag.text << " " << to_string(cell.mode)
            << " seed " << cell.seed << ": " << e.what() << "\n";
        ++failures;
      }
    }
  };

  const int workers = static_cast<int>(
      std::min<std::size_t>(worker_count(), std::max<std::size_t>(todo.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  outcome.cells_run = ran;
  outcome.failures = failures;

  // deterministic merge of everything accumulated so far
  std::vector<RunReport> reports = read_reports(results_path);
  std::sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) {
    return std::tie(a.dataset, a.tag, a.cost_mode, a.seed) <
           std::tie(b.dataset, b.tag, b.cost_mode, b.seed);
  });
  write_reports(results_path, reports);
  write_file_atomic(plan.out_dir + "/summary.json", summarize_reports(reports).dump(1) + "\n");
  return outcome;
}

}  // namespace treecost
