#include "treecost/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace treecost {

namespace {

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "?" || cell == "NA";
}

bool parse_double(const std::string& cell, double* out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) return false;
  *out = v;
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  for (auto& c : cells) {
    while (!c.empty() && (c.back() == '\r' || c.back() == ' ' || c.back() == '\t')) c.pop_back();
    std::size_t start = 0;
    while (start < c.size() && (c[start] == ' ' || c[start] == '\t')) ++start;
    c.erase(0, start);
  }
  return cells;
}

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RawTable load_csv(const std::string& path, const std::string& label_column,
                  const std::vector<std::string>& force_categorical) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  const std::vector<std::string> header = split_csv_line(line);

  int label_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_idx = static_cast<int>(i);
  if (label_idx < 0)
    throw std::runtime_error("label column '" + label_column + "' not found in " + path);

  std::vector<std::vector<std::string>> grid;
  std::size_t dropped = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error(path + ": row with " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(header.size()));
    const bool missing = std::any_of(cells.begin(), cells.end(), is_missing);
    if (missing) {
      ++dropped;
      continue;
    }
    grid.push_back(std::move(cells));
  }

  RawTable table;
  table.label_name = label_column;
  table.rows = grid.size();
  table.dropped = dropped;
  for (const auto& row : grid) table.labels.push_back(row[label_idx]);

  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) == label_idx) continue;
    RawColumn col;
    col.name = header[c];
    col.numeric = std::find(force_categorical.begin(), force_categorical.end(), col.name) ==
                  force_categorical.end();
    std::vector<double> nums(grid.size());
    for (std::size_t r = 0; r < grid.size() && col.numeric; ++r)
      col.numeric = parse_double(grid[r][c], &nums[r]);
    if (col.numeric) {
      col.num = std::move(nums);
    } else {
      col.cat.reserve(grid.size());
      for (const auto& row : grid) col.cat.push_back(row[c]);
    }
    table.cols.push_back(std::move(col));
  }
  return table;
}

BinResult bin_numeric(std::span<const double> values, int k, const std::string& column) {
  if (values.empty()) throw std::runtime_error("binning an empty column " + column);
  if (k < 1) throw std::runtime_error("bin count must be >= 1");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::runtime_error("non-finite value in column " + (column.empty() ? "?" : column));

  // distinct sorted values with multiplicities
  std::map<double, std::int64_t> counts;
  for (double v : values) ++counts[v];
  const int d = static_cast<int>(counts.size());
  std::vector<double> xs;
  std::vector<double> ws;
  xs.reserve(d);
  ws.reserve(d);
  for (const auto& [x, w] : counts) {
    xs.push_back(x);
    ws.push_back(static_cast<double>(w));
  }

  const int kk = std::min(k, d);

  std::vector<double> pw(d + 1, 0.0), pwx(d + 1, 0.0), pwx2(d + 1, 0.0);
  for (int i = 0; i < d; ++i) {
    pw[i + 1] = pw[i] + ws[i];
    pwx[i + 1] = pwx[i] + ws[i] * xs[i];
    pwx2[i + 1] = pwx2[i] + ws[i] * xs[i] * xs[i];
  }
  const auto wcss = [&](int i, int j) {  // inclusive range of distinct indices
    const double w = pw[j + 1] - pw[i];
    const double wx = pwx[j + 1] - pwx[i];
    const double wx2 = pwx2[j + 1] - pwx2[i];
    return std::max(0.0, wx2 - wx * wx / w);
  };

  // dp[c][j]: optimal cost of clustering xs[0..j] into c+1 clusters.
  // The cost matrix satisfies the monotone-argmin condition, so each layer
  // fills by divide and conquer.
  std::vector<std::vector<double>> dp(kk, std::vector<double>(d));
  std::vector<std::vector<int>> arg(kk, std::vector<int>(d, 0));
  for (int j = 0; j < d; ++j) dp[0][j] = wcss(0, j);

  std::function<void(int, int, int, int, int)> fill = [&](int c, int lo, int hi,
                                                          int opt_lo, int opt_hi) {
    if (lo > hi) return;
    const int mid = (lo + hi) / 2;
    double best = std::numeric_limits<double>::infinity();
    int best_i = std::max(c, opt_lo);
    for (int i = std::max(c, opt_lo); i <= std::min(mid, opt_hi); ++i) {
      const double cost = dp[c - 1][i - 1] + wcss(i, mid);
      if (cost < best) {
        best = cost;
        best_i = i;
      }
    }
    dp[c][mid] = best;
    arg[c][mid] = best_i;
    fill(c, lo, mid - 1, opt_lo, best_i);
    fill(c, mid + 1, hi, best_i, opt_hi);
  };
  for (int c = 1; c < kk; ++c) fill(c, c, d - 1, c, d - 1);

  // recover cluster boundaries: starts[c] is the first distinct index of bin c
  std::vector<int> starts(kk);
  int j = d - 1;
  for (int c = kk - 1; c >= 1; --c) {
    starts[c] = arg[c][j];
    j = starts[c] - 1;
  }
  starts[0] = 0;

  BinResult result;
  result.k = kk;
  for (int c = 1; c < kk; ++c)
    result.cuts.push_back(0.5 * (xs[starts[c] - 1] + xs[starts[c]]));
  for (int c = 0; c < kk; ++c) {
    const int last = c + 1 < kk ? starts[c + 1] - 1 : d - 1;
    result.ranges.emplace_back(xs[starts[c]], xs[last]);
  }
  result.assign.reserve(values.size());
  for (double v : values) {
    const int bin = static_cast<int>(
        std::upper_bound(result.cuts.begin(), result.cuts.end(), v) - result.cuts.begin());
    result.assign.push_back(bin);
  }
  return result;
}

Binarizer Binarizer::fit(const RawTable& table, std::span<const std::uint32_t> rows,
                         int bins) {
  Binarizer bz;
  for (const auto& raw : table.cols) {
    Column col;
    col.name = raw.name;
    col.numeric = raw.numeric;
    col.first_test = static_cast<int>(bz.tests.size());
    if (raw.numeric) {
      std::vector<double> train_values;
      train_values.reserve(rows.size());
      for (std::uint32_t r : rows) train_values.push_back(raw.num[r]);
      const BinResult br = bin_numeric(train_values, bins, raw.name);
      col.cuts = br.cuts;
      for (const auto& [lo, hi] : br.ranges)
        bz.tests.push_back(
            {raw.name + "=[" + format_value(lo) + "," + format_value(hi) + "]", 2, 1});
      col.num_tests = br.k;
    } else {
      std::set<std::string> seen;
      for (std::uint32_t r : rows) seen.insert(raw.cat[r]);
      col.levels.assign(seen.begin(), seen.end());
      for (const auto& level : col.levels) bz.tests.push_back({raw.name + "=" + level, 2, 1});
      col.num_tests = static_cast<int>(col.levels.size());
    }
    bz.cols.push_back(std::move(col));
  }
  return bz;
}

std::vector<std::uint8_t> Binarizer::encode(const RawTable& table, std::size_t row) const {
  std::vector<std::uint8_t> out(tests.size(), 0);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Column& col = cols[c];
    if (col.numeric) {
      const double v = table.cols[c].num[row];
      const int bin = static_cast<int>(
          std::upper_bound(col.cuts.begin(), col.cuts.end(), v) - col.cuts.begin());
      out[col.first_test + bin] = 1;
    } else {
      const auto& level = table.cols[c].cat[row];
      const auto it = std::lower_bound(col.levels.begin(), col.levels.end(), level);
      if (it != col.levels.end() && *it == level)  // unseen levels stay all-zero
        out[col.first_test + (it - col.levels.begin())] = 1;
    }
  }
  return out;
}

std::vector<ObjectRow> coalesce(const std::vector<std::vector<std::uint8_t>>& rows,
                                const std::vector<int>& labels,
                                const std::vector<Units>& weights, int num_classes) {
  if (rows.empty()) throw std::runtime_error("coalesce: empty input");
  if (rows.size() != labels.size() || rows.size() != weights.size())
    throw std::runtime_error("coalesce: size mismatch");

  std::vector<ObjectRow> objects;
  std::vector<std::vector<Units>> class_units;
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(rows.size());

  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string key(rows[r].begin(), rows[r].end());
    auto [it, inserted] = index.emplace(std::move(key), objects.size());
    if (inserted) {
      ObjectRow o;
      o.outcomes = rows[r];
      objects.push_back(std::move(o));
      class_units.emplace_back(num_classes, 0);
    }
    class_units[it->second][labels[r]] += weights[r];
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    Units total = 0;
    int majority = 0;
    for (int c = 0; c < num_classes; ++c) {
      total += class_units[i][c];
      if (class_units[i][c] > class_units[i][majority]) majority = c;
    }
    objects[i].label = majority;  // ties already favor the smallest index
    objects[i].units = total;
  }
  return objects;
}

std::vector<SplitPart> split_rows(std::size_t n, const SplitSpec& spec) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  const std::size_t n_train = static_cast<std::size_t>(spec.train * static_cast<double>(n));
  const std::size_t n_val = static_cast<std::size_t>(spec.val * static_cast<double>(n));

  std::vector<SplitPart> part(n, SplitPart::test);
  for (std::size_t i = 0; i < n && i < n_train; ++i) part[order[i]] = SplitPart::train;
  for (std::size_t i = n_train; i < n && i < n_train + n_val; ++i) part[order[i]] = SplitPart::val;
  return part;
}

const char* to_string(CostMode mode) { return mode == CostMode::unit ? "unit" : "random"; }

CostMode cost_mode_from_string(const std::string& s) {
  if (s == "unit") return CostMode::unit;
  if (s == "random") return CostMode::random;
  throw std::runtime_error("unknown cost mode: " + s);
}

std::vector<int> assign_costs(int m, CostMode mode, std::uint64_t seed) {
  if (m < 1) throw std::runtime_error("assign_costs: need at least one test");
  std::vector<int> costs(m, 1);
  if (mode == CostMode::random) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(1, 10);
    for (int& c : costs) c = dist(rng);
  }
  return costs;
}

Instance preprocess(const RawTable& table, const PrepConfig& cfg) {
  if (table.rows == 0) throw std::runtime_error("preprocess: no rows");

  Instance inst;
  inst.name = cfg.name;
  inst.theta = cfg.theta;

  std::set<std::string> class_set(table.labels.begin(), table.labels.end());
  inst.classes.assign(class_set.begin(), class_set.end());
  const auto class_index = [&](const std::string& label) {
    return static_cast<int>(std::lower_bound(inst.classes.begin(), inst.classes.end(), label) -
                            inst.classes.begin());
  };

  const std::vector<SplitPart> part = split_rows(table.rows, SplitSpec{cfg.seed});
  std::vector<std::uint32_t> train_rows;
  for (std::size_t r = 0; r < table.rows; ++r)
    if (part[r] == SplitPart::train) train_rows.push_back(static_cast<std::uint32_t>(r));
  if (train_rows.empty()) throw std::runtime_error("preprocess: empty training split");

  const Binarizer bz = Binarizer::fit(table, train_rows, cfg.bins);
  inst.tests = bz.tests;
  const std::vector<int> costs = assign_costs(static_cast<int>(inst.tests.size()),
                                              cfg.costs, cfg.seed);
  for (std::size_t t = 0; t < inst.tests.size(); ++t) inst.tests[t].cost = costs[t];

  std::vector<std::vector<std::uint8_t>> encoded;
  std::vector<int> labels;
  std::vector<Units> weights;
  encoded.reserve(train_rows.size());
  for (std::uint32_t r : train_rows) {
    encoded.push_back(bz.encode(table, r));
    labels.push_back(class_index(table.labels[r]));
    weights.push_back(1);
  }
  inst.objects = coalesce(encoded, labels, weights, inst.num_classes());
  inst.denom = static_cast<Units>(train_rows.size());

  if (cfg.theta <= 0.0) {
    inst.theta_units = 0;
  } else {
    // small datasets: floor the minimum leaf mass at two raw rows
    const auto raw = static_cast<Units>(cfg.theta * static_cast<double>(inst.denom) + 1e-9);
    inst.theta_units = std::max<Units>(raw, 2);
  }

  for (std::size_t r = 0; r < table.rows; ++r) {
    if (part[r] == SplitPart::train) continue;
    LabeledRow row{bz.encode(table, r), class_index(table.labels[r])};
    (part[r] == SplitPart::val ? inst.val_rows : inst.test_rows).push_back(std::move(row));
  }

  inst.validate();
  return inst;
}

}  // namespace treecost
