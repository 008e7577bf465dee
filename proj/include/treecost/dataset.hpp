#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "treecost/instance.hpp"

namespace treecost {

struct RawColumn {
  std::string name;
  bool numeric = false;
  std::vector<double> num;        // filled when numeric
  std::vector<std::string> cat;   // filled otherwise
};

/// A loaded table: feature columns plus the label column. Rows with a
/// missing value ("", "?", "NA") are dropped at load time and counted.
struct RawTable {
  std::vector<RawColumn> cols;
  std::vector<std::string> labels;
  std::string label_name;
  std::size_t rows = 0;
  std::size_t dropped = 0;
};

/// CSV with a header row. Columns whose every kept value parses as a
/// finite double are numeric; everything else is categorical. Columns
/// listed in `force_categorical` skip the auto-detection.
RawTable load_csv(const std::string& path, const std::string& label_column,
                  const std::vector<std::string>& force_categorical = {});

struct BinResult {
  int k = 0;                      // bins actually used (= min(k, distinct))
  std::vector<int> assign;        // bin per input value, order-preserving
  std::vector<double> cuts;       // k-1 boundaries (midpoints between bins)
  std::vector<std::pair<double, double>> ranges;  // [min,max] of each bin
};

/// Optimal 1-D k-means: exact dynamic program over the sorted distinct
/// values (weighted by multiplicity), minimizing within-cluster sum of
/// squares. Deterministic; no Lloyd iterations. Throws a data-quality
/// error naming `column` on non-finite input.
BinResult bin_numeric(std::span<const double> values, int k,
                      const std::string& column = "");

/// Training-fitted one-hot encoder: one binary test per (column, level)
/// pair, levels being k-means bins for numeric columns and observed
/// training levels for categorical ones. Unseen categorical values map to
/// all-zeros across that column's tests.
struct Binarizer {
  struct Column {
    std::string name;
    bool numeric = false;
    std::vector<double> cuts;             // numeric
    std::vector<std::string> levels;      // categorical, sorted
    int first_test = 0;
    int num_tests = 0;
  };
  std::vector<Column> cols;
  std::vector<TestDef> tests;

  static Binarizer fit(const RawTable& table, std::span<const std::uint32_t> rows,
                       int bins);
  std::vector<std::uint8_t> encode(const RawTable& table, std::size_t row) const;
};

/// Merges duplicate outcome vectors; the merged label is the majority
/// class (ties to the smallest class index) and the multiplicity is the
/// total weight. Output order follows first occurrence.
std::vector<ObjectRow> coalesce(const std::vector<std::vector<std::uint8_t>>& rows,
                                const std::vector<int>& labels,
                                const std::vector<Units>& weights, int num_classes);

enum class SplitPart : std::uint8_t { train, val, test };

struct SplitSpec {
  std::uint64_t seed = 0;
  double train = 0.7;
  double val = 0.1;
};

std::vector<SplitPart> split_rows(std::size_t n, const SplitSpec& spec);

enum class CostMode { unit, random };
const char* to_string(CostMode mode);
CostMode cost_mode_from_string(const std::string& s);

/// Unit mode: all 1. Random mode: i.i.d. uniform integers in [1, 10]
/// from the seeded generator.
std::vector<int> assign_costs(int m, CostMode mode, std::uint64_t seed);

struct PrepConfig {
  std::string name;
  int bins = 5;
  double theta = 0.005;
  CostMode costs = CostMode::unit;
  std::uint64_t seed = 0;
};

/// Full pipeline: split, fit binning/binarization on the training rows,
/// encode everything, coalesce the training rows, assign costs and the
/// stopping threshold. theta > 0 is floored at two raw rows of mass.
Instance preprocess(const RawTable& table, const PrepConfig& cfg);

}  // namespace treecost
