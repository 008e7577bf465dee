#pragma once

#include <string>
#include <vector>

#include "treecost/instance.hpp"
#include "treecost/metrics.hpp"
#include "treecost/tree.hpp"

#include <json.hpp>

namespace treecost {

inline constexpr int kFormatVersion = 1;

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

nlohmann::json model_to_json(const TreeModel& tree);
TreeModel model_from_json(const nlohmann::json& j);
void save_model(const TreeModel& tree, const std::string& path);
TreeModel load_model(const std::string& path);

/// Graphviz rendering: internal nodes "test (participants)", leaves carry
/// the decided class, edges carry the outcome value.
std::string to_dot(const TreeModel& tree);

/// Results CSV schema:
/// dataset,tag,cost_mode,seed,auc,expected_cost,expected_height,tree_size,wall_ms
extern const char* kResultsHeader;
std::string report_csv_row(const RunReport& r);
void append_report(const std::string& path, const RunReport& r);
std::vector<RunReport> read_reports(const std::string& path);
void write_reports(const std::string& path, const std::vector<RunReport>& reports);

/// Per-tag mean and standard error of auc / expected_cost /
/// expected_height / tree_size, grouped by (dataset, cost_mode, tag).
nlohmann::json summarize_reports(const std::vector<RunReport>& reports);

/// write-temp-then-rename, same directory
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace treecost
