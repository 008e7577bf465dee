#include "treecost/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace treecost {

using nlohmann::json;

const char* kResultsHeader =
    "dataset,tag,cost_mode,seed,auc,expected_cost,expected_height,tree_size,wall_ms";

json instance_to_json(const Instance& inst) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "instance";
  j["name"] = inst.name;
  j["theta"] = inst.theta;
  j["theta_units"] = inst.theta_units;
  j["denom"] = inst.denom;
  j["classes"] = inst.classes;
  j["tests"] = json::array();
  for (const auto& t : inst.tests)
    j["tests"].push_back({{"name", t.name}, {"arity", t.arity}, {"cost", t.cost}});
  j["objects"] = json::array();
  for (const auto& o : inst.objects)
    j["objects"].push_back({{"x", o.outcomes}, {"label", o.label}, {"units", o.units}});
  const auto rows_json = [](const std::vector<LabeledRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"x", r.outcomes}, {"label", r.label}});
    return arr;
  };
  j["val_rows"] = rows_json(inst.val_rows);
  j["test_rows"] = rows_json(inst.test_rows);
  return j;
}

Instance instance_from_json(const json& j) {
  if (j.value("format_version", 0) != kFormatVersion || j.value("kind", "") != "instance")
    throw std::runtime_error("not a version-" + std::to_string(kFormatVersion) +
                             " instance file");
  Instance inst;
  inst.name = j.at("name").get<std::string>();
  inst.theta = j.at("theta").get<double>();
  inst.theta_units = j.at("theta_units").get<Units>();
  inst.denom = j.at("denom").get<Units>();
  inst.classes = j.at("classes").get<std::vector<std::string>>();
  for (const auto& t : j.at("tests"))
    inst.tests.push_back({t.at("name").get<std::string>(), t.at("arity").get<int>(),
                          t.at("cost").get<int>()});
  for (const auto& o : j.at("objects")) {
    ObjectRow row;
    row.outcomes = o.at("x").get<std::vector<std::uint8_t>>();
    row.label = o.at("label").get<int>();
    row.units = o.at("units").get<Units>();
    inst.objects.push_back(std::move(row));
  }
  const auto rows_from = [](const json& arr, std::vector<LabeledRow>* out) {
    for (const auto& r : arr)
      out->push_back({r.at("x").get<std::vector<std::uint8_t>>(), r.at("label").get<int>()});
  };
  rows_from(j.at("val_rows"), &inst.val_rows);
  rows_from(j.at("test_rows"), &inst.test_rows);
  inst.validate();
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  write_file_atomic(path, instance_to_json(inst).dump(1) + "\n");
}

Instance load_instance(const std::string& path) {
  return instance_from_json(json::parse(read_file(path)));
}

json model_to_json(const TreeModel& tree) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "model";
  j["classes"] = tree.classes;
  j["test_names"] = tree.test_names;
  j["denom"] = tree.denom;
  j["nodes"] = json::array();
  for (const auto& n : tree.nodes)
    j["nodes"].push_back({{"test", n.test},
                          {"children", n.children},
                          {"label", n.label},
                          {"class_units", n.class_units},
                          {"units", n.units},
                          {"depth", n.depth}});
  return j;
}

TreeModel model_from_json(const json& j) {
  if (j.value("format_version", 0) != kFormatVersion || j.value("kind", "") != "model")
    throw std::runtime_error("not a version-" + std::to_string(kFormatVersion) + " model file");
  TreeModel tree;
  tree.classes = j.at("classes").get<std::vector<std::string>>();
  tree.test_names = j.at("test_names").get<std::vector<std::string>>();
  tree.denom = j.at("denom").get<Units>();
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.test = n.at("test").get<int>();
    node.children = n.at("children").get<std::vector<int>>();
    node.label = n.at("label").get<int>();
    node.class_units = n.at("class_units").get<std::vector<Units>>();
    node.units = n.at("units").get<Units>();
    node.depth = n.at("depth").get<int>();
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

void save_model(const TreeModel& tree, const std::string& path) {
  write_file_atomic(path, model_to_json(tree).dump(1) + "\n");
}

TreeModel load_model(const std::string& path) {
  return model_from_json(json::parse(read_file(path)));
}

std::string to_dot(const TreeModel& tree) {
  std::ostringstream os;
  os << "digraph tree {\n";
  for (int i = 0; i < tree.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    if (n.is_leaf()) {
      os << "  n" << i << " [shape=box, label=\"" << tree.classes[n.label] << "\"];\n";
    } else {
      os << "  n" << i << " [label=\"" << tree.test_names[n.test] << " (" << n.units
         << ")\"];\n";
    }
  }
  for (int i = 0; i < tree.size(); ++i) {
    const TreeNode& n = tree.nodes[i];
    for (std::size_t v = 0; v < n.children.size(); ++v)
      if (n.children[v] >= 0)
        os << "  n" << i << " -> n" << n.children[v] << " [label=\"" << v << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string report_csv_row(const RunReport& r) {
  std::ostringstream os;
  os << r.dataset << ',' << r.tag << ',' << r.cost_mode << ',' << r.seed << ',';
  if (r.auc) os << *r.auc;
  os << ',' << r.expected_cost << ',' << r.expected_height << ',' << r.tree_size << ','
     << r.wall_ms;
  return os.str();
}

void append_report(const std::string& path, const RunReport& r) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (fresh) out << kResultsHeader << "\n";
  out << report_csv_row(r) << "\n";
}

std::vector<RunReport> read_reports(const std::string& path) {
  std::vector<RunReport> reports;
  std::ifstream in(path);
  if (!in) return reports;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string cell;
    RunReport r;
    std::getline(is, r.dataset, ',');
    std::getline(is, r.tag, ',');
    std::getline(is, r.cost_mode, ',');
    std::getline(is, cell, ',');
    r.seed = std::stoull(cell);
    std::getline(is, cell, ',');
    if (!cell.empty()) r.auc = std::stod(cell);
    std::getline(is, cell, ',');
    r.expected_cost = std::stod(cell);
    std::getline(is, cell, ',');
    r.expected_height = std::stod(cell);
    std::getline(is, cell, ',');
    r.tree_size = std::stoi(cell);
    std::getline(is, cell, ',');
    r.wall_ms = std::stod(cell);
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_reports(const std::string& path, const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << kResultsHeader << "\n";
  for (const auto& r : reports) os << report_csv_row(r) << "\n";
  write_file_atomic(path, os.str());
}

json summarize_reports(const std::vector<RunReport>& reports) {
  struct Acc {
    std::vector<double> auc, cost, height, size;
  };
  std::map<std::string, std::map<std::string, std::map<std::string, Acc>>> groups;
  for (const auto& r : reports) {
    Acc& acc = groups[r.dataset][r.cost_mode][r.tag];
    if (r.auc) acc.auc.push_back(*r.auc);
    acc.cost.push_back(r.expected_cost);
    acc.height.push_back(r.expected_height);
    acc.size.push_back(static_cast<double>(r.tree_size));
  }

  const auto stats = [](const std::vector<double>& xs) {
    json s;
    if (xs.empty()) return s;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    const double stderr_ =
        xs.size() > 1 ? std::sqrt(var / (static_cast<double>(xs.size()) - 1.0)) /
                            std::sqrt(static_cast<double>(xs.size()))
                      : 0.0;
    s["mean"] = mean;
    s["stderr"] = stderr_;
    s["n"] = xs.size();
    return s;
  };

  json j;
  for (const auto& [dataset, by_mode] : groups)
    for (const auto& [mode, by_tag] : by_mode)
      for (const auto& [tag, acc] : by_tag) {
        json cell;
        cell["auc"] = stats(acc.auc);
        cell["expected_cost"] = stats(acc.cost);
        cell["expected_height"] = stats(acc.height);
        cell["tree_size"] = stats(acc.size);
        j[dataset][mode][tag] = cell;
      }
  return j;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace treecost
