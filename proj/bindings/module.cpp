#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "treecost/bench.hpp"
#include "treecost/io.hpp"
#include "treecost/oracle.hpp"
#include "treecost/pruner.hpp"

namespace py = pybind11;
using namespace treecost;

namespace {

Instance prep_csv(const std::string& csv, const std::string& label, const std::string& name,
                  int bins, double theta, const std::string& costs, std::uint64_t seed) {
  const RawTable table = load_csv(csv, label);
  PrepConfig cfg;
  cfg.name = name;
  cfg.bins = bins;
  cfg.theta = theta;
  cfg.costs = cost_mode_from_string(costs);
  cfg.seed = seed;
  return preprocess(table, cfg);
}

py::dict report_dict(const RunReport& r) {
  py::dict d;
  d["dataset"] = r.dataset;
  d["tag"] = r.tag;
  d["cost_mode"] = r.cost_mode;
  d["seed"] = r.seed;
  d["auc"] = r.auc ? py::object(py::float_(*r.auc)) : py::object(py::none());
  d["expected_cost"] = r.expected_cost;
  d["expected_height"] = r.expected_height;
  d["tree_size"] = r.tree_size;
  if (r.lambda_used) d["lambda"] = *r.lambda_used;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cost-aware decision-tree induction";

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("name", [](const Instance& i) { return i.name; })
      .def_property_readonly("num_objects", &Instance::num_objects)
      .def_property_readonly("num_tests", &Instance::num_tests)
      .def_property_readonly("num_classes", &Instance::num_classes)
      .def_property_readonly("theta", [](const Instance& i) { return i.theta; })
      .def_property_readonly("theta_units", [](const Instance& i) { return i.theta_units; })
      .def_property_readonly("denom", [](const Instance& i) { return i.denom; })
      .def_property_readonly("classes", [](const Instance& i) { return i.classes; })
      .def_property_readonly("test_names",
                             [](const Instance& i) {
                               std::vector<std::string> names;
                               for (const auto& t : i.tests) names.push_back(t.name);
                               return names;
                             })
      .def_property_readonly("costs",
                             [](const Instance& i) {
                               std::vector<int> costs;
                               for (const auto& t : i.tests) costs.push_back(t.cost);
                               return costs;
                             })
      .def("validate", &Instance::validate)
      .def("realizable", &Instance::realizable)
      .def("to_json", [](const Instance& i) { return instance_to_json(i).dump(1); })
      .def("save", &save_instance, py::arg("path"))
      .def("__repr__", [](const Instance& i) {
        std::ostringstream os;
        os << "<Instance " << i.name << ": n=" << i.num_objects() << " m=" << i.num_tests()
           << " l=" << i.num_classes() << ">";
        return os.str();
      });

  py::class_<TreeModel>(m, "Tree")
      .def_property_readonly("size", &TreeModel::size)
      .def_property_readonly("leaves", &TreeModel::leaf_count)
      .def("same_structure", &TreeModel::same_structure)
      .def("to_json", [](const TreeModel& t) { return model_to_json(t).dump(1); })
      .def("to_dot", &to_dot)
      .def("save", &save_model, py::arg("path"))
      .def("__repr__", [](const TreeModel& t) {
        std::ostringstream os;
        os << "<Tree size=" << t.size() << " leaves=" << t.leaf_count() << ">";
        return os.str();
      });

  m.def("prep_csv", &prep_csv, py::arg("csv"), py::arg("label"), py::arg("name") = "",
        py::arg("bins") = 5, py::arg("theta") = 0.005, py::arg("costs") = "unit",
        py::arg("seed") = 0,
        "Preprocess a CSV (bin, binarize, coalesce, split, costs) into an instance.");
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));

  m.def(
      "induce",
      [](const Instance& inst, const std::string& tag, double lambda_, bool tune) {
        const TagSpec spec = parse_tag(tag);
        const TrainResult r = train_tag(inst, spec, tune ? -1.0 : lambda_);
        return r.model;
      },
      py::arg("instance"), py::arg("tag") = "e-c45", py::arg("lambda_") = 1.0,
      py::arg("tune") = false,
      "Induce a tree with the given algorithm tag (p- prefix prunes).");

  m.def(
      "tune_lambda",
      [](const Instance& inst, const std::string& impurity) {
        GreedyConfig cfg;
        cfg.algo = Algo::enhanced;
        cfg.impurity = impurity_from_string(impurity);
        const LambdaChoice c = tune_lambda(inst, cfg);
        py::list trace;
        for (const auto& step : c.trace) {
          py::dict d;
          d["lambda"] = step.lambda;
          d["auc"] = step.auc ? py::object(py::float_(*step.auc)) : py::object(py::none());
          d["expected_cost"] = step.expected_cost;
          trace.append(d);
        }
        return py::make_tuple(c.lambda, c.model, trace);
      },
      py::arg("instance"), py::arg("impurity") = "entropy");

  m.def(
      "evaluate",
      [](const TreeModel& tree, const Instance& inst, const std::string& split) {
        if (split != "val" && split != "test")
          throw std::runtime_error("split must be val or test");
        return report_dict(
            evaluate(tree, inst, split == "val" ? EvalSplit::val : EvalSplit::test));
      },
      py::arg("tree"), py::arg("instance"), py::arg("split") = "test");

  m.def("expected_cost", &expected_cost, py::arg("tree"), py::arg("instance"));
  m.def("expected_height", &expected_height, py::arg("tree"), py::arg("instance"));

  m.def(
      "prune",
      [](const TreeModel& tree, const Instance& inst, const std::string& impurity) {
        const PruneFamily family =
            weakest_link_sequence(tree, impurity_from_string(impurity));
        return select_alpha(family, inst);
      },
      py::arg("tree"), py::arg("instance"), py::arg("impurity") = "entropy");

  m.def(
      "submodularity_audit",
      [](std::uint64_t seed, int count) {
        std::mt19937_64 rng(seed);
        TinyOptions opt;
        opt.max_objects = 6;
        opt.max_tests = 6;
        opt.uniform_units = false;
        for (int i = 0; i < count; ++i) {
          const AuditReport r = submodularity_audit(random_tiny(rng(), opt));
          if (!r.ok) return py::make_tuple(false, r.counterexample);
        }
        return py::make_tuple(true, std::string());
      },
      py::arg("seed") = 0, py::arg("count") = 20);

  m.def(
      "approx_ratio_sweep",
      [](std::uint64_t seed, int count, const std::vector<double>& lambdas) {
        py::list out;
        for (const auto& row : approx_ratio_sweep(seed, count, lambdas)) {
          py::dict d;
          d["seed"] = row.seed;
          d["n"] = row.n;
          d["m"] = row.m;
          d["lambda"] = row.lambda;
          d["greedy_cost"] = row.greedy_cost;
          d["optimal_cost"] = row.optimal_cost;
          d["ratio"] = row.ratio;
          d["bound"] = row.bound;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 0, py::arg("count") = 50,
      py::arg("lambdas") = std::vector<double>{0.0, 1.0});
}
