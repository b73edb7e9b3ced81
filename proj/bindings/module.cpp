#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "metamodel/adaptation.hpp"
#include "metamodel/ann.hpp"
#include "metamodel/ca.hpp"
#include "metamodel/equivalence.hpp"
#include "metamodel/errors.hpp"
#include "metamodel/serialization.hpp"
#include "metamodel/system_model.hpp"

namespace py = pybind11;
using namespace metamodel;

namespace {

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Complex-systems metamodelling engine: lifecycle, cellular "
            "automata, neural networks, rule evolution and equivalence "
            "checking.";

  py::register_exception<Error>(m, "Error");

  py::enum_<Regime>(m, "Regime")
      .value("VIRTUAL", Regime::Virtual)
      .value("METASTABLE", Regime::Metastable)
      .value("ACTUAL", Regime::Actual);

  py::class_<StateSet>(m, "StateSet")
      .def_static("finite", &StateSet::finite, py::arg("values"))
      .def_static("interval", &StateSet::interval, py::arg("lo"),
                  py::arg("hi"))
      .def_property_readonly("is_finite", &StateSet::is_finite)
      .def_property_readonly("k", [](const StateSet& s) { return s.count(); })
      .def("contains", &StateSet::contains)
      .def("values", &StateSet::values)
      .def("__eq__", [](const StateSet& a, const StateSet& b) {
        return a == b;
      });

  py::class_<RuleTable>(m, "RuleTable")
      .def(py::init<int, int>(), py::arg("num_states"), py::arg("arity"))
      .def_static("from_wolfram", &RuleTable::from_wolfram, py::arg("number"),
                  py::arg("arity"))
      .def_property_readonly("num_states", &RuleTable::num_states)
      .def_property_readonly("arity", &RuleTable::arity)
      .def_property_readonly("total", &RuleTable::total)
      .def_property_readonly("wolfram_number",
                             [](const RuleTable& t) {
                               return t.wolfram_number();
                             })
      .def("lookup",
           [](const RuleTable& t, const std::vector<int>& key) {
             return t.lookup(key);
           })
      .def("define",
           [](RuleTable& t, const std::vector<int>& key, int output) {
             t.define(key, output);
           })
      .def("__eq__", [](const RuleTable& a, const RuleTable& b) {
        return a == b;
      });

  py::class_<RuleSet>(m, "RuleSet")
      .def(py::init<>())
      .def_readwrite("update_table", &RuleSet::update_table)
      .def_readwrite("adaptation_rules", &RuleSet::adaptation_rules);

  py::enum_<AdaptationEnd::Scope>(m, "Scope")
      .value("FINAL_STATE", AdaptationEnd::Scope::FinalState)
      .value("TRAJECTORY_ROW", AdaptationEnd::Scope::TrajectoryRow);

  py::class_<AdaptationEnd>(m, "AdaptationEnd")
      .def(py::init([](Entities targets, AdaptationEnd::Scope scope) {
             return AdaptationEnd{std::move(targets), scope};
           }),
           py::arg("targets"),
           py::arg("scope") = AdaptationEnd::Scope::FinalState)
      .def_readwrite("targets", &AdaptationEnd::targets)
      .def_readwrite("scope", &AdaptationEnd::scope);

  py::class_<AdaptationRecord>(m, "AdaptationRecord")
      .def_readonly("iteration", &AdaptationRecord::iteration)
      .def_readonly("loss", &AdaptationRecord::loss)
      .def_readonly("accepted", &AdaptationRecord::accepted)
      .def_readonly("candidate", &AdaptationRecord::candidate);

  py::class_<ConcreteParameters>(m, "ConcreteParameters")
      .def(py::init<>())
      .def_readwrite("initial_states", &ConcreteParameters::initial_states)
      .def_readwrite("state_set", &ConcreteParameters::state_set)
      .def_readwrite("milieus", &ConcreteParameters::milieus)
      .def_readwrite("rules", &ConcreteParameters::rules)
      .def_readwrite("adaptation_end", &ConcreteParameters::adaptation_end)
      .def_readwrite("update_fn_id", &ConcreteParameters::update_fn_id)
      .def_readwrite("adaptation_fn_id",
                     &ConcreteParameters::adaptation_fn_id)
      .def_property(
          "update_fn_config",
          [](const ConcreteParameters& p) {
            return p.update_fn_config.is_null() ? std::string("null")
                                                : p.update_fn_config.dump();
          },
          [](ConcreteParameters& p, const std::string& text) {
            p.update_fn_config = nlohmann::json::parse(text);
          },
          "implementation-specific config as a JSON string")
      .def_readwrite("t", &ConcreteParameters::time_steps)
      .def_readwrite("g", &ConcreteParameters::max_adaptations)
      .def_readwrite("l", &ConcreteParameters::loss_tolerance)
      .def("validate", &ConcreteParameters::validate);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("rows", &Trajectory::rows)
      .def_readonly("adaptation_log", &Trajectory::adaptation_log);

  py::class_<SystemModel>(m, "SystemModel")
      .def_static("make_virtual", &SystemModel::make_virtual,
                  py::arg("structure_kinds"), py::arg("operation_kinds"))
      .def("concretize", &SystemModel::concretize, py::arg("params"))
      .def("step", &SystemModel::step)
      .def("actualize", &SystemModel::actualize, py::arg("steps"))
      .def_property_readonly("regime", &SystemModel::regime)
      .def_property_readonly("declared_structures",
                             &SystemModel::declared_structures)
      .def_property_readonly("declared_operations",
                             &SystemModel::declared_operations)
      .def_property_readonly("s", &SystemModel::structure_count)
      .def_property_readonly("o", &SystemModel::operation_count)
      .def_property_readonly("params", &SystemModel::params,
                             py::return_value_policy::copy)
      .def_property_readonly("trajectory", &SystemModel::trajectory,
                             py::return_value_policy::copy)
      .def_property_readonly("current_states", &SystemModel::current_states,
                             py::return_value_policy::copy)
      .def_property_readonly("current_step", &SystemModel::current_step)
      .def("to_json", [](const SystemModel& model) {
        return dump_json(model_to_json(model));
      });

  m.def("model_from_json", [](const std::string& text) {
    return model_from_json(nlohmann::json::parse(text));
  });
  m.def("loss",
        [](const Entities& current, const Entities& targets,
           const StateSet& states) { return loss(current, targets, states); },
        py::arg("current"), py::arg("targets"), py::arg("states"));

  // cellular automata
  py::enum_<Boundary>(m, "Boundary")
      .value("PERIODIC", Boundary::Periodic)
      .value("FIXED", Boundary::Fixed);

  py::class_<CellularAutomaton>(m, "CellularAutomaton")
      .def(py::init([](std::vector<int> cells, StateSet states,
                       Milieus neighborhoods, RuleTable transition) {
             return CellularAutomaton{std::move(cells), std::move(states),
                                      std::move(neighborhoods),
                                      std::move(transition)};
           }),
           py::arg("cells"), py::arg("states"), py::arg("neighborhoods"),
           py::arg("transition"))
      .def_readwrite("cells", &CellularAutomaton::cells)
      .def_readwrite("states", &CellularAutomaton::states)
      .def_readwrite("neighborhoods", &CellularAutomaton::neighborhoods)
      .def_readwrite("transition", &CellularAutomaton::transition)
      .def("__eq__", [](const CellularAutomaton& a,
                        const CellularAutomaton& b) { return a == b; });

  m.def("elementary_rule_table", &elementary_rule_table, py::arg("rule"));
  m.def("life_rule_table", &life_rule_table);
  m.def("ring_milieu", &ring_milieu, py::arg("cells"), py::arg("radius"),
        py::arg("boundary") = Boundary::Periodic);
  m.def("moore_milieu", &moore_milieu, py::arg("width"), py::arg("height"));
  m.def("ca_to_system_model", &ca_to_system_model, py::arg("ca"));
  m.def("system_model_to_ca", &system_model_to_ca, py::arg("model"));

  // neural networks
  py::enum_<Activation>(m, "Activation")
      .value("THRESHOLD", Activation::Threshold)
      .value("LOGISTIC", Activation::Logistic);

  py::class_<NeuralNetwork>(m, "NeuralNetwork")
      .def(py::init<>())
      .def_readwrite("layers", &NeuralNetwork::layers)
      .def_readwrite("incoming", &NeuralNetwork::incoming)
      .def_readwrite("weights", &NeuralNetwork::weights)
      .def_readwrite("bias", &NeuralNetwork::bias)
      .def_readwrite("theta", &NeuralNetwork::theta)
      .def_readwrite("activation", &NeuralNetwork::activation)
      .def_readwrite("values", &NeuralNetwork::values)
      .def_readwrite("activations", &NeuralNetwork::activations)
      .def_property_readonly("depth", &NeuralNetwork::depth)
      .def("validate", &NeuralNetwork::validate)
      .def("to_json", [](const NeuralNetwork& net) {
        return dump_json(network_to_json(net));
      })
      .def("__eq__", [](const NeuralNetwork& a, const NeuralNetwork& b) {
        return a == b;
      });

  m.def("network_from_json", [](const std::string& text) {
    return network_from_json(nlohmann::json::parse(text));
  });
  m.def("make_layered", &make_layered, py::arg("layer_sizes"),
        py::arg("activation"), py::arg("seed") = 0);
  m.def("input_function", &input_function, py::arg("net"), py::arg("unit"));
  m.def("activate", &activate, py::arg("x"), py::arg("kind"),
        py::arg("theta") = 0.0);
  m.def("forward",
        [](const NeuralNetwork& net, const std::vector<double>& inputs) {
          return forward(net, inputs);
        },
        py::arg("net"), py::arg("inputs"));
  m.def("learn",
        [](const NeuralNetwork& net, const Dataset& dataset, long g, double l,
           double rate, std::uint64_t seed) {
          LearnResult result = learn(net, dataset, g, l, rate, seed);
          return py::make_tuple(result.net, result.log);
        },
        py::arg("net"), py::arg("dataset"), py::arg("g"), py::arg("l"),
        py::arg("rate"), py::arg("seed") = 0);
  m.def("ann_to_system_model", &ann_to_system_model, py::arg("net"));
  m.def("system_model_to_ann", &system_model_to_ann, py::arg("model"));

  // adaptation
  py::enum_<AdaptationConfig::Strategy>(m, "Strategy")
      .value("HILL_CLIMB", AdaptationConfig::Strategy::HillClimbFirstImprovement)
      .value("EXHAUSTIVE", AdaptationConfig::Strategy::Exhaustive);

  py::class_<AdaptationConfig>(m, "AdaptationConfig")
      .def(py::init<>())
      .def_readwrite("g", &AdaptationConfig::max_iterations)
      .def_readwrite("l", &AdaptationConfig::loss_tolerance)
      .def_readwrite("seed", &AdaptationConfig::seed)
      .def_readwrite("mutation_bits", &AdaptationConfig::mutation_bits)
      .def_readwrite("strategy", &AdaptationConfig::strategy);

  m.def("evolve_rules",
        [](const SystemModel& model, const AdaptationEnd& end,
           const AdaptationConfig& cfg, long t) {
          AdaptationResult result = evolve_rules(model, end, cfg, t);
          return py::make_tuple(result.model, result.log);
        },
        py::arg("model"), py::arg("end"), py::arg("cfg"), py::arg("t"));

  // equivalence
  py::enum_<StructuralVerdict>(m, "StructuralVerdict")
      .value("MATCHED", StructuralVerdict::Matched)
      .value("MISMATCHED", StructuralVerdict::Mismatched)
      .value("MISSING_IN_LEFT", StructuralVerdict::MissingInLeft)
      .value("MISSING_IN_RIGHT", StructuralVerdict::MissingInRight);

  py::enum_<OperationalVerdict>(m, "OperationalVerdict")
      .value("EXTENSIONALLY_EQUAL", OperationalVerdict::ExtensionallyEqual)
      .value("COUNTEREXAMPLE", OperationalVerdict::Counterexample)
      .value("MISSING_IN_LEFT", OperationalVerdict::MissingInLeft)
      .value("MISSING_IN_RIGHT", OperationalVerdict::MissingInRight)
      .value("MISMATCHED", OperationalVerdict::Mismatched);

  py::enum_<Conclusion>(m, "Conclusion")
      .value("EQUIVALENT", Conclusion::Equivalent)
      .value("CONDITIONALLY_EQUIVALENT", Conclusion::ConditionallyEquivalent)
      .value("NOT_EQUIVALENT", Conclusion::NotEquivalent);

  py::class_<StructuralEntry>(m, "StructuralEntry")
      .def_readonly("kind", &StructuralEntry::kind)
      .def_readonly("verdict", &StructuralEntry::verdict)
      .def_readonly("detail", &StructuralEntry::detail);

  py::class_<OperationalEntry>(m, "OperationalEntry")
      .def_readonly("kind", &OperationalEntry::kind)
      .def_readonly("verdict", &OperationalEntry::verdict)
      .def_readonly("checked", &OperationalEntry::checked)
      .def_readonly("sampled", &OperationalEntry::sampled)
      .def_readonly("counterexample_input",
                    &OperationalEntry::counterexample_input)
      .def_readonly("left_output", &OperationalEntry::left_output)
      .def_readonly("right_output", &OperationalEntry::right_output)
      .def_readonly("detail", &OperationalEntry::detail);

  py::class_<EquivalenceConfig>(m, "EquivalenceConfig")
      .def(py::init<>())
      .def_readwrite("tolerance", &EquivalenceConfig::tolerance)
      .def_readwrite("enumeration_cap", &EquivalenceConfig::enumeration_cap)
      .def_readwrite("sample_budget", &EquivalenceConfig::sample_budget)
      .def_readwrite("seed", &EquivalenceConfig::seed);

  py::class_<EquivalenceReport>(m, "EquivalenceReport")
      .def_readonly("structural", &EquivalenceReport::structural)
      .def_readonly("operational", &EquivalenceReport::operational)
      .def_readonly("conclusion", &EquivalenceReport::conclusion)
      .def_readonly("conditions", &EquivalenceReport::conditions)
      .def("to_json", [](const EquivalenceReport& report) {
        return dump_json(report_to_json(report));
      })
      .def("table", [](const EquivalenceReport& report) {
        std::ostringstream out;
        write_report_table(out, report);
        return out.str();
      });

  m.def("check_structural", &check_structural, py::arg("left"),
        py::arg("right"));
  m.def("check_equivalence", &check_equivalence, py::arg("left"),
        py::arg("right"), py::arg("cfg") = EquivalenceConfig{});
  m.def("exit_code", &exit_code, py::arg("conclusion"));

  // files
  m.def("load_model_file", [](const std::string& path) {
    return load_model_file(path);
  });
  m.def("save_model", [](const SystemModel& model, const std::string& path) {
    save_model(model, path);
  });
  m.def("load_network_file", [](const std::string& path) {
    return load_network_file(path);
  });
  m.def("save_network", [](const NeuralNetwork& net, const std::string& path) {
    save_network(net, path);
  });

  m.attr("__version__") = "0.1.0";
}
