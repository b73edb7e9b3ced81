#include "metamodel/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "metamodel/errors.hpp"

namespace metamodel {
namespace {

using nlohmann::json;

json entities_to_json(const Entities& states, const StateSet& set) {
  json arr = json::array();
  for (double s : states) {
    if (set.is_finite()) {
      arr.push_back(static_cast<long long>(s));
    } else {
      arr.push_back(s);
    }
  }
  return arr;
}

Entities entities_from_json(const json& arr) {
  Entities out;
  for (const auto& v : arr) out.push_back(v.get<double>());
  return out;
}

json state_set_to_json(const StateSet& set) {
  if (set.is_finite()) {
    return json{{"kind", "finite"}, {"values", set.values()}};
  }
  return json{{"kind", "interval"}, {"lo", set.lo()}, {"hi", set.hi()}};
}

StateSet state_set_from_json(const json& doc) {
  const std::string k = doc.at("kind").get<std::string>();
  if (k == "finite") {
    return StateSet::finite(doc.at("values").get<std::vector<int>>());
  }
  if (k == "interval") {
    return StateSet::interval(doc.at("lo").get<double>(),
                              doc.at("hi").get<double>());
  }
  throw ValidationError("unknown state set kind '" + k + "'");
}

json milieus_to_json(const Milieus& milieus) {
  json arr = json::array();
  for (const Milieu& m : milieus) {
    json row = json::array();
    for (int idx : m) row.push_back(idx + 1);  // 1-based, 0 = phantom
    arr.push_back(std::move(row));
  }
  return arr;
}

Milieus milieus_from_json(const json& arr) {
  Milieus out;
  for (const auto& row : arr) {
    Milieu m;
    for (const auto& idx : row) m.push_back(idx.get<int>() - 1);
    out.push_back(std::move(m));
  }
  return out;
}

std::string key_string(const RuleTable& table, std::size_t index) {
  const std::vector<int> key = table.key_at(index);
  std::string s;
  const bool compact = table.num_states() <= 10;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (!compact && i > 0) s += ",";
    s += std::to_string(key[i]);
  }
  return s;
}

std::vector<int> key_from_string(const std::string& text, int arity) {
  std::vector<int> key;
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string digit;
    while (std::getline(ss, digit, ',')) key.push_back(std::stoi(digit));
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw ValidationError("bad rule table key '" + text + "'");
      }
      key.push_back(c - '0');
    }
  }
  if (static_cast<int>(key.size()) != arity) {
    throw ValidationError("rule table key '" + text +
                          "' does not match the arity");
  }
  return key;
}

json rule_table_to_json(const RuleTable& table) {
  json doc{{"k", table.num_states()}, {"arity", table.arity()}};
  if (auto number = table.wolfram_number()) {
    doc["wolfram"] = *number;
    return doc;
  }
  json entries = json::object();
  for (std::size_t idx = table.domain_size(); idx-- > 0;) {
    if (table.output_at(idx) >= 0) {
      entries[key_string(table, idx)] = table.output_at(idx);
    }
  }
  doc["entries"] = std::move(entries);
  return doc;
}

RuleTable rule_table_from_json(const json& doc) {
  const int k = doc.at("k").get<int>();
  const int arity = doc.at("arity").get<int>();
  if (doc.contains("wolfram")) {
    if (k != 2) {
      throw ValidationError("Wolfram shorthand requires binary states");
    }
    return RuleTable::from_wolfram(doc.at("wolfram").get<std::uint64_t>(),
                                   arity);
  }
  RuleTable table(k, arity);
  for (const auto& [key_text, output] : doc.at("entries").items()) {
    table.define(key_from_string(key_text, arity), output.get<int>());
  }
  return table;
}

json update_fn_to_json(const ConcreteParameters& p) {
  json fn = p.update_fn_config.is_object() ? p.update_fn_config
                                           : json::object();
  fn["id"] = p.update_fn_id;
  return fn;
}

}  // namespace

json model_to_json(const SystemModel& model) {
  json doc;
  doc["regime"] = std::string(to_string(model.regime()));

  json structures;
  structures["declared"] = model.declared_structures();
  json operations;
  operations["declared"] = model.declared_operations();

  if (model.has_params()) {
    const ConcreteParameters& p = model.params();
    structures["entities"] = entities_to_json(p.initial_states, p.state_set);
    structures["states"] = state_set_to_json(p.state_set);
    structures["milieus"] = milieus_to_json(p.milieus);
    structures["update_rules"] =
        p.rules.update_table ? rule_table_to_json(*p.rules.update_table)
                             : json();
    structures["adaptation_rules"] = p.rules.adaptation_rules;
    if (p.adaptation_end) {
      structures["adaptation_end"] =
          json{{"targets", entities_to_json(p.adaptation_end->targets,
                                            p.state_set)},
               {"scope", p.adaptation_end->scope ==
                                 AdaptationEnd::Scope::FinalState
                             ? "final-state"
                             : "trajectory-row"}};
    } else {
      structures["adaptation_end"] = json();
    }
    if (!p.extras.empty()) {
      structures["extras"] = p.extras;
    }
    operations["update_fn"] = update_fn_to_json(p);
    operations["adaptation_fn"] =
        p.adaptation_fn_id ? json{{"id", *p.adaptation_fn_id}} : json();
    doc["params"] = json{{"t", p.time_steps},
                         {"g", p.max_adaptations},
                         {"l", p.loss_tolerance}};
  } else {
    structures["entities"] = json();
    structures["states"] = json();
    structures["milieus"] = json();
    structures["update_rules"] = json();
    structures["adaptation_rules"] = json();
    structures["adaptation_end"] = json();
    operations["update_fn"] = json();
    operations["adaptation_fn"] = json();
    doc["params"] = json();
  }
  doc["structures"] = std::move(structures);
  doc["operations"] = std::move(operations);

  if (model.has_trajectory()) {
    json rows = json::array();
    for (const Entities& row : model.trajectory().rows) {
      rows.push_back(entities_to_json(row, model.params().state_set));
    }
    doc["trajectory"] = json{{"rows", std::move(rows)}};
  }
  return doc;
}

SystemModel model_from_json(const json& doc) {
  try {
    const Regime regime =
        regime_from_string(doc.at("regime").get<std::string>());
    const json& structures = doc.at("structures");
    const json& operations = doc.at("operations");
    auto structure_kinds =
        structures.at("declared").get<std::vector<std::string>>();
    auto operation_kinds =
        operations.at("declared").get<std::vector<std::string>>();

    std::optional<ConcreteParameters> params;
    if (!doc.at("params").is_null()) {
      ConcreteParameters p;
      p.state_set = state_set_from_json(structures.at("states"));
      p.initial_states = entities_from_json(structures.at("entities"));
      p.milieus = milieus_from_json(structures.at("milieus"));
      if (!structures.at("update_rules").is_null()) {
        p.rules.update_table =
            rule_table_from_json(structures.at("update_rules"));
      }
      if (structures.contains("adaptation_rules") &&
          !structures.at("adaptation_rules").is_null()) {
        p.rules.adaptation_rules =
            structures.at("adaptation_rules").get<std::vector<std::string>>();
      }
      if (!structures.at("adaptation_end").is_null()) {
        const json& end = structures.at("adaptation_end");
        AdaptationEnd ae;
        ae.targets = entities_from_json(end.at("targets"));
        ae.scope = end.at("scope").get<std::string>() == "trajectory-row"
                       ? AdaptationEnd::Scope::TrajectoryRow
                       : AdaptationEnd::Scope::FinalState;
        p.adaptation_end = std::move(ae);
      }
      if (structures.contains("extras")) {
        p.extras =
            structures.at("extras").get<std::map<std::string, json>>();
      }
      json fn = operations.at("update_fn");
      if (!fn.is_null()) {
        p.update_fn_id = fn.at("id").get<std::string>();
        fn.erase("id");
        if (!fn.empty()) p.update_fn_config = std::move(fn);
      }
      if (!operations.at("adaptation_fn").is_null()) {
        p.adaptation_fn_id =
            operations.at("adaptation_fn").at("id").get<std::string>();
      }
      const json& np = doc.at("params");
      p.time_steps = np.at("t").get<long>();
      p.max_adaptations = np.at("g").get<long>();
      p.loss_tolerance = np.at("l").get<double>();
      params = std::move(p);
    }

    std::optional<Trajectory> trajectory;
    if (doc.contains("trajectory") && !doc.at("trajectory").is_null()) {
      Trajectory t;
      for (const auto& row : doc.at("trajectory").at("rows")) {
        t.rows.push_back(entities_from_json(row));
      }
      trajectory = std::move(t);
    }
    return SystemModel::restore(regime, std::move(structure_kinds),
                                std::move(operation_kinds), std::move(params),
                                std::move(trajectory));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model document: ") +
                          e.what());
  }
}

json network_to_json(const NeuralNetwork& net) {
  json layers = json::array();
  for (const auto& layer : net.layers) {
    json row = json::array();
    for (int unit : layer) row.push_back(unit + 1);
    layers.push_back(std::move(row));
  }
  return json{{"kind", "ann"},
              {"activation", net.activation == Activation::Threshold
                                 ? "threshold"
                                 : "logistic"},
              {"layers", std::move(layers)},
              {"incoming", milieus_to_json(net.incoming)},
              {"weights", net.weights},
              {"bias", net.bias},
              {"theta", net.theta},
              {"values", state_set_to_json(net.values)},
              {"activations", net.activations}};
}

NeuralNetwork network_from_json(const json& doc) {
  try {
    if (doc.value("kind", "") != "ann") {
      throw ValidationError("not a network document (kind != 'ann')");
    }
    NeuralNetwork net;
    for (const auto& row : doc.at("layers")) {
      std::vector<int> layer;
      for (const auto& unit : row) layer.push_back(unit.get<int>() - 1);
      net.layers.push_back(std::move(layer));
    }
    net.incoming = milieus_from_json(doc.at("incoming"));
    net.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
    net.bias = doc.at("bias").get<std::vector<double>>();
    net.theta = doc.at("theta").get<std::vector<double>>();
    net.activation = doc.at("activation").get<std::string>() == "threshold"
                         ? Activation::Threshold
                         : Activation::Logistic;
    net.values = state_set_from_json(doc.at("values"));
    net.activations = doc.at("activations").get<std::vector<double>>();
    net.validate();
    return net;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed network document: ") +
                          e.what());
  }
}

void save_model(const SystemModel& model, const std::filesystem::path& path) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

void save_network(const NeuralNetwork& net,
                  const std::filesystem::path& path) {
  write_text_file(path, network_to_json(net).dump(2) + "\n");
}

SystemModel load_model_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("malformed document in " + path.string() + ": " +
                          e.what());
  }
  if (doc.is_object() && doc.contains("regime")) {
    return model_from_json(doc);
  }
  if (doc.is_object() && doc.value("kind", "") == "ann") {
    return ann_to_system_model(network_from_json(doc));
  }
  throw ValidationError("file " + path.string() +
                        " is neither a model nor a network document");
}

NeuralNetwork load_network_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("malformed document in " + path.string() + ": " +
                          e.what());
  }
  if (doc.is_object() && doc.contains("regime")) {
    return system_model_to_ann(model_from_json(doc));
  }
  return network_from_json(doc);
}

void write_trajectory(std::ostream& out, const SystemModel& model) {
  const ConcreteParameters& p = model.params();
  const Trajectory& trajectory = model.trajectory();
  const std::size_t k = p.state_set.is_finite() ? p.state_set.count() : 0;
  out << "# e=" << p.entity_count() << " k=" << k
      << " t=" << trajectory.rows.size() - 1 << "\n";
  for (const Entities& row : trajectory.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ' ';
      if (p.state_set.is_finite()) {
        out << static_cast<long long>(row[i]);
      } else {
        out << std::setprecision(17) << row[i];
      }
    }
    out << '\n';
  }
}

Entities read_targets(std::istream& in) {
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    last = line;
  }
  if (last.empty()) {
    throw ValidationError("target file contains no state line");
  }
  Entities targets;
  std::stringstream ss(last);
  double value = 0.0;
  while (ss >> value) targets.push_back(value);
  if (targets.empty()) {
    throw ValidationError("target line contains no numbers");
  }
  return targets;
}

void write_rule_table_text(std::ostream& out, const RuleTable& table) {
  out << "# k=" << table.num_states() << " arity=" << table.arity() << "\n";
  if (auto number = table.wolfram_number()) {
    out << "wolfram:" << *number << "\n";
    return;
  }
  for (std::size_t idx = table.domain_size(); idx-- > 0;) {
    if (table.output_at(idx) >= 0) {
      out << key_string(table, idx) << " -> " << table.output_at(idx) << "\n";
    }
  }
}

RuleTable read_rule_table_text(std::istream& in) {
  int k = 2;
  int arity = 3;
  std::vector<std::pair<std::string, int>> entries;
  std::optional<std::uint64_t> wolfram;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t pos = line.find("k=");
      if (pos != std::string::npos) k = std::stoi(line.substr(pos + 2));
      pos = line.find("arity=");
      if (pos != std::string::npos) arity = std::stoi(line.substr(pos + 6));
      continue;
    }
    if (line.rfind("wolfram:", 0) == 0) {
      wolfram = std::stoull(line.substr(8));
      continue;
    }
    const std::size_t arrow = line.find("->");
    if (arrow == std::string::npos) {
      throw ValidationError("bad rule table line '" + line + "'");
    }
    std::string key = line.substr(0, arrow);
    std::string out = line.substr(arrow + 2);
    const auto strip = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(0, 1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                            s.back() == '\r')) s.pop_back();
    };
    strip(key);
    strip(out);
    entries.emplace_back(key, std::stoi(out));
  }
  if (wolfram) {
    if (k != 2) {
      throw ValidationError("Wolfram shorthand requires binary states");
    }
    return RuleTable::from_wolfram(*wolfram, arity);
  }
  RuleTable table(k, arity);
  for (const auto& [key, output] : entries) {
    table.define(key_from_string(key, arity), output);
  }
  return table;
}

void write_adaptation_log(std::ostream& out,
                          const std::vector<AdaptationRecord>& log) {
  for (const AdaptationRecord& r : log) {
    out << r.iteration << ' ' << std::setprecision(17) << r.loss << ' '
        << (r.accepted ? 1 : 0) << ' '
        << (r.candidate.empty() ? "-" : r.candidate) << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  Dataset dataset;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::size_t bar = line.find('|');
    if (bar == std::string::npos) {
      throw ValidationError("dataset line '" + line +
                            "' has no 'inputs | targets' separator");
    }
    const auto parse = [](const std::string& text) {
      std::vector<double> values;
      std::stringstream ss(text);
      double v = 0.0;
      while (ss >> v) values.push_back(v);
      return values;
    };
    auto inputs = parse(line.substr(0, bar));
    auto targets = parse(line.substr(bar + 1));
    if (inputs.empty() || targets.empty()) {
      throw ValidationError("dataset line '" + line +
                            "' is missing inputs or targets");
    }
    dataset.emplace_back(std::move(inputs), std::move(targets));
  }
  return dataset;
}

Dataset load_dataset_file(const std::filesystem::path& path) {
  std::stringstream ss(read_text_file(path));
  return read_dataset(ss);
}

namespace {

std::string structural_verdict_name(StructuralVerdict v) {
  switch (v) {
    case StructuralVerdict::Matched: return "matched";
    case StructuralVerdict::Mismatched: return "mismatched";
    case StructuralVerdict::MissingInLeft: return "missing-in-left";
    case StructuralVerdict::MissingInRight: return "missing-in-right";
  }
  return "unknown";
}

std::string operational_verdict_name(OperationalVerdict v) {
  switch (v) {
    case OperationalVerdict::ExtensionallyEqual: return "extensionally-equal";
    case OperationalVerdict::Counterexample: return "counterexample";
    case OperationalVerdict::MissingInLeft: return "missing-in-left";
    case OperationalVerdict::MissingInRight: return "missing-in-right";
    case OperationalVerdict::Mismatched: return "mismatched";
  }
  return "unknown";
}

}  // namespace

json report_to_json(const EquivalenceReport& report) {
  json structural = json::array();
  for (const StructuralEntry& e : report.structural) {
    structural.push_back(json{{"kind", e.kind},
                              {"verdict", structural_verdict_name(e.verdict)},
                              {"detail", e.detail}});
  }
  json operational = json::array();
  for (const OperationalEntry& e : report.operational) {
    json entry{{"kind", e.kind},
               {"verdict", operational_verdict_name(e.verdict)},
               {"detail", e.detail}};
    if (e.verdict == OperationalVerdict::ExtensionallyEqual) {
      entry["checked"] = e.checked;
      entry["sampled"] = e.sampled;
    }
    if (e.verdict == OperationalVerdict::Counterexample) {
      entry["counterexample"] = json{{"input", e.counterexample_input},
                                     {"left", e.left_output},
                                     {"right", e.right_output}};
    }
    operational.push_back(std::move(entry));
  }
  return json{{"conclusion", std::string(to_string(report.conclusion))},
              {"conditions", report.conditions},
              {"structural", std::move(structural)},
              {"operational", std::move(operational)}};
}

void write_report_table(std::ostream& out, const EquivalenceReport& report) {
  out << "structural:\n";
  for (const StructuralEntry& e : report.structural) {
    out << "  " << std::left << std::setw(18) << e.kind << ' '
        << std::setw(20) << structural_verdict_name(e.verdict) << ' '
        << e.detail << '\n';
  }
  out << "operational:\n";
  for (const OperationalEntry& e : report.operational) {
    out << "  " << std::left << std::setw(18) << e.kind << ' '
        << std::setw(20) << operational_verdict_name(e.verdict) << ' ';
    if (e.verdict == OperationalVerdict::ExtensionallyEqual) {
      out << "checked=" << e.checked << (e.sampled ? " sampled" : " exhaustive");
      if (!e.detail.empty()) out << " (" << e.detail << ")";
    } else if (e.verdict == OperationalVerdict::Counterexample) {
      out << "input=(";
      for (std::size_t i = 0; i < e.counterexample_input.size(); ++i) {
        if (i > 0) out << ',';
        out << std::setprecision(17) << e.counterexample_input[i];
      }
      out << ") left=" << e.left_output << " right=" << e.right_output;
      if (!e.detail.empty()) out << " (" << e.detail << ")";
    } else {
      out << e.detail;
    }
    out << '\n';
  }
  out << "conclusion: " << to_string(report.conclusion) << '\n';
  if (!report.conditions.empty()) {
    out << "conditions:";
    for (const std::string& c : report.conditions) out << ' ' << c << ';';
    out << '\n';
  }
}

void write_pbm(std::ostream& out, std::span<const double> bits,
               std::size_t width, std::size_t height) {
  if (bits.size() != width * height) {
    throw DimensionError("bitmap size does not match width x height");
  }
  out << "P1\n" << width << ' ' << height << '\n';
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c > 0) out << ' ';
      out << (bits[r * width + c] != 0.0 ? 1 : 0);
    }
    out << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << content;
}

}  // namespace metamodel
