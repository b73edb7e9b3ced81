#include <memory>
#include <string>
#include <vector>

#include "metamodel/ann.hpp"
#include "metamodel/errors.hpp"
#include "metamodel/system_model.hpp"

namespace metamodel {
namespace {

/// phi backed by an explicit rule table: the scan-order neighbourhood
/// tuple (self in the centre slot) is translated to state digits and
/// looked up.
UpdateFunction make_rule_table_fn(const ConcreteParameters& params) {
  if (!params.rules.update_table) {
    throw BindingError(
        "update function 'rule-table' needs an explicit rule table");
  }
  auto table = std::make_shared<const RuleTable>(*params.rules.update_table);
  const StateSet states = params.state_set;
  return [table, states](const UpdateInput& in) {
    const std::size_t m = in.milieu.size();
    std::vector<int> key(m + 1);
    const std::size_t centre = m / 2;
    for (std::size_t j = 0; j < centre; ++j) {
      key[j] = states.index_of(in.milieu[j]);
    }
    key[centre] = states.index_of(in.self);
    for (std::size_t j = centre; j < m; ++j) {
      key[j + 1] = states.index_of(in.milieu[j]);
    }
    return states.value_at(table->lookup(key));
  };
}

/// phi of a uniform threshold unit: the scan-order tuple is weighted and
/// compared against theta. Config: {"weights": [m+1 values], "theta": x}.
UpdateFunction make_threshold_unit_fn(const ConcreteParameters& params) {
  const auto& cfg = params.update_fn_config;
  if (!cfg.is_object() || !cfg.contains("weights") || !cfg.contains("theta")) {
    throw BindingError(
        "update function 'threshold-unit' needs a config with 'weights' and "
        "'theta'");
  }
  const auto weights = cfg.at("weights").get<std::vector<double>>();
  const double theta = cfg.at("theta").get<double>();
  return [weights, theta](const UpdateInput& in) {
    const std::size_t m = in.milieu.size();
    if (weights.size() != m + 1) {
      throw DimensionError("threshold unit has " +
                           std::to_string(weights.size()) +
                           " weights for a neighbourhood of size " +
                           std::to_string(m + 1));
    }
    const std::size_t centre = m / 2;
    double sum = weights[centre] * in.self;
    for (std::size_t j = 0; j < m; ++j) {
      sum += weights[j < centre ? j : j + 1] * in.milieu[j];
    }
    return sum >= theta ? 1.0 : 0.0;
  };
}

}  // namespace

UpdateRegistry::UpdateRegistry() {
  add("rule-table", make_rule_table_fn, /*entity_independent=*/true);
  add("threshold-unit", make_threshold_unit_fn, /*entity_independent=*/true);
  add("ann-forward", make_ann_forward_fn, /*entity_independent=*/false);
}

UpdateRegistry& UpdateRegistry::instance() {
  static UpdateRegistry registry;
  return registry;
}

void UpdateRegistry::add(const std::string& id, Factory factory,
                         bool entity_independent) {
  entries_[id] = Entry{std::move(factory), entity_independent};
}

bool UpdateRegistry::known(const std::string& id) const {
  return entries_.count(id) > 0;
}

bool UpdateRegistry::entity_independent(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw BindingError("update function id '" + id + "' is not registered");
  }
  return it->second.entity_independent;
}

UpdateFunction UpdateRegistry::bind(const ConcreteParameters& params) const {
  auto it = entries_.find(params.update_fn_id);
  if (it == entries_.end()) {
    throw BindingError("update function id '" + params.update_fn_id +
                       "' is not registered");
  }
  return it->second.factory(params);
}

}  // namespace metamodel
