#include "metamodel/system_model.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {

bool is_known_structure_kind(std::string_view k) {
  static constexpr std::array<std::string_view, 6> kinds = {
      kind::entities,        kind::states,           kind::milieus,
      kind::update_rules,    kind::adaptation_rules, kind::adaptation_end};
  return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
}

bool is_known_operation_kind(std::string_view k) {
  return k == kind::update_fn || k == kind::adaptation_fn;
}

bool is_known_adaptation_fn(std::string_view id) {
  return id == "evolve-rules" || id == "perceptron" || id == "sgd-backprop";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Virtual: return "virtual";
    case Regime::Metastable: return "metastable";
    case Regime::Actual: return "actual";
  }
  return "unknown";
}

Regime regime_from_string(std::string_view name) {
  if (name == "virtual") return Regime::Virtual;
  if (name == "metastable") return Regime::Metastable;
  if (name == "actual") return Regime::Actual;
  throw ValidationError("unknown regime '" + std::string(name) + "'");
}

namespace {

void check_kind_list(const std::vector<std::string>& kinds, const char* what) {
  if (kinds.empty()) {
    throw ConstraintError(std::string("a system needs at least one ") + what +
                          " (s, o >= 1)");
  }
  std::set<std::string> seen;
  for (const auto& k : kinds) {
    if (k.empty()) {
      throw ConstraintError(std::string("empty ") + what + " kind");
    }
    if (!seen.insert(k).second) {
      throw ConstraintError(std::string("duplicate ") + what + " kind '" + k +
                            "'");
    }
  }
}

/// Checks that a declared kind has a concrete binding in the
/// parameters; throws BindingError naming the kind otherwise.
void check_structure_binding(const std::string& k,
                             const ConcreteParameters& p) {
  if (k == kind::entities || k == kind::states || k == kind::milieus) {
    return;  // always bound once the parameters validate
  }
  if (k == kind::update_rules) {
    if (!p.rules.update_table) {
      throw BindingError("declared structure 'update-rules' has no bound "
                         "rule table");
    }
    return;
  }
  if (k == kind::adaptation_rules) {
    if (p.rules.adaptation_rules.empty()) {
      throw BindingError("declared structure 'adaptation-rules' has no bound "
                         "rule entries");
    }
    return;
  }
  if (k == kind::adaptation_end) {
    if (!p.adaptation_end) {
      throw BindingError("declared structure 'adaptation-end' has no bound "
                         "target tuple");
    }
    return;
  }
  if (!p.extras.count(k)) {
    throw BindingError("declared structure '" + k + "' has no binding");
  }
}

void check_operation_binding(const std::string& k,
                             const ConcreteParameters& p) {
  if (k == kind::update_fn) {
    if (!UpdateRegistry::instance().known(p.update_fn_id)) {
      throw BindingError("update function id '" + p.update_fn_id +
                         "' is not registered");
    }
    return;
  }
  if (k == kind::adaptation_fn) {
    if (!p.adaptation_fn_id) {
      throw BindingError("declared operation 'adaptation-fn' has no bound "
                         "function id");
    }
    if (!is_known_adaptation_fn(*p.adaptation_fn_id)) {
      throw BindingError("adaptation function id '" + *p.adaptation_fn_id +
                         "' is not registered");
    }
    return;
  }
  if (!p.extras.count(k)) {
    throw BindingError("declared operation '" + k + "' has no binding");
  }
}

double boundary_state(const StateSet& states) {
  return states.is_finite() ? states.value_at(0) : states.lo();
}

}  // namespace

SystemModel SystemModel::make_virtual(
    std::vector<std::string> structure_kinds,
    std::vector<std::string> operation_kinds) {
  check_kind_list(structure_kinds, "structure");
  check_kind_list(operation_kinds, "operation");
  SystemModel model;
  model.regime_ = Regime::Virtual;
  model.structures_ = std::move(structure_kinds);
  model.operations_ = std::move(operation_kinds);
  return model;
}

SystemModel SystemModel::concretize(ConcreteParameters params) const {
  if (regime_ != Regime::Virtual) {
    throw RegimeError("only a virtual model can be concretized (regime is " +
                      std::string(to_string(regime_)) + ")");
  }
  params.validate();
  for (const auto& k : structures_) check_structure_binding(k, params);
  for (const auto& k : operations_) check_operation_binding(k, params);

  SystemModel model = *this;
  model.regime_ = Regime::Metastable;
  model.phi_ = UpdateRegistry::instance().bind(params);
  model.params_ = std::move(params);
  return model;
}

SystemModel SystemModel::step() const {
  if (regime_ == Regime::Virtual) {
    throw RegimeError("a virtual model cannot step; concretize it first");
  }
  const ConcreteParameters& p = *params_;
  const Entities& snapshot = current_states();
  const long t_bar = current_step();

  Entities next(snapshot.size());
  std::vector<double> milieu_states;
  for (std::size_t i = 0; i < snapshot.size(); ++i) {
    const Milieu& neighbours = p.milieus[i];
    milieu_states.resize(neighbours.size());
    for (std::size_t j = 0; j < neighbours.size(); ++j) {
      milieu_states[j] = neighbours[j] < 0
                             ? boundary_state(p.state_set)
                             : snapshot[static_cast<std::size_t>(neighbours[j])];
    }
    next[i] = phi_(UpdateInput{static_cast<int>(i), snapshot[i],
                               milieu_states, t_bar});
  }

  SystemModel out = *this;
  if (!out.trajectory_) {
    out.trajectory_ = Trajectory{{snapshot}, {}};
  }
  out.trajectory_->rows.push_back(std::move(next));
  out.regime_ = Regime::Actual;
  return out;
}

SystemModel SystemModel::actualize(long steps) const {
  if (regime_ != Regime::Metastable) {
    throw RegimeError("only a metastable model can be actualized (regime is " +
                      std::string(to_string(regime_)) + ")");
  }
  if (steps < 1) {
    throw PreconditionError("actualize needs t >= 1 time steps");
  }
  SystemModel model = *this;
  for (long t = 0; t < steps; ++t) {
    try {
      model = model.step();
    } catch (const UndefinedTransitionError& e) {
      throw UndefinedTransitionError(std::string(e.what()) +
                                     " (at time step " + std::to_string(t) +
                                     ")");
    }
  }
  return model;
}

bool SystemModel::declares_structure(std::string_view k) const {
  return std::find(structures_.begin(), structures_.end(), k) !=
         structures_.end();
}

bool SystemModel::declares_operation(std::string_view k) const {
  return std::find(operations_.begin(), operations_.end(), k) !=
         operations_.end();
}

const ConcreteParameters& SystemModel::params() const {
  if (!params_) {
    throw RegimeError("a virtual model has no concrete parameters");
  }
  return *params_;
}

const Trajectory& SystemModel::trajectory() const {
  if (!trajectory_) {
    throw RegimeError("the model has not been executed; no trajectory");
  }
  return *trajectory_;
}

const Entities& SystemModel::current_states() const {
  if (trajectory_) return trajectory_->rows.back();
  return params().initial_states;
}

long SystemModel::current_step() const {
  return trajectory_ ? static_cast<long>(trajectory_->rows.size()) - 1 : 0;
}

const UpdateFunction& SystemModel::update_function() const {
  if (!phi_) {
    throw RegimeError("no update function bound; the model is virtual");
  }
  return phi_;
}

SystemModel SystemModel::with_update_table(RuleTable table) const {
  if (regime_ != Regime::Metastable) {
    throw RegimeError("rule tables can only be swapped on a metastable model");
  }
  ConcreteParameters p = *params_;
  p.rules.update_table = std::move(table);
  p.validate();
  SystemModel out = *this;
  out.phi_ = UpdateRegistry::instance().bind(p);
  out.params_ = std::move(p);
  return out;
}

SystemModel SystemModel::restore(Regime regime,
                                 std::vector<std::string> structure_kinds,
                                 std::vector<std::string> operation_kinds,
                                 std::optional<ConcreteParameters> params,
                                 std::optional<Trajectory> trajectory) {
  SystemModel model =
      make_virtual(std::move(structure_kinds), std::move(operation_kinds));
  if (regime == Regime::Virtual) {
    if (params || trajectory) {
      throw ValidationError(
          "a virtual model carries no parameters or trajectory");
    }
    return model;
  }
  if (!params) {
    throw ValidationError("a " + std::string(to_string(regime)) +
                          " model needs concrete parameters");
  }
  model = model.concretize(std::move(*params));
  if (regime == Regime::Metastable) {
    if (trajectory) {
      throw ValidationError("a metastable model carries no trajectory");
    }
    return model;
  }
  if (!trajectory || trajectory->rows.size() < 2) {
    throw ValidationError("an actual model needs a trajectory with at least "
                          "two rows");
  }
  if (trajectory->rows.front() != model.params().initial_states) {
    throw ValidationError(
        "trajectory row 0 does not match the initial entity tuple");
  }
  const std::size_t e = model.params().entity_count();
  for (const Entities& row : trajectory->rows) {
    if (row.size() != e) {
      throw ValidationError("trajectory row length does not match the "
                            "entity count");
    }
  }
  model.trajectory_ = std::move(*trajectory);
  model.regime_ = Regime::Actual;
  return model;
}

}  // namespace metamodel
