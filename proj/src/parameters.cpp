#include "metamodel/parameters.hpp"

#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {

std::optional<std::size_t> ConcreteParameters::uniform_arity() const {
  if (milieus.empty()) return std::nullopt;
  const std::size_t m = milieus.front().size();
  for (const auto& neighbours : milieus) {
    if (neighbours.size() != m) return std::nullopt;
  }
  return m;
}

void ConcreteParameters::validate() const {
  const std::size_t e = initial_states.size();
  if (e == 0) {
    throw ValidationError("a concrete model needs at least one entity");
  }
  for (std::size_t i = 0; i < e; ++i) {
    if (!state_set.contains(initial_states[i])) {
      throw ValidationError("entity " + std::to_string(i + 1) + " state " +
                            std::to_string(initial_states[i]) +
                            " is not in the state set");
    }
  }
  if (milieus.size() != e) {
    throw ValidationError("milieu tuple has " + std::to_string(milieus.size()) +
                          " entries for " + std::to_string(e) + " entities");
  }
  for (std::size_t i = 0; i < e; ++i) {
    for (int idx : milieus[i]) {
      if (idx < -1 || idx >= static_cast<int>(e)) {
        throw ValidationError("milieu of entity " + std::to_string(i + 1) +
                              " references index " + std::to_string(idx + 1) +
                              " outside [1," + std::to_string(e) + "]");
      }
      if (idx == static_cast<int>(i)) {
        throw ValidationError("milieu of entity " + std::to_string(i + 1) +
                              " contains the entity itself");
      }
    }
  }
  if (rules.update_table) {
    if (!state_set.is_finite()) {
      throw ValidationError(
          "an explicit rule table requires a finite state set");
    }
    if (rules.update_table->num_states() !=
        static_cast<int>(state_set.count())) {
      throw ValidationError("rule table is over " +
                            std::to_string(rules.update_table->num_states()) +
                            " states but the state set has " +
                            std::to_string(state_set.count()));
    }
    if (auto m = uniform_arity()) {
      if (rules.update_table->arity() != static_cast<int>(*m) + 1) {
        throw ValidationError(
            "rule table arity " +
            std::to_string(rules.update_table->arity()) +
            " does not match milieu size + 1 = " + std::to_string(*m + 1));
      }
    }
  }
  if (adaptation_end) {
    if (adaptation_end->targets.empty()) {
      throw ValidationError("adaptation end needs at least one target value");
    }
    if (adaptation_end->scope == AdaptationEnd::Scope::FinalState &&
        adaptation_end->targets.size() != e) {
      throw ValidationError(
          "final-state adaptation end needs exactly one target per entity");
    }
    for (double t : adaptation_end->targets) {
      if (!state_set.contains(t)) {
        throw ValidationError("adaptation target " + std::to_string(t) +
                              " is not in the state set");
      }
    }
  }
  if (update_fn_id.empty()) {
    throw ValidationError("no update function bound (update_fn_id is empty)");
  }
  if (time_steps < 1) {
    throw ValidationError("total time steps t must be >= 1");
  }
  if (adaptation_fn_id && max_adaptations < 1) {
    throw ValidationError("adaptation iterations g must be >= 1");
  }
  if (loss_tolerance < 0.0) {
    throw ValidationError("loss tolerance l must be >= 0");
  }
}

double loss(const Entities& current, const Entities& targets,
            const StateSet& states) {
  if (current.size() != targets.size()) {
    throw DimensionError("loss over tuples of different lengths (" +
                         std::to_string(current.size()) + " vs " +
                         std::to_string(targets.size()) + ")");
  }
  const std::size_t e = current.size();
  if (e == 0) {
    throw DimensionError("loss over empty tuples");
  }
  if (states.is_finite()) {
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < e; ++i) {
      if (current[i] != targets[i]) ++mismatches;
    }
    return static_cast<double>(mismatches) / static_cast<double>(e);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < e; ++i) {
    const double d = current[i] - targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(e);
}

double loss(const Entities& current, const AdaptationEnd& end,
            const StateSet& states) {
  return loss(current, end.targets, states);
}

}  // namespace metamodel
