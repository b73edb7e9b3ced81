#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metamodel/rule_table.hpp"
#include "metamodel/state_set.hpp"

namespace metamodel {

/// Entity states, one value per entity. Finite-state values are stored
/// as exact integers widened to double.
using Entities = std::vector<double>;

/// Neighbour indices of one entity, 0-based. The entity's own index is
/// never a member. -1 marks a fixed-boundary phantom neighbour whose
/// state reads as the first declared state (0 for binary sets).
/// Serialized model files use 1-based indices with 0 for the phantom.
using Milieu = std::vector<int>;
using Milieus = std::vector<Milieu>;

/// Update rules and adaptation rules. The update rules are an explicit
/// table for finite-state models and absent when the logic lives
/// implicitly in the bound update function (e.g. network weights).
struct RuleSet {
  std::optional<RuleTable> update_table;
  std::vector<std::string> adaptation_rules;

  std::size_t update_rule_count() const {
    return update_table ? update_table->defined_count() : 0;
  }
  std::size_t adaptation_rule_count() const { return adaptation_rules.size(); }

  bool operator==(const RuleSet&) const = default;
};

/// Target the adaptation process steers towards.
struct AdaptationEnd {
  enum class Scope { FinalState, TrajectoryRow };

  Entities targets;
  Scope scope = Scope::FinalState;

  bool operator==(const AdaptationEnd&) const = default;
};

struct AdaptationRecord {
  long iteration = 0;
  double loss = 0.0;
  bool accepted = false;
  std::string candidate;  // Wolfram number or table hash; "-" for epochs
};

/// Everything needed to turn a virtual model into a metastable one.
struct ConcreteParameters {
  Entities initial_states;  // entity tuple at time step 0
  StateSet state_set;
  Milieus milieus;
  RuleSet rules;
  std::optional<AdaptationEnd> adaptation_end;

  /// Identifier of a registered update-function implementation, plus an
  /// implementation-specific configuration payload (e.g. unit weights).
  std::string update_fn_id;
  nlohmann::json update_fn_config;
  std::optional<std::string> adaptation_fn_id;

  /// Bindings for any extra declared structures or operations.
  std::map<std::string, nlohmann::json> extras;

  long time_steps = 1;       // t
  long max_adaptations = 1;  // g
  double loss_tolerance = 0.0;  // l

  std::size_t entity_count() const { return initial_states.size(); }

  /// Common milieu size m when every entity has the same number of
  /// neighbours, nullopt otherwise.
  std::optional<std::size_t> uniform_arity() const;

  /// Throws ValidationError when cross-references are inconsistent.
  void validate() const;

  bool operator==(const ConcreteParameters&) const = default;
};

struct Trajectory {
  std::vector<Entities> rows;  // rows[0] is the initial entity tuple
  std::vector<AdaptationRecord> adaptation_log;
};

/// Distance between an entity tuple and a target tuple: normalized
/// Hamming distance for finite state sets, mean squared error for
/// interval sets.
double loss(const Entities& current, const Entities& targets,
            const StateSet& states);
double loss(const Entities& current, const AdaptationEnd& end,
            const StateSet& states);

}  // namespace metamodel
