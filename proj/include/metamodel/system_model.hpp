#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metamodel/parameters.hpp"

namespace metamodel {

/// Canonical names of the structure and operation kinds a model can
/// declare. Anything else counts as an extra structure/operation and is
/// bound through ConcreteParameters::extras.
namespace kind {
inline constexpr char entities[] = "entities";
inline constexpr char states[] = "states";
inline constexpr char milieus[] = "milieus";
inline constexpr char update_rules[] = "update-rules";
inline constexpr char adaptation_rules[] = "adaptation-rules";
inline constexpr char adaptation_end[] = "adaptation-end";
inline constexpr char update_fn[] = "update-fn";
inline constexpr char adaptation_fn[] = "adaptation-fn";
}  // namespace kind

bool is_known_structure_kind(std::string_view kind);
bool is_known_operation_kind(std::string_view kind);
bool is_known_adaptation_fn(std::string_view id);

/// Lifecycle stages: an abstract declaration, a concretely parameterized
/// model, and an executed model carrying its trajectory.
enum class Regime { Virtual, Metastable, Actual };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view name);

/// What the update function sees for one entity at one time step. All
/// reads come from the pre-step snapshot.
struct UpdateInput {
  int entity = 0;                   // 0-based entity index
  double self = 0.0;                // entity's own state at the current step
  std::span<const double> milieu;   // neighbour states in milieu order
  long step = 0;                    // current time step
};

using UpdateFunction = std::function<double(const UpdateInput&)>;

/// Registered update-function implementations, addressed by id from
/// ConcreteParameters::update_fn_id. A factory turns the parameters
/// (including update_fn_config) into a bound function once, at
/// concretization time.
class UpdateRegistry {
 public:
  using Factory = std::function<UpdateFunction(const ConcreteParameters&)>;

  static UpdateRegistry& instance();

  void add(const std::string& id, Factory factory, bool entity_independent);
  bool known(const std::string& id) const;

  /// True when the function depends only on (self, milieu states), not
  /// on the entity index. Such functions can be compared extensionally
  /// as plain mappings K^(m+1) -> K.
  bool entity_independent(const std::string& id) const;

  UpdateFunction bind(const ConcreteParameters& params) const;

 private:
  UpdateRegistry();
  struct Entry {
    Factory factory;
    bool entity_independent = false;
  };
  std::map<std::string, Entry> entries_;
};

/// A model of a system: an ordered declaration of structures and
/// operations, optionally concretized with parameters and executed into
/// a trajectory. Operations return new models; nothing mutates in
/// place.
class SystemModel {
 public:
  /// A virtual model declaring its structure and operation kinds in
  /// order. Both lists must be nonempty (s, o >= 1) and free of
  /// duplicates.
  static SystemModel make_virtual(std::vector<std::string> structure_kinds,
                                  std::vector<std::string> operation_kinds);

  /// virtual -> metastable. Validates the parameters, checks that every
  /// declared kind has a concrete binding, and binds the update
  /// function from the registry.
  SystemModel concretize(ConcreteParameters params) const;

  /// One synchronous update: every entity's next state is computed from
  /// the pre-step snapshot. metastable/actual -> actual.
  SystemModel step() const;

  /// metastable -> actual: apply step `steps` times (steps >= 1).
  SystemModel actualize(long steps) const;

  Regime regime() const noexcept { return regime_; }
  const std::vector<std::string>& declared_structures() const noexcept {
    return structures_;
  }
  const std::vector<std::string>& declared_operations() const noexcept {
    return operations_;
  }
  bool declares_structure(std::string_view kind) const;
  bool declares_operation(std::string_view kind) const;
  std::size_t structure_count() const noexcept { return structures_.size(); }
  std::size_t operation_count() const noexcept { return operations_.size(); }

  bool has_params() const noexcept { return params_.has_value(); }
  const ConcreteParameters& params() const;
  bool has_trajectory() const noexcept { return trajectory_.has_value(); }
  const Trajectory& trajectory() const;

  /// Entity tuple at the current time step (the initial tuple until the
  /// first step runs).
  const Entities& current_states() const;
  long current_step() const;

  const UpdateFunction& update_function() const;

  /// Same model with a different update table (metastable only); used
  /// by rule adaptation. Rebinds the update function.
  SystemModel with_update_table(RuleTable table) const;

  /// Reassembles a model from persisted pieces, revalidating the regime
  /// invariants. Intended for deserialization.
  static SystemModel restore(Regime regime,
                             std::vector<std::string> structure_kinds,
                             std::vector<std::string> operation_kinds,
                             std::optional<ConcreteParameters> params,
                             std::optional<Trajectory> trajectory);

 private:
  SystemModel() = default;

  Regime regime_ = Regime::Virtual;
  std::vector<std::string> structures_;
  std::vector<std::string> operations_;
  std::optional<ConcreteParameters> params_;
  std::optional<Trajectory> trajectory_;
  UpdateFunction phi_;
};

}  // namespace metamodel
