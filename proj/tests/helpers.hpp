#pragma once

#include <vector>

#include "metamodel/ann.hpp"
#include "metamodel/ca.hpp"
#include "metamodel/system_model.hpp"

namespace testutil {

/// Metastable model of an elementary CA on a periodic ring.
inline metamodel::SystemModel elementary_model(int rule,
                                               const std::vector<int>& cells,
                                               std::size_t radius = 1) {
  metamodel::CellularAutomaton ca{
      cells, metamodel::StateSet::finite({0, 1}),
      metamodel::ring_milieu(cells.size(), radius),
      metamodel::elementary_rule_table(rule)};
  return metamodel::ca_to_system_model(ca);
}

/// Metastable model of a ring of identical threshold units with a
/// self-weight: every entity applies weights to (left neighbours, self,
/// right neighbours) and fires on sum >= theta. Declares a learning
/// operation, so it plays the network side in equivalence checks.
inline metamodel::SystemModel threshold_ring_model(
    std::size_t cells, const std::vector<double>& weights, double theta) {
  using namespace metamodel;
  SystemModel model = SystemModel::make_virtual(
      {kind::entities, kind::states, kind::milieus},
      {kind::update_fn, kind::adaptation_fn});
  ConcreteParameters p;
  p.initial_states.assign(cells, 0.0);
  p.state_set = StateSet::finite({0, 1});
  p.milieus = ring_milieu(cells, (weights.size() - 1) / 2);
  p.update_fn_id = "threshold-unit";
  p.update_fn_config = {{"weights", weights}, {"theta", theta}};
  p.adaptation_fn_id = "perceptron";
  return model.concretize(std::move(p));
}

inline std::vector<double> to_states(const std::vector<int>& cells) {
  return std::vector<double>(cells.begin(), cells.end());
}

}  // namespace testutil
