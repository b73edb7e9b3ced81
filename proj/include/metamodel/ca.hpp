#pragma once

#include "metamodel/parameters.hpp"
#include "metamodel/rule_table.hpp"
#include "metamodel/state_set.hpp"
#include "metamodel/system_model.hpp"

namespace metamodel {

enum class Boundary { Periodic, Fixed };

/// A cellular automaton: cells with states from a finite set, a
/// neighbourhood tuple per cell, and an extensional transition table.
struct CellularAutomaton {
  std::vector<int> cells;    // current cell states, values in K
  StateSet states;           // K, finite
  Milieus neighborhoods;     // neighbour indices per cell, 0-based
  RuleTable transition;      // total table over K^(n+1)

  void validate() const;
  bool operator==(const CellularAutomaton&) const = default;
};

/// Total table over {0,1}^3 in canonical Wolfram bit order: the entry
/// for (left, self, right) is bit 4*left + 2*self + right of the rule
/// number.
RuleTable elementary_rule_table(int rule_number);

/// Total table over {0,1}^9 (8 Moore neighbours + self, self in the
/// centre slot): alive next step iff a live cell has 2 or 3 live
/// neighbours or a dead cell has exactly 3.
RuleTable life_rule_table();

/// 1-D lattice neighbourhoods: cell i gets i-radius..i-1, i+1..i+radius
/// in left-to-right order, wrapped modulo c (periodic) or padded with
/// the phantom index (fixed).
Milieus ring_milieu(std::size_t cells, std::size_t radius,
                    Boundary boundary = Boundary::Periodic);

/// Toroidal 8-neighbour Moore neighbourhoods over a width x height grid
/// in row-major cell order; neighbours ordered NW, N, NE, W, E, SW, S,
/// SE.
Milieus moore_milieu(std::size_t width, std::size_t height);

/// The automaton as a system model: cells become entities, K the state
/// set, neighbourhoods the milieus, and the transition table backs the
/// bound update function (the update rules stay implicit in it). The
/// result is metastable.
SystemModel ca_to_system_model(const CellularAutomaton& ca);

/// Inverse construction; requires a model built around an explicit rule
/// table.
CellularAutomaton system_model_to_ca(const SystemModel& model);

}  // namespace metamodel
