#include "metamodel/ca.hpp"

#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {

void CellularAutomaton::validate() const {
  if (!states.is_finite()) {
    throw ValidationError("a cellular automaton needs a finite state set");
  }
  if (cells.empty()) {
    throw ValidationError("a cellular automaton needs at least one cell");
  }
  for (int c : cells) {
    if (!states.contains(c)) {
      throw ValidationError("cell state " + std::to_string(c) +
                            " is not in K");
    }
  }
  if (neighborhoods.size() != cells.size()) {
    throw ValidationError("neighbourhood tuple length does not match the "
                          "cell count");
  }
  const std::size_t n = neighborhoods.front().size();
  for (std::size_t i = 0; i < neighborhoods.size(); ++i) {
    if (neighborhoods[i].size() != n) {
      throw ValidationError("all neighbourhoods must have the same size n");
    }
    for (int idx : neighborhoods[i]) {
      if (idx < -1 || idx >= static_cast<int>(cells.size())) {
        throw ValidationError("neighbourhood index out of range");
      }
      if (idx == static_cast<int>(i)) {
        throw ValidationError("a neighbourhood never contains the cell "
                              "itself");
      }
    }
  }
  if (!transition.total()) {
    throw ValidationError("the transition table must be total");
  }
  if (transition.num_states() != static_cast<int>(states.count())) {
    throw ValidationError("transition table state count differs from |K|");
  }
  if (transition.arity() != static_cast<int>(n) + 1) {
    throw ValidationError("transition table arity must be n + 1");
  }
}

RuleTable elementary_rule_table(int rule_number) {
  if (rule_number < 0 || rule_number > 255) {
    throw RangeError("elementary rule number " + std::to_string(rule_number) +
                     " out of range [0,255]");
  }
  return RuleTable::from_wolfram(static_cast<std::uint64_t>(rule_number), 3);
}

RuleTable life_rule_table() {
  RuleTable table(2, 9);
  for (std::size_t idx = 0; idx < table.domain_size(); ++idx) {
    const std::vector<int> key = table.key_at(idx);
    const int self = key[4];
    int live = 0;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (j != 4) live += key[j];
    }
    const bool alive = self ? (live == 2 || live == 3) : (live == 3);
    table.set_output(idx, alive ? 1 : 0);
  }
  return table;
}

Milieus ring_milieu(std::size_t cells, std::size_t radius,
                    Boundary boundary) {
  if (cells < 2 * radius + 1) {
    throw SizeError("ring of " + std::to_string(cells) +
                    " cells is too small for radius " +
                    std::to_string(radius) + " (needs >= " +
                    std::to_string(2 * radius + 1) + ")");
  }
  const long c = static_cast<long>(cells);
  Milieus milieus(cells);
  for (long i = 0; i < c; ++i) {
    Milieu& nbrs = milieus[static_cast<std::size_t>(i)];
    nbrs.reserve(2 * radius);
    for (long d = -static_cast<long>(radius); d <= static_cast<long>(radius);
         ++d) {
      if (d == 0) continue;
      const long j = i + d;
      if (boundary == Boundary::Periodic) {
        nbrs.push_back(static_cast<int>(((j % c) + c) % c));
      } else {
        nbrs.push_back(j < 0 || j >= c ? -1 : static_cast<int>(j));
      }
    }
  }
  return milieus;
}

Milieus moore_milieu(std::size_t width, std::size_t height) {
  if (width < 3 || height < 3) {
    throw SizeError("Moore neighbourhoods need a grid of at least 3x3, got " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  static constexpr int offsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                        {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  const long w = static_cast<long>(width);
  const long h = static_cast<long>(height);
  Milieus milieus(width * height);
  for (long r = 0; r < h; ++r) {
    for (long col = 0; col < w; ++col) {
      Milieu& nbrs = milieus[static_cast<std::size_t>(r * w + col)];
      nbrs.reserve(8);
      for (const auto& off : offsets) {
        const long rr = ((r + off[0]) % h + h) % h;
        const long cc = ((col + off[1]) % w + w) % w;
        nbrs.push_back(static_cast<int>(rr * w + cc));
      }
    }
  }
  return milieus;
}

SystemModel ca_to_system_model(const CellularAutomaton& ca) {
  ca.validate();
  SystemModel model = SystemModel::make_virtual(
      {kind::entities, kind::states, kind::milieus}, {kind::update_fn});
  ConcreteParameters p;
  p.initial_states.assign(ca.cells.begin(), ca.cells.end());
  p.state_set = ca.states;
  p.milieus = ca.neighborhoods;
  p.rules.update_table = ca.transition;
  p.update_fn_id = "rule-table";
  return model.concretize(std::move(p));
}

CellularAutomaton system_model_to_ca(const SystemModel& model) {
  const ConcreteParameters& p = model.params();
  if (p.update_fn_id != "rule-table" || !p.rules.update_table) {
    throw CapabilityError(
        "only models bound to an explicit rule table convert to a cellular "
        "automaton");
  }
  CellularAutomaton ca{{},
                       p.state_set,
                       p.milieus,
                       *p.rules.update_table};
  ca.cells.reserve(p.initial_states.size());
  for (double s : p.initial_states) {
    ca.cells.push_back(static_cast<int>(s));
  }
  ca.validate();
  return ca;
}

}  // namespace metamodel
