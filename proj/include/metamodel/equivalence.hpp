#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metamodel/state_set.hpp"
#include "metamodel/system_model.hpp"

namespace metamodel {

enum class StructuralVerdict { Matched, Mismatched, MissingInLeft,
                               MissingInRight };

struct StructuralEntry {
  std::string kind;
  StructuralVerdict verdict = StructuralVerdict::Matched;
  std::string detail;
};

enum class OperationalVerdict { ExtensionallyEqual, Counterexample,
                                MissingInLeft, MissingInRight, Mismatched };

struct OperationalEntry {
  std::string kind;
  OperationalVerdict verdict = OperationalVerdict::ExtensionallyEqual;
  std::size_t checked = 0;   // domain size or sample count
  bool sampled = false;      // true when equality was only sampled
  std::vector<double> counterexample_input;
  double left_output = 0.0;
  double right_output = 0.0;
  std::string detail;
};

enum class Conclusion { Equivalent, ConditionallyEquivalent, NotEquivalent };

std::string_view to_string(Conclusion conclusion);

/// Exit status for scripting: 0 equivalent, 1 conditional, 2 not.
int exit_code(Conclusion conclusion);

struct EquivalenceReport {
  std::vector<StructuralEntry> structural;
  std::vector<OperationalEntry> operational;
  Conclusion conclusion = Conclusion::Equivalent;
  std::vector<std::string> conditions;  // the missing entries
};

struct EquivalenceConfig {
  double tolerance = 1e-9;
  std::size_t enumeration_cap = std::size_t{1} << 20;
  std::size_t sample_budget = 1024;
  std::uint64_t seed = 0;
};

/// An update function viewed extensionally: a mapping from the full
/// scan-order neighbourhood tuple (self in the centre slot) to the
/// successor state.
using TupleFunction = std::function<double(std::span<const double>)>;

/// The model's bound update function as a tuple mapping for one entity.
TupleFunction update_as_tuple_function(const SystemModel& model, int entity);

/// Compares the declared structures of two concretized models: entity
/// counts, state-set extensions, milieu tuples element-wise, and the
/// presence of rule/end structures.
std::vector<StructuralEntry> check_structural(const SystemModel& left,
                                              const SystemModel& right);

/// Compares two update functions over a shared domain K^arity:
/// exhaustively in canonical (descending Wolfram) key order when the
/// domain is finite and within the enumeration cap, otherwise by seeded
/// sampling within the tolerance (the verdict is then marked sampled).
OperationalEntry check_operational(const TupleFunction& left,
                                   const TupleFunction& right,
                                   const StateSet& states, std::size_t arity,
                                   const EquivalenceConfig& cfg = {});

/// Full comparison: structural entries plus an operational verdict for
/// every operation kind either model declares. The conclusion is
/// equivalent when everything matches, conditionally equivalent when
/// the only defects are missing structures/operations (those become the
/// conditions), and not equivalent otherwise.
EquivalenceReport check_equivalence(const SystemModel& left,
                                    const SystemModel& right,
                                    const EquivalenceConfig& cfg = {});

}  // namespace metamodel
