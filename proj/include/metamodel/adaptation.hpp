#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "metamodel/parameters.hpp"
#include "metamodel/system_model.hpp"

namespace metamodel {

/// How the adaptation function mutates and searches the rule space.
struct AdaptationConfig {
  enum class Strategy { HillClimbFirstImprovement, Exhaustive };

  long max_iterations = 1000;  // g
  double loss_tolerance = 0.0;  // l
  std::uint64_t seed = 0;
  int mutation_bits = 1;  // table entries flipped per candidate
  Strategy strategy = Strategy::HillClimbFirstImprovement;
};

struct AdaptationResult {
  SystemModel model;  // metastable, carrying the best table found
  std::vector<AdaptationRecord> log;
};

/// Adapts a finite-state model's update table towards an adaptation
/// end: every candidate is run for t steps from the initial entity
/// tuple and scored by the loss of its final row against the targets.
///
/// Hill climbing starts from the model's own table, mutates
/// mutation_bits random entries per iteration, accepts only strict
/// improvements, and stops once the loss reaches the tolerance (record
/// 0 in the log is the unmutated starting table). The exhaustive
/// strategy enumerates every possible table when there are at most 256
/// of them and returns the global best, ties broken by the smallest
/// Wolfram number.
AdaptationResult evolve_rules(const SystemModel& model,
                              const AdaptationEnd& end,
                              const AdaptationConfig& cfg, long t);

/// Log/candidate label for a table: its Wolfram number when
/// representable, otherwise a short hash of the outputs.
std::string rule_table_label(const RuleTable& table);

}  // namespace metamodel
