#include "metamodel/adaptation.hpp"

#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {
namespace {

double candidate_loss(const SystemModel& base, const RuleTable& table,
                      const AdaptationEnd& end, long t) {
  const SystemModel candidate = base.with_update_table(table);
  const SystemModel run = candidate.actualize(t);
  return loss(run.current_states(), end, base.params().state_set);
}

RuleTable mutate(const RuleTable& table, int bits, std::mt19937_64& rng) {
  RuleTable out = table;
  std::uniform_int_distribution<std::size_t> pick(0, table.domain_size() - 1);
  std::set<std::size_t> positions;
  while (positions.size() < static_cast<std::size_t>(bits)) {
    positions.insert(pick(rng));
  }
  for (std::size_t idx : positions) {
    const int current = out.output_at(idx);
    if (table.num_states() == 2) {
      out.set_output(idx, 1 - current);
    } else {
      std::uniform_int_distribution<int> other(0, table.num_states() - 2);
      int next = other(rng);
      if (next >= current) ++next;
      out.set_output(idx, next);
    }
  }
  return out;
}

/// Number of possible total tables, capped at 257 to keep the
/// arithmetic safe; the exhaustive strategy only runs under 256.
std::size_t table_space_size(const RuleTable& table) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < table.domain_size(); ++i) {
    if (count > 256) return 257;
    count *= static_cast<std::size_t>(table.num_states());
  }
  return count;
}

RuleTable table_from_ordinal(const RuleTable& shape, std::size_t ordinal) {
  RuleTable out(shape.num_states(), shape.arity());
  for (std::size_t idx = 0; idx < out.domain_size(); ++idx) {
    out.set_output(idx, static_cast<int>(
                            ordinal % static_cast<std::size_t>(
                                          shape.num_states())));
    ordinal /= static_cast<std::size_t>(shape.num_states());
  }
  return out;
}

}  // namespace

std::string rule_table_label(const RuleTable& table) {
  if (auto number = table.wolfram_number()) {
    return std::to_string(*number);
  }
  // FNV-1a over the output digits
  std::uint64_t hash = 1469598103934665603ull;
  for (std::size_t i = 0; i < table.domain_size(); ++i) {
    hash ^= static_cast<std::uint64_t>(table.output_at(i) + 1);
    hash *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "h:%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

AdaptationResult evolve_rules(const SystemModel& model,
                              const AdaptationEnd& end,
                              const AdaptationConfig& cfg, long t) {
  if (model.regime() != Regime::Metastable) {
    throw RegimeError("rule adaptation needs a metastable model");
  }
  const ConcreteParameters& p = model.params();
  if (!p.state_set.is_finite()) {
    throw CapabilityError("rule adaptation needs a finite state set");
  }
  if (!p.rules.update_table) {
    throw BindingError("rule adaptation needs an explicit update table");
  }
  if (end.targets.empty()) {
    throw BindingError("rule adaptation needs a bound adaptation end");
  }
  if (end.scope != AdaptationEnd::Scope::FinalState) {
    throw CapabilityError("only final-state adaptation ends are implemented");
  }
  if (end.targets.size() != p.entity_count()) {
    throw DimensionError("adaptation end needs one target per entity");
  }
  for (double target : end.targets) {
    if (!p.state_set.contains(target)) {
      throw ValidationError("adaptation target outside the state set");
    }
  }
  if (cfg.max_iterations < 1) {
    throw PreconditionError("adaptation needs g >= 1 iterations");
  }
  if (cfg.loss_tolerance < 0.0) {
    throw PreconditionError("loss tolerance must be >= 0");
  }
  if (t < 1) {
    throw PreconditionError("adaptation needs t >= 1 time steps");
  }

  const RuleTable& start = *p.rules.update_table;
  if (cfg.mutation_bits < 1 ||
      static_cast<std::size_t>(cfg.mutation_bits) > start.domain_size()) {
    throw PreconditionError("mutation bit count out of range");
  }

  std::vector<AdaptationRecord> log;

  if (cfg.strategy == AdaptationConfig::Strategy::Exhaustive) {
    const std::size_t space = table_space_size(start);
    if (space > 256) {
      throw CapabilityError(
          "exhaustive search is limited to rule spaces of at most 256 "
          "tables");
    }
    RuleTable best = start;
    double best_loss = 0.0;
    bool have_best = false;
    for (std::size_t ordinal = 0; ordinal < space; ++ordinal) {
      const RuleTable candidate = table_from_ordinal(start, ordinal);
      const double l = candidate_loss(model, candidate, end, t);
      const bool improved = !have_best || l < best_loss;
      log.push_back(AdaptationRecord{static_cast<long>(ordinal) + 1, l,
                                     improved, rule_table_label(candidate)});
      if (improved) {
        best = candidate;
        best_loss = l;
        have_best = true;
      }
    }
    return AdaptationResult{model.with_update_table(best), std::move(log)};
  }

  std::mt19937_64 rng(cfg.seed);
  RuleTable incumbent = start;
  double incumbent_loss = candidate_loss(model, incumbent, end, t);
  log.push_back(AdaptationRecord{0, incumbent_loss, true,
                                 rule_table_label(incumbent)});
  for (long g = 1;
       g <= cfg.max_iterations && incumbent_loss > cfg.loss_tolerance; ++g) {
    const RuleTable candidate = mutate(incumbent, cfg.mutation_bits, rng);
    const double l = candidate_loss(model, candidate, end, t);
    const bool accepted = l < incumbent_loss;
    log.push_back(
        AdaptationRecord{g, l, accepted, rule_table_label(candidate)});
    if (accepted) {
      incumbent = candidate;
      incumbent_loss = l;
    }
  }
  return AdaptationResult{model.with_update_table(incumbent), std::move(log)};
}

}  // namespace metamodel
