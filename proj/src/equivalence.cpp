#include "metamodel/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {

std::string_view to_string(Conclusion conclusion) {
  switch (conclusion) {
    case Conclusion::Equivalent: return "equivalent";
    case Conclusion::ConditionallyEquivalent: return "conditionally-equivalent";
    case Conclusion::NotEquivalent: return "not-equivalent";
  }
  return "unknown";
}

int exit_code(Conclusion conclusion) {
  switch (conclusion) {
    case Conclusion::Equivalent: return 0;
    case Conclusion::ConditionallyEquivalent: return 1;
    case Conclusion::NotEquivalent: return 2;
  }
  return 3;
}

namespace {

bool same_state_extension(const StateSet& a, const StateSet& b) {
  if (a.kind() != b.kind()) return false;
  if (a.is_finite()) {
    std::vector<int> av = a.values();
    std::vector<int> bv = b.values();
    std::sort(av.begin(), av.end());
    std::sort(bv.begin(), bv.end());
    return av == bv;
  }
  return a.lo() == b.lo() && a.hi() == b.hi();
}

std::string state_set_summary(const StateSet& s) {
  if (s.is_finite()) return "finite k=" + std::to_string(s.count());
  return "interval [" + std::to_string(s.lo()) + "," +
         std::to_string(s.hi()) + "]";
}

/// Kinds declared in either model, canonical kinds first, extras in
/// first-seen order.
std::vector<std::string> union_of_kinds(
    const std::vector<std::string>& canonical,
    const std::vector<std::string>& left,
    const std::vector<std::string>& right) {
  std::vector<std::string> kinds;
  const auto declared = [](const std::vector<std::string>& list,
                           const std::string& k) {
    return std::find(list.begin(), list.end(), k) != list.end();
  };
  for (const auto& k : canonical) {
    if (declared(left, k) || declared(right, k)) kinds.push_back(k);
  }
  for (const auto* list : {&left, &right}) {
    for (const auto& k : *list) {
      if (!declared(canonical, k) && !declared(kinds, k)) kinds.push_back(k);
    }
  }
  return kinds;
}

StructuralEntry compare_structure(const std::string& k,
                                  const ConcreteParameters& lp,
                                  const ConcreteParameters& rp) {
  StructuralEntry entry{k, StructuralVerdict::Matched, ""};
  if (k == kind::entities) {
    if (lp.entity_count() != rp.entity_count()) {
      entry.verdict = StructuralVerdict::Mismatched;
      entry.detail = "count " + std::to_string(lp.entity_count()) + " vs " +
                     std::to_string(rp.entity_count());
    } else {
      entry.detail = "e=" + std::to_string(lp.entity_count());
    }
    return entry;
  }
  if (k == kind::states) {
    if (lp.state_set.kind() != rp.state_set.kind()) {
      entry.verdict = StructuralVerdict::Mismatched;
      entry.detail = "kind " + state_set_summary(lp.state_set) + " vs " +
                     state_set_summary(rp.state_set);
    } else if (!same_state_extension(lp.state_set, rp.state_set)) {
      entry.verdict = StructuralVerdict::Mismatched;
      entry.detail = "extensions differ";
    } else {
      entry.detail = state_set_summary(lp.state_set);
    }
    return entry;
  }
  if (k == kind::milieus) {
    if (lp.milieus.size() != rp.milieus.size()) {
      entry.verdict = StructuralVerdict::Mismatched;
      entry.detail = "entity counts differ";
      return entry;
    }
    for (std::size_t i = 0; i < lp.milieus.size(); ++i) {
      if (lp.milieus[i] != rp.milieus[i]) {
        entry.verdict = StructuralVerdict::Mismatched;
        entry.detail = "entity " + std::to_string(i + 1);
        return entry;
      }
    }
    return entry;
  }
  // Rule structures, adaptation end, extras: both models declare and
  // bind them, which is what "same type" requires here.
  return entry;
}

std::vector<int> digits_of(std::size_t index, int k, std::size_t arity) {
  std::vector<int> digits(arity);
  for (std::size_t pos = arity; pos-- > 0;) {
    digits[pos] = static_cast<int>(index % static_cast<std::size_t>(k));
    index /= static_cast<std::size_t>(k);
  }
  return digits;
}

OperationalEntry compare_update_functions(const SystemModel& left,
                                          const SystemModel& right,
                                          const EquivalenceConfig& cfg) {
  const ConcreteParameters& lp = left.params();
  const ConcreteParameters& rp = right.params();
  OperationalEntry entry;
  entry.kind = kind::update_fn;

  if (!same_state_extension(lp.state_set, rp.state_set)) {
    entry.verdict = OperationalVerdict::Mismatched;
    entry.detail = "state sets differ (" + state_set_summary(lp.state_set) +
                   " vs " + state_set_summary(rp.state_set) + ")";
    return entry;
  }

  auto& registry = UpdateRegistry::instance();
  const bool uniform_fns = registry.entity_independent(lp.update_fn_id) &&
                           registry.entity_independent(rp.update_fn_id);
  const auto lm = lp.uniform_arity();
  const auto rm = rp.uniform_arity();

  if (uniform_fns && lm && rm) {
    if (*lm != *rm) {
      entry.verdict = OperationalVerdict::Mismatched;
      entry.detail = "milieu sizes differ (m=" + std::to_string(*lm) +
                     " vs " + std::to_string(*rm) + ")";
      return entry;
    }
    entry = check_operational(update_as_tuple_function(left, 0),
                              update_as_tuple_function(right, 0),
                              lp.state_set, *lm + 1, cfg);
    entry.kind = kind::update_fn;
    return entry;
  }

  // Entity-dependent functions: compare per entity over each entity's
  // own neighbourhood domain. That needs aligned milieus.
  if (lp.entity_count() != rp.entity_count()) {
    entry.verdict = OperationalVerdict::Mismatched;
    entry.detail = "entity counts differ";
    return entry;
  }
  if (lp.milieus != rp.milieus) {
    entry.verdict = OperationalVerdict::Mismatched;
    entry.detail = "milieu tuples differ; update functions have different "
                   "signatures";
    return entry;
  }
  std::size_t total = 0;
  bool sampled = false;
  for (std::size_t i = 0; i < lp.entity_count(); ++i) {
    OperationalEntry per =
        check_operational(update_as_tuple_function(left, static_cast<int>(i)),
                          update_as_tuple_function(right, static_cast<int>(i)),
                          lp.state_set, lp.milieus[i].size() + 1, cfg);
    if (per.verdict != OperationalVerdict::ExtensionallyEqual) {
      per.kind = kind::update_fn;
      per.detail = "at entity " + std::to_string(i + 1);
      return per;
    }
    total += per.checked;
    sampled = sampled || per.sampled;
  }
  entry.verdict = OperationalVerdict::ExtensionallyEqual;
  entry.checked = total;
  entry.sampled = sampled;
  entry.detail = "per-entity";
  return entry;
}

}  // namespace

TupleFunction update_as_tuple_function(const SystemModel& model, int entity) {
  const UpdateFunction& phi = model.update_function();
  const std::size_t m = model.params().milieus[static_cast<std::size_t>(entity)].size();
  return [phi, m, entity](std::span<const double> tuple) {
    if (tuple.size() != m + 1) {
      throw DimensionError("neighbourhood tuple has length " +
                           std::to_string(tuple.size()) + ", expected " +
                           std::to_string(m + 1));
    }
    const std::size_t centre = m / 2;
    std::vector<double> milieu;
    milieu.reserve(m);
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      if (j != centre) milieu.push_back(tuple[j]);
    }
    return phi(UpdateInput{entity, tuple[centre], milieu, 0});
  };
}

std::vector<StructuralEntry> check_structural(const SystemModel& left,
                                              const SystemModel& right) {
  if (!left.has_params() || !right.has_params()) {
    throw RegimeError("structural comparison needs concretized models");
  }
  static const std::vector<std::string> canonical = {
      kind::entities,        kind::states,        kind::milieus,
      kind::update_rules,    kind::adaptation_rules,
      kind::adaptation_end};
  std::vector<StructuralEntry> entries;
  for (const std::string& k : union_of_kinds(
           canonical, left.declared_structures(), right.declared_structures())) {
    const bool in_left = left.declares_structure(k);
    const bool in_right = right.declares_structure(k);
    if (in_left && in_right) {
      entries.push_back(compare_structure(k, left.params(), right.params()));
    } else {
      entries.push_back(StructuralEntry{
          k,
          in_left ? StructuralVerdict::MissingInRight
                  : StructuralVerdict::MissingInLeft,
          ""});
    }
  }
  return entries;
}

OperationalEntry check_operational(const TupleFunction& left,
                                   const TupleFunction& right,
                                   const StateSet& states, std::size_t arity,
                                   const EquivalenceConfig& cfg) {
  OperationalEntry entry;
  const auto compare_at = [&](std::span<const double> tuple) -> bool {
    const double l = left(tuple);
    const double r = right(tuple);
    if (std::abs(l - r) <= cfg.tolerance) return true;
    entry.verdict = OperationalVerdict::Counterexample;
    entry.counterexample_input.assign(tuple.begin(), tuple.end());
    entry.left_output = l;
    entry.right_output = r;
    return false;
  };

  if (states.is_finite()) {
    const int k = static_cast<int>(states.count());
    std::size_t domain = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < arity; ++i) {
      if (domain > cfg.enumeration_cap) {
        overflow = true;
        break;
      }
      domain *= static_cast<std::size_t>(k);
    }
    if (!overflow && domain <= cfg.enumeration_cap) {
      // canonical order: highest mixed-radix index first
      std::vector<double> tuple(arity);
      for (std::size_t idx = domain; idx-- > 0;) {
        const std::vector<int> digits = digits_of(idx, k, arity);
        for (std::size_t pos = 0; pos < arity; ++pos) {
          tuple[pos] = states.value_at(digits[pos]);
        }
        if (!compare_at(tuple)) return entry;
      }
      entry.verdict = OperationalVerdict::ExtensionallyEqual;
      entry.checked = domain;
      entry.sampled = false;
      return entry;
    }
  }

  // Continuous or oversized domain: seeded sampling, never claimed
  // exhaustive.
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> tuple(arity);
  for (std::size_t n = 0; n < cfg.sample_budget; ++n) {
    if (states.is_finite()) {
      std::uniform_int_distribution<int> digit(
          0, static_cast<int>(states.count()) - 1);
      for (double& v : tuple) v = states.value_at(digit(rng));
    } else {
      std::uniform_real_distribution<double> value(states.lo(), states.hi());
      for (double& v : tuple) v = value(rng);
    }
    if (!compare_at(tuple)) {
      entry.sampled = true;
      return entry;
    }
  }
  entry.verdict = OperationalVerdict::ExtensionallyEqual;
  entry.checked = cfg.sample_budget;
  entry.sampled = true;
  return entry;
}

EquivalenceReport check_equivalence(const SystemModel& left,
                                    const SystemModel& right,
                                    const EquivalenceConfig& cfg) {
  EquivalenceReport report;
  report.structural = check_structural(left, right);

  static const std::vector<std::string> canonical = {kind::update_fn,
                                                     kind::adaptation_fn};
  for (const std::string& k : union_of_kinds(
           canonical, left.declared_operations(), right.declared_operations())) {
    const bool in_left = left.declares_operation(k);
    const bool in_right = right.declares_operation(k);
    if (!in_left || !in_right) {
      OperationalEntry entry;
      entry.kind = k;
      entry.verdict = in_left ? OperationalVerdict::MissingInRight
                              : OperationalVerdict::MissingInLeft;
      report.operational.push_back(std::move(entry));
      continue;
    }
    if (k == kind::update_fn) {
      report.operational.push_back(compare_update_functions(left, right, cfg));
      continue;
    }
    OperationalEntry entry;
    entry.kind = k;
    if (k == kind::adaptation_fn) {
      const auto& lid = left.params().adaptation_fn_id;
      const auto& rid = right.params().adaptation_fn_id;
      if (lid == rid) {
        entry.verdict = OperationalVerdict::ExtensionallyEqual;
        entry.detail = "same implementation id '" + lid.value_or("") + "'";
      } else {
        entry.verdict = OperationalVerdict::Mismatched;
        entry.detail = "implementation ids differ ('" + lid.value_or("") +
                       "' vs '" + rid.value_or("") + "')";
      }
    } else {
      // extra operations compare by their bound payloads
      const auto& le = left.params().extras.at(k);
      const auto& re = right.params().extras.at(k);
      if (le == re) {
        entry.verdict = OperationalVerdict::ExtensionallyEqual;
        entry.detail = "same bound payload";
      } else {
        entry.verdict = OperationalVerdict::Mismatched;
        entry.detail = "bound payloads differ";
      }
    }
    report.operational.push_back(std::move(entry));
  }

  bool any_defect = false;
  for (const auto& e : report.structural) {
    if (e.verdict == StructuralVerdict::Mismatched) any_defect = true;
    if (e.verdict == StructuralVerdict::MissingInLeft) {
      report.conditions.push_back(e.kind + " missing-in-left");
    } else if (e.verdict == StructuralVerdict::MissingInRight) {
      report.conditions.push_back(e.kind + " missing-in-right");
    }
  }
  for (const auto& e : report.operational) {
    if (e.verdict == OperationalVerdict::Counterexample ||
        e.verdict == OperationalVerdict::Mismatched) {
      any_defect = true;
    }
    if (e.verdict == OperationalVerdict::MissingInLeft) {
      report.conditions.push_back(e.kind + " missing-in-left");
    } else if (e.verdict == OperationalVerdict::MissingInRight) {
      report.conditions.push_back(e.kind + " missing-in-right");
    }
  }
  if (any_defect) {
    report.conclusion = Conclusion::NotEquivalent;
    report.conditions.clear();
  } else if (!report.conditions.empty()) {
    report.conclusion = Conclusion::ConditionallyEquivalent;
  } else {
    report.conclusion = Conclusion::Equivalent;
  }
  return report;
}

}  // namespace metamodel
