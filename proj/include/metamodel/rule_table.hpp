#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace metamodel {

/// Extensional transition table delta : K^arity -> K over state digits
/// 0..k-1.
///
/// Keys are neighbourhood tuples in scan order: the entity's own state
/// sits in the centre slot (index arity/2) and the milieu entries fill
/// the remaining slots in their stored order. For elementary automata
/// that is (left, self, right); for a Moore neighbourhood it is the
/// raster order with the cell itself in the middle.
///
/// Entries may be left undefined while a table is being edited; looking
/// up an undefined entry throws UndefinedTransitionError.
class RuleTable {
 public:
  RuleTable(int num_states, int arity);

  int num_states() const noexcept { return k_; }
  int arity() const noexcept { return arity_; }
  std::size_t domain_size() const noexcept { return outputs_.size(); }

  std::size_t defined_count() const noexcept;
  bool total() const noexcept;

  bool defined(std::span<const int> key) const;
  int lookup(std::span<const int> key) const;
  void define(std::span<const int> key, int output);

  /// Mixed-radix position of a key (big-endian digits); key_at inverts
  /// it. Canonical (Wolfram) enumeration runs from the highest index
  /// down to 0, i.e. 111, 110, ..., 000 for the elementary case.
  std::size_t index_of(std::span<const int> key) const;
  std::vector<int> key_at(std::size_t index) const;

  /// Output digit at a key index, -1 when undefined.
  int output_at(std::size_t index) const;
  void set_output(std::size_t index, int output);

  /// Wolfram encoding: bit i of the number is the output for key index
  /// i. Available for total binary tables with at most 64 entries.
  std::optional<std::uint64_t> wolfram_number() const;
  static RuleTable from_wolfram(std::uint64_t number, int arity);

  bool operator==(const RuleTable&) const = default;

 private:
  int k_;
  int arity_;
  std::vector<int> outputs_;
};

}  // namespace metamodel
