#pragma once

#include <cstddef>
#include <vector>

namespace metamodel {

/// Set of possible entity states Q. Either a finite list of distinct
/// symbolic integer states or a closed real interval [lo, hi].
///
/// Finite states are indexed by their position in the declared order;
/// rule tables operate on those positions ("digits"), not on the raw
/// values, so sets like {2, 5, 9} work the same as {0, 1, 2}.
class StateSet {
 public:
  enum class Kind { Finite, Interval };

  /// Defaults to the binary set {0, 1}.
  StateSet();

  static StateSet finite(std::vector<int> values);
  static StateSet interval(double lo, double hi);

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }

  /// Number of states k. Finite sets only.
  std::size_t count() const;
  const std::vector<int>& values() const;
  double lo() const;
  double hi() const;

  bool contains(double state) const noexcept;

  /// Digit of a finite state: its position in the declared order.
  int index_of(double state) const;
  double value_at(int digit) const;

  bool operator==(const StateSet&) const = default;

 private:
  Kind kind_ = Kind::Finite;
  std::vector<int> values_;
  double lo_ = 0.0;
  double hi_ = 0.0;
};

}  // namespace metamodel
