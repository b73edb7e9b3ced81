#include "metamodel/state_set.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "metamodel/errors.hpp"

namespace metamodel {

StateSet::StateSet() : kind_(Kind::Finite), values_{0, 1} {}

StateSet StateSet::finite(std::vector<int> values) {
  if (values.empty()) {
    throw ConstraintError("a finite state set needs at least one state");
  }
  std::unordered_set<int> seen;
  for (int v : values) {
    if (!seen.insert(v).second) {
      throw ConstraintError("finite state set contains duplicate state " +
                            std::to_string(v));
    }
  }
  StateSet s;
  s.kind_ = Kind::Finite;
  s.values_ = std::move(values);
  return s;
}

StateSet StateSet::interval(double lo, double hi) {
  if (!(lo <= hi)) {
    throw ConstraintError("state interval requires lo <= hi");
  }
  StateSet s;
  s.kind_ = Kind::Interval;
  s.values_.clear();
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

std::size_t StateSet::count() const {
  if (!is_finite()) {
    throw DomainError("state count k is defined for finite state sets only");
  }
  return values_.size();
}

const std::vector<int>& StateSet::values() const {
  if (!is_finite()) {
    throw DomainError("an interval state set has no value list");
  }
  return values_;
}

double StateSet::lo() const {
  if (is_finite()) {
    throw DomainError("a finite state set has no interval bounds");
  }
  return lo_;
}

double StateSet::hi() const {
  if (is_finite()) {
    throw DomainError("a finite state set has no interval bounds");
  }
  return hi_;
}

bool StateSet::contains(double state) const noexcept {
  if (is_finite()) {
    for (int v : values_) {
      if (static_cast<double>(v) == state) return true;
    }
    return false;
  }
  return lo_ <= state && state <= hi_;
}

int StateSet::index_of(double state) const {
  if (!is_finite()) {
    throw DomainError("state digits are defined for finite state sets only");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (static_cast<double>(values_[i]) == state) return static_cast<int>(i);
  }
  throw ValidationError("state " + std::to_string(state) +
                        " is not a member of the state set");
}

double StateSet::value_at(int digit) const {
  if (!is_finite()) {
    throw DomainError("state digits are defined for finite state sets only");
  }
  if (digit < 0 || static_cast<std::size_t>(digit) >= values_.size()) {
    throw RangeError("state digit " + std::to_string(digit) +
                     " out of range");
  }
  return static_cast<double>(values_[digit]);
}

}  // namespace metamodel
