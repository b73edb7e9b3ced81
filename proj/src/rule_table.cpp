#include "metamodel/rule_table.hpp"

#include <algorithm>
#include <string>

#include "metamodel/errors.hpp"

namespace metamodel {
namespace {

std::string key_to_string(std::span<const int> key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(key[i]);
  }
  out += ")";
  return out;
}

}  // namespace

RuleTable::RuleTable(int num_states, int arity) : k_(num_states), arity_(arity) {
  if (num_states < 1) throw ConstraintError("rule table needs k >= 1 states");
  if (arity < 1) throw ConstraintError("rule table needs arity >= 1");
  std::size_t size = 1;
  for (int i = 0; i < arity; ++i) {
    if (size > (std::size_t{1} << 40) / static_cast<std::size_t>(num_states)) {
      throw SizeError("rule table domain k^arity is too large");
    }
    size *= static_cast<std::size_t>(num_states);
  }
  outputs_.assign(size, -1);
}

std::size_t RuleTable::defined_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(outputs_.begin(), outputs_.end(),
                    [](int o) { return o >= 0; }));
}

bool RuleTable::total() const noexcept {
  return defined_count() == outputs_.size();
}

std::size_t RuleTable::index_of(std::span<const int> key) const {
  if (key.size() != static_cast<std::size_t>(arity_)) {
    throw DimensionError("rule table key has length " +
                         std::to_string(key.size()) + ", expected " +
                         std::to_string(arity_));
  }
  std::size_t idx = 0;
  for (int digit : key) {
    if (digit < 0 || digit >= k_) {
      throw RangeError("rule table key digit " + std::to_string(digit) +
                       " out of range [0," + std::to_string(k_ - 1) + "]");
    }
    idx = idx * static_cast<std::size_t>(k_) + static_cast<std::size_t>(digit);
  }
  return idx;
}

std::vector<int> RuleTable::key_at(std::size_t index) const {
  if (index >= outputs_.size()) {
    throw RangeError("rule table key index out of range");
  }
  std::vector<int> key(static_cast<std::size_t>(arity_));
  for (int pos = arity_ - 1; pos >= 0; --pos) {
    key[static_cast<std::size_t>(pos)] =
        static_cast<int>(index % static_cast<std::size_t>(k_));
    index /= static_cast<std::size_t>(k_);
  }
  return key;
}

bool RuleTable::defined(std::span<const int> key) const {
  return outputs_[index_of(key)] >= 0;
}

int RuleTable::lookup(std::span<const int> key) const {
  const int out = outputs_[index_of(key)];
  if (out < 0) {
    throw UndefinedTransitionError("no transition defined for neighbourhood " +
                                   key_to_string(key));
  }
  return out;
}

void RuleTable::define(std::span<const int> key, int output) {
  set_output(index_of(key), output);
}

int RuleTable::output_at(std::size_t index) const {
  if (index >= outputs_.size()) {
    throw RangeError("rule table key index out of range");
  }
  return outputs_[index];
}

void RuleTable::set_output(std::size_t index, int output) {
  if (index >= outputs_.size()) {
    throw RangeError("rule table key index out of range");
  }
  if (output < 0 || output >= k_) {
    throw RangeError("rule table output " + std::to_string(output) +
                     " out of range [0," + std::to_string(k_ - 1) + "]");
  }
  outputs_[index] = output;
}

std::optional<std::uint64_t> RuleTable::wolfram_number() const {
  if (k_ != 2 || outputs_.size() > 64 || !total()) return std::nullopt;
  std::uint64_t number = 0;
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    if (outputs_[i]) number |= std::uint64_t{1} << i;
  }
  return number;
}

RuleTable RuleTable::from_wolfram(std::uint64_t number, int arity) {
  if (arity < 1 || arity > 6) {
    throw RangeError("Wolfram encoding supports arity 1..6");
  }
  RuleTable table(2, arity);
  const std::size_t entries = table.domain_size();
  if (entries < 64 && number >= (std::uint64_t{1} << entries)) {
    throw RangeError("Wolfram number " + std::to_string(number) +
                     " out of range for " + std::to_string(entries) +
                     " table entries");
  }
  for (std::size_t i = 0; i < entries; ++i) {
    table.outputs_[i] = static_cast<int>((number >> i) & 1u);
  }
  return table;
}

}  // namespace metamodel
