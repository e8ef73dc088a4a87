#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

using Value = int;
using VarIndex = std::uint32_t;

// Marks "no override" in dense intervention buffers.
inline constexpr Value kUnset = std::numeric_limits<Value>::min();

struct VarRef {
  enum class Kind : std::uint8_t { Exogenous, Endogenous };
  Kind kind = Kind::Endogenous;
  VarIndex index = 0;

  static VarRef exogenous(VarIndex i) { return {Kind::Exogenous, i}; }
  static VarRef endogenous(VarIndex i) { return {Kind::Endogenous, i}; }
  bool is_exogenous() const { return kind == Kind::Exogenous; }

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

// One endogenous variable pinned to a value. Used for interventions,
// candidate causes and contingencies alike.
struct Setting {
  VarIndex var = 0;
  Value value = 0;

  friend auto operator<=>(const Setting&, const Setting&) = default;
};

class Range {
 public:
  Range() = default;
  // Throws InvalidModel unless values are nonempty and strictly increasing.
  static Range of(std::vector<Value> values);
  static Range binary() { return of({0, 1}); }

  const std::vector<Value>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool contains(Value v) const;
  Value front() const { return values_.front(); }

  friend bool operator==(const Range&, const Range&) = default;

 private:
  std::vector<Value> values_;
};

struct VariableDecl {
  std::string name;
  Range range;

  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

bool is_valid_identifier(std::string_view name);

class Signature {
 public:
  Signature() = default;
  // Validates identifiers, uniqueness across both lists, and a nonempty
  // endogenous list.
  Signature(std::vector<VariableDecl> exogenous, std::vector<VariableDecl> endogenous);

  const std::vector<VariableDecl>& exogenous() const { return exogenous_; }
  const std::vector<VariableDecl>& endogenous() const { return endogenous_; }
  std::size_t exogenous_count() const { return exogenous_.size(); }
  std::size_t endogenous_count() const { return endogenous_.size(); }

  std::optional<VarIndex> find_exogenous(std::string_view name) const;
  std::optional<VarIndex> find_endogenous(std::string_view name) const;
  // Throws UnknownVariable.
  VarIndex endogenous_index(std::string_view name) const;
  VarIndex exogenous_index(std::string_view name) const;

  const std::string& name_of(VarRef ref) const;
  const Range& range_of(VarRef ref) const;
  const std::string& endogenous_name(VarIndex i) const { return endogenous_[i].name; }
  const Range& endogenous_range(VarIndex i) const { return endogenous_[i].range; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<VariableDecl> exogenous_;
  std::vector<VariableDecl> endogenous_;
};

// Total assignment to the exogenous variables, in declaration order.
struct Context {
  std::vector<Value> values;
  friend auto operator<=>(const Context&, const Context&) = default;
};

// Total assignment to the endogenous variables, in declaration order.
struct World {
  std::vector<Value> values;
  Value operator[](VarIndex i) const { return values[i]; }
  friend auto operator<=>(const World&, const World&) = default;
};

// Calls fn(assignment) for every element of the product of the given ranges,
// odometer style with the last position varying fastest. Stops early when fn
// returns false. Returns false iff stopped early.
template <typename Fn>
bool for_each_assignment(const std::vector<const Range*>& ranges, Fn&& fn) {
  std::vector<std::size_t> digits(ranges.size(), 0);
  std::vector<Value> current(ranges.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) current[i] = ranges[i]->values()[0];
  while (true) {
    if (!fn(static_cast<const std::vector<Value>&>(current))) return false;
    std::size_t pos = ranges.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < ranges[pos]->size()) {
        current[pos] = ranges[pos]->values()[digits[pos]];
        break;
      }
      digits[pos] = 0;
      current[pos] = ranges[pos]->values()[0];
      if (pos == 0) return true;
    }
    if (ranges.empty()) return true;
  }
}

}  // namespace causal
