#pragma once

#include <string>
#include <utility>
#include <vector>

#include "awn/symbol.hpp"
#include "awn/value.hpp"

namespace awn {

// Finite partial map from variables to values, kept sorted by variable id.
class Valuation {
 public:
  using Entry = std::pair<Symbol, Value>;

  Valuation() = default;
  explicit Valuation(std::vector<Entry> entries);

  // nullptr when the variable is not evaluated.
  const Value* get(Symbol var) const;
  bool defines(Symbol var) const { return get(var) != nullptr; }
  Valuation set(Symbol var, Value v) const;
  void assign(Symbol var, Value v);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // True if every binding of *this also appears in other.
  bool subset_of(const Valuation& other) const;

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

 private:
  std::vector<Entry> entries_;
};

}  // namespace awn
