#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "awn/symbol.hpp"

namespace awn {

enum class ValueKind : uint8_t { Bool, Nat, Atom, Ctor, Set, Map, Seq };

// Immutable data value with a sort. Handles are cheap to copy and safe to
// share between threads; the hash is computed once at construction.
//
// Sets are kept sorted and duplicate-free, maps sorted by key with unique
// keys, so structural equality coincides with semantic equality.
class Value {
 public:
  Value() = default;

  static Value boolean(bool b);
  static Value nat(Symbol sort, uint64_t n);
  static Value atom(Symbol sort, Symbol name);
  static Value ctor(Symbol sort, Symbol name, std::vector<Value> args);
  static Value set(Symbol sort, std::vector<Value> elems);
  // Throws std::invalid_argument on duplicate keys.
  static Value map(Symbol sort, std::vector<std::pair<Value, Value>> entries);
  static Value seq(Symbol sort, std::vector<Value> items);

  bool is_null() const { return node_ == nullptr; }
  explicit operator bool() const { return node_ != nullptr; }

  ValueKind kind() const;
  Symbol sort() const;

  bool as_bool() const;
  uint64_t as_nat() const;
  Symbol as_atom() const;
  Symbol ctor_name() const;

  // Ctor arguments, set elements or sequence items.
  std::span<const Value> items() const;
  std::size_t size() const;

  // Map access.
  std::size_t map_size() const;
  const Value& map_key(std::size_t i) const;
  const Value& map_val(std::size_t i) const;
  const Value* map_find(const Value& key) const;

  bool set_contains(const Value& v) const;

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  struct Node;
  explicit Value(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

namespace sorts {
// Built-in sort names.
Symbol Bool();
Symbol Nat();
Symbol Data();
Symbol Msg();
Symbol Ip();
Symbol SetIp();
}  // namespace sorts

// Helpers for the ubiquitous IP-set values.
Value ip_set(std::vector<Value> ips);
Value ip_atom(Symbol name);

}  // namespace awn

template <>
struct std::hash<awn::Value> {
  std::size_t operator()(const awn::Value& v) const noexcept { return v.hash(); }
};
