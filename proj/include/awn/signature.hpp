#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "awn/symbol.hpp"
#include "awn/value.hpp"

namespace awn {

// Raised when evaluating a data expression fails: an unbound variable, or a
// partial operator applied outside its domain.
class EvalError : public std::runtime_error {
 public:
  enum class Kind { UnboundVariable, Undefined, UnsupportedGuard };
  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class InvalidationMode { paper, rfc_literal };

// Run-wide switches that some data operators consult.
struct DataOptions {
  InvalidationMode inv_mode = InvalidationMode::paper;
  bool intermediate_rrep = true;
};

enum class SortKind { Atom, Enum, Nat, Bool, Set, Map, Seq, Data };

struct SortInfo {
  Symbol name;
  SortKind kind = SortKind::Atom;
  Symbol elem;  // Set, Seq
  Symbol key;   // Map
  Symbol val;   // Map
};

using OperatorImpl = std::function<Value(std::span<const Value>, const DataOptions&)>;

struct Operator {
  Symbol name;
  std::vector<Symbol> params;
  Symbol result;
  bool constructor = false;
  OperatorImpl impl;  // unused for constructors
};

class Signature {
 public:
  // BOOL, NAT, DATA, MSG, IP, SET_IP and the newpkt constructor.
  static Signature builtin();

  void add_sort(SortInfo info);
  const SortInfo* sort(Symbol name) const;
  bool is_numeric(Symbol sort) const;
  // The set/seq sort over `elem`, if one has been declared.
  std::optional<Symbol> set_sort_of(Symbol elem) const;
  std::optional<Symbol> seq_sort_of(Symbol elem) const;

  // Declares an atom of an Atom or Enum sort. Redeclaring with the same sort is a no-op.
  Value add_constant(Symbol name, Symbol sort);
  const Value* constant(Symbol name) const;

  void declare_var(Symbol name, Symbol sort);
  std::optional<Symbol> var_sort(Symbol name) const;

  void add_operator(Operator op);
  const Operator* op(Symbol name) const;

  // Finite domain for guard enumeration; nullopt when the sort is not enumerable.
  std::optional<std::vector<Value>> domain(Symbol sort) const;

  const std::map<Symbol, SortInfo>& sorts() const { return sorts_; }
  const std::map<Symbol, Symbol>& vars() const { return vars_; }
  const std::map<Symbol, Operator>& ops() const { return ops_; }
  const std::vector<Value>& constants_in_order() const { return const_order_; }

 private:
  std::map<Symbol, SortInfo> sorts_;
  std::map<Symbol, Value> constants_;
  std::vector<Value> const_order_;
  std::map<Symbol, Symbol> vars_;
  std::map<Symbol, Operator> ops_;
};

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace awn
