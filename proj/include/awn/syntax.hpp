#pragma once

#include <map>
#include <string>
#include <vector>

#include "awn/signature.hpp"
#include "awn/symbol.hpp"
#include "awn/value.hpp"

namespace awn {

// Expressions and processes are hash-consed: structurally equal terms share
// one immortal node, so pointer equality is structural equality.

enum class ExprKind : uint8_t { Var, Lit, App, SetLit, MapLit, SeqLit };

// Operators understood directly by the evaluator. Everything else is looked up
// in the signature.
enum class BuiltinOp : uint8_t {
  None,
  And,
  Or,
  Not,
  Implies,
  Eq,
  Neq,
  In,
  NotIn,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Union,
  Inter,
  Diff
};

struct Expr;
using ExprPtr = const Expr*;

struct Expr {
  ExprKind kind;
  Symbol sort;
  Symbol name;  // variable or operator name
  Value lit;
  std::vector<ExprPtr> args;  // MapLit: key,val,key,val,...
  std::size_t hash;
  BuiltinOp bop = BuiltinOp::None;
  uint32_t id = 0;  // creation order; deterministic for a fixed load sequence
};

namespace builtin_ops {
// Surface spellings of the builtin operators.
inline constexpr const char* And = "&";
inline constexpr const char* Or = "|";
inline constexpr const char* Not = "!";
inline constexpr const char* Implies = "=>";
inline constexpr const char* Eq = "=";
inline constexpr const char* Neq = "!=";
inline constexpr const char* In = "in";
inline constexpr const char* NotIn = "notin";
inline constexpr const char* Lt = "<";
inline constexpr const char* Le = "<=";
inline constexpr const char* Gt = ">";
inline constexpr const char* Ge = ">=";
inline constexpr const char* Add = "+";
inline constexpr const char* Sub = "-";
inline constexpr const char* Union = "union";
inline constexpr const char* Inter = "inter";
inline constexpr const char* Diff = "diff";
bool is_builtin(Symbol name);
BuiltinOp lookup(Symbol name);
}  // namespace builtin_ops

ExprPtr make_var(Symbol name, Symbol sort);
ExprPtr make_lit(Value v);
ExprPtr make_app(Symbol op, Symbol sort, std::vector<ExprPtr> args);
ExprPtr make_set(Symbol sort, std::vector<ExprPtr> elems);
ExprPtr make_map(Symbol sort, std::vector<ExprPtr> flat_pairs);
ExprPtr make_seq(Symbol sort, std::vector<ExprPtr> items);

enum class ProcKind : uint8_t {
  Call,
  Guard,
  Assign,
  Choice,
  Broadcast,
  Groupcast,
  Unicast,
  Send,
  Deliver,
  Receive
};

struct Proc;
using ProcPtr = const Proc*;

// Field use per kind:
//   Call       name, exprs = args
//   Guard      exprs[0] = formula, p
//   Assign     name = var, exprs[0], p
//   Choice     p, q
//   Broadcast  exprs[0] = ms, p
//   Groupcast  exprs = {dests, ms}, p
//   Unicast    exprs = {dest, ms}, p (success), q (failure)
//   Send       exprs[0], p
//   Deliver    exprs[0], p
//   Receive    name = var, p
struct Proc {
  ProcKind kind;
  Symbol name;
  std::vector<ExprPtr> exprs;
  ProcPtr p = nullptr;
  ProcPtr q = nullptr;
  std::size_t hash;
  uint32_t id = 0;  // creation order; deterministic for a fixed load sequence
};

ProcPtr make_call(Symbol name, std::vector<ExprPtr> args);
ProcPtr make_guard(ExprPtr phi, ProcPtr p);
ProcPtr make_assign(Symbol var, ExprPtr e, ProcPtr p);
ProcPtr make_choice(ProcPtr p, ProcPtr q);
ProcPtr make_broadcast(ExprPtr ms, ProcPtr p);
ProcPtr make_groupcast(ExprPtr dests, ExprPtr ms, ProcPtr p);
ProcPtr make_unicast(ExprPtr dest, ExprPtr ms, ProcPtr p, ProcPtr q);
ProcPtr make_send(ExprPtr ms, ProcPtr p);
ProcPtr make_deliver(ExprPtr data, ProcPtr p);
ProcPtr make_receive(Symbol var, ProcPtr p);

struct Param {
  Symbol name;
  Symbol sort;
};

struct ProcessDefinition {
  Symbol name;
  std::vector<Param> params;
  // Position of the ';' separator in the parameter list, if any (printing only).
  int semicolon = -1;
  ProcPtr body = nullptr;
};

// Free variables, in first-occurrence order.
std::vector<Symbol> free_vars(ExprPtr e);
void collect_free_vars(ExprPtr e, std::vector<Symbol>& out);

std::string to_string(ExprPtr e);
std::string to_string(ProcPtr p);

}  // namespace awn
