#include "awn/signature.hpp"

namespace awn {

Signature Signature::builtin() {
  Signature s;
  s.add_sort({sorts::Bool(), SortKind::Bool, {}, {}, {}});
  s.add_sort({sorts::Nat(), SortKind::Nat, {}, {}, {}});
  s.add_sort({sorts::Data(), SortKind::Atom, {}, {}, {}});
  s.add_sort({sorts::Msg(), SortKind::Data, {}, {}, {}});
  s.add_sort({sorts::Ip(), SortKind::Atom, {}, {}, {}});
  s.add_sort({sorts::SetIp(), SortKind::Set, sorts::Ip(), {}, {}});
  s.add_operator({"newpkt"_sym, {sorts::Data(), sorts::Ip()}, sorts::Msg(), true, {}});
  return s;
}

void Signature::add_sort(SortInfo info) {
  auto it = sorts_.find(info.name);
  if (it != sorts_.end()) {
    const auto& old = it->second;
    if (old.kind != info.kind || old.elem != info.elem || old.key != info.key || old.val != info.val)
      throw SignatureError("sort " + info.name.str() + " redeclared with a different shape");
    return;
  }
  sorts_.emplace(info.name, info);
}

const SortInfo* Signature::sort(Symbol name) const {
  auto it = sorts_.find(name);
  return it == sorts_.end() ? nullptr : &it->second;
}

bool Signature::is_numeric(Symbol s) const {
  const auto* info = sort(s);
  return info && info->kind == SortKind::Nat;
}

std::optional<Symbol> Signature::set_sort_of(Symbol elem) const {
  for (const auto& [name, info] : sorts_)
    if (info.kind == SortKind::Set && info.elem == elem) return name;
  return std::nullopt;
}

std::optional<Symbol> Signature::seq_sort_of(Symbol elem) const {
  for (const auto& [name, info] : sorts_)
    if (info.kind == SortKind::Seq && info.elem == elem) return name;
  return std::nullopt;
}

Value Signature::add_constant(Symbol name, Symbol s) {
  const auto* info = sort(s);
  if (!info) throw SignatureError("unknown sort " + s.str());
  if (info->kind != SortKind::Atom && info->kind != SortKind::Enum)
    throw SignatureError("constants must have an atom sort, got " + s.str());
  if (vars_.count(name)) throw SignatureError(name.str() + " is already a variable");
  auto it = constants_.find(name);
  if (it != constants_.end()) {
    if (it->second.sort() != s)
      throw SignatureError("constant " + name.str() + " already declared with sort " +
                           it->second.sort().str());
    return it->second;
  }
  Value v = Value::atom(s, name);
  constants_.emplace(name, v);
  const_order_.push_back(v);
  return v;
}

const Value* Signature::constant(Symbol name) const {
  auto it = constants_.find(name);
  return it == constants_.end() ? nullptr : &it->second;
}

void Signature::declare_var(Symbol name, Symbol s) {
  if (!sort(s)) throw SignatureError("unknown sort " + s.str());
  if (constants_.count(name)) throw SignatureError(name.str() + " is already a constant");
  auto [it, inserted] = vars_.emplace(name, s);
  if (!inserted && it->second != s)
    throw SignatureError("variable " + name.str() + " already declared with sort " + it->second.str());
}

std::optional<Symbol> Signature::var_sort(Symbol name) const {
  auto it = vars_.find(name);
  if (it == vars_.end()) return std::nullopt;
  return it->second;
}

void Signature::add_operator(Operator op) {
  for (Symbol p : op.params)
    if (!sort(p)) throw SignatureError("operator " + op.name.str() + ": unknown sort " + p.str());
  if (!sort(op.result))
    throw SignatureError("operator " + op.name.str() + ": unknown sort " + op.result.str());
  if (ops_.count(op.name)) throw SignatureError("operator " + op.name.str() + " declared twice");
  ops_.emplace(op.name, std::move(op));
}

const Operator* Signature::op(Symbol name) const {
  auto it = ops_.find(name);
  return it == ops_.end() ? nullptr : &it->second;
}

std::optional<std::vector<Value>> Signature::domain(Symbol s) const {
  const auto* info = sort(s);
  if (!info) return std::nullopt;
  switch (info->kind) {
    case SortKind::Bool:
      return std::vector<Value>{Value::boolean(false), Value::boolean(true)};
    case SortKind::Atom:
    case SortKind::Enum: {
      std::vector<Value> out;
      for (const auto& v : const_order_)
        if (v.sort() == s) out.push_back(v);
      return out;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace awn
