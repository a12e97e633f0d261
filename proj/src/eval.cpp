#include "awn/eval.hpp"

#include <algorithm>

namespace awn {

namespace {

Value nat(uint64_t n) { return Value::nat(sorts::Nat(), n); }

bool member(const Value& x, const Value& coll) {
  switch (coll.kind()) {
    case ValueKind::Set: return coll.set_contains(x);
    case ValueKind::Map: return coll.map_find(x) != nullptr;
    case ValueKind::Seq: {
      auto items = coll.items();
      return std::find(items.begin(), items.end(), x) != items.end();
    }
    default: throw EvalError(EvalError::Kind::Undefined, "membership test on non-collection " + coll.str());
  }
}

Value set_op(BuiltinOp op, const Value& a, const Value& b) {
  std::vector<Value> out;
  auto xs = a.items();
  auto ys = b.items();
  switch (op) {
    case BuiltinOp::Union:
      std::set_union(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(out));
      break;
    case BuiltinOp::Inter:
      std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(out));
      break;
    default:
      std::set_difference(xs.begin(), xs.end(), ys.begin(), ys.end(), std::back_inserter(out));
      break;
  }
  return Value::set(a.sort(), std::move(out));
}

}  // namespace

Value Evaluator::eval(const Valuation& xi, ExprPtr e) const {
  switch (e->kind) {
    case ExprKind::Var: {
      const Value* v = xi.get(e->name);
      if (!v) throw EvalError(EvalError::Kind::UnboundVariable, "unbound variable " + e->name.str());
      return *v;
    }
    case ExprKind::Lit: return e->lit;
    case ExprKind::SetLit: {
      std::vector<Value> xs;
      xs.reserve(e->args.size());
      for (ExprPtr a : e->args) xs.push_back(eval(xi, a));
      return Value::set(e->sort, std::move(xs));
    }
    case ExprKind::SeqLit: {
      std::vector<Value> xs;
      xs.reserve(e->args.size());
      for (ExprPtr a : e->args) xs.push_back(eval(xi, a));
      return Value::seq(e->sort, std::move(xs));
    }
    case ExprKind::MapLit: {
      std::vector<std::pair<Value, Value>> kv;
      for (std::size_t i = 0; i + 1 < e->args.size(); i += 2)
        kv.emplace_back(eval(xi, e->args[i]), eval(xi, e->args[i + 1]));
      try {
        return Value::map(e->sort, std::move(kv));
      } catch (const std::invalid_argument& ex) {
        throw EvalError(EvalError::Kind::Undefined, ex.what());
      }
    }
    case ExprKind::App: break;
  }

  const auto& args = e->args;
  switch (e->bop) {
    case BuiltinOp::None: break;
    case BuiltinOp::And: return Value::boolean(eval(xi, args[0]).as_bool() && eval(xi, args[1]).as_bool());
    case BuiltinOp::Or: return Value::boolean(eval(xi, args[0]).as_bool() || eval(xi, args[1]).as_bool());
    case BuiltinOp::Implies: return Value::boolean(!eval(xi, args[0]).as_bool() || eval(xi, args[1]).as_bool());
    case BuiltinOp::Not: return Value::boolean(!eval(xi, args[0]).as_bool());
    case BuiltinOp::Eq: return Value::boolean(eval(xi, args[0]) == eval(xi, args[1]));
    case BuiltinOp::Neq: return Value::boolean(!(eval(xi, args[0]) == eval(xi, args[1])));
    case BuiltinOp::In: return Value::boolean(member(eval(xi, args[0]), eval(xi, args[1])));
    case BuiltinOp::NotIn: return Value::boolean(!member(eval(xi, args[0]), eval(xi, args[1])));
    case BuiltinOp::Lt: return Value::boolean(eval(xi, args[0]).as_nat() < eval(xi, args[1]).as_nat());
    case BuiltinOp::Le: return Value::boolean(eval(xi, args[0]).as_nat() <= eval(xi, args[1]).as_nat());
    case BuiltinOp::Gt: return Value::boolean(eval(xi, args[0]).as_nat() > eval(xi, args[1]).as_nat());
    case BuiltinOp::Ge: return Value::boolean(eval(xi, args[0]).as_nat() >= eval(xi, args[1]).as_nat());
    case BuiltinOp::Add: return nat(eval(xi, args[0]).as_nat() + eval(xi, args[1]).as_nat());
    case BuiltinOp::Sub: {
      uint64_t a = eval(xi, args[0]).as_nat();
      uint64_t b = eval(xi, args[1]).as_nat();
      return nat(a > b ? a - b : 0);
    }
    case BuiltinOp::Union:
    case BuiltinOp::Inter:
    case BuiltinOp::Diff: return set_op(e->bop, eval(xi, args[0]), eval(xi, args[1]));
  }

  const Operator* op = sig_->op(e->name);
  if (!op) throw EvalError(EvalError::Kind::Undefined, "unknown operator " + e->name.str());
  std::vector<Value> vals;
  vals.reserve(args.size());
  for (ExprPtr a : args) vals.push_back(eval(xi, a));
  if (op->constructor) return Value::ctor(op->result, op->name, std::move(vals));
  return op->impl(vals, opts_);
}

bool Evaluator::holds(const Valuation& xi, ExprPtr phi) const { return eval(xi, phi).as_bool(); }

bool Evaluator::closed(const Valuation& xi, ExprPtr e) const {
  if (e->kind == ExprKind::Var) return xi.defines(e->name);
  for (ExprPtr a : e->args)
    if (!closed(xi, a)) return false;
  return true;
}

bool Evaluator::match(ExprPtr pattern, const Value& v, Valuation& xi) const {
  if (pattern->kind == ExprKind::Var) {
    if (const Value* bound = xi.get(pattern->name)) return *bound == v;
    auto vs = sig_->var_sort(pattern->name);
    const SortInfo* want = vs ? sig_->sort(*vs) : nullptr;
    if (want && want->kind == SortKind::Nat) {
      if (v.kind() != ValueKind::Nat) return false;
    } else if (vs && *vs != v.sort()) {
      return false;
    }
    xi.assign(pattern->name, v);
    return true;
  }
  if (closed(xi, pattern)) {
    try {
      return eval(xi, pattern) == v;
    } catch (const EvalError&) {
      return false;
    }
  }
  if (pattern->kind == ExprKind::App && pattern->bop == BuiltinOp::None) {
    const Operator* op = sig_->op(pattern->name);
    if (op && op->constructor) {
      if (v.kind() != ValueKind::Ctor || v.ctor_name() != pattern->name) return false;
      auto items = v.items();
      if (items.size() != pattern->args.size()) return false;
      for (std::size_t i = 0; i < items.size(); ++i)
        if (!match(pattern->args[i], items[i], xi)) return false;
      return true;
    }
  }
  // Not invertible: leave the variables for domain enumeration.
  return true;
}

void Evaluator::generate(const Valuation& xi, ExprPtr phi, std::vector<Valuation>& out) const {
  if (phi->kind == ExprKind::App) {
    const auto& a = phi->args;
    switch (phi->bop) {
      case BuiltinOp::And: {
        std::vector<Valuation> left;
        generate(xi, a[0], left);
        for (const auto& l : left) {
          // Prune branches whose left conjunct is already decided false.
          if (closed(l, a[0])) {
            try {
              if (!holds(l, a[0])) continue;
            } catch (const EvalError&) {
            }
          }
          generate(l, a[1], out);
        }
        return;
      }
      case BuiltinOp::Or:
        generate(xi, a[0], out);
        generate(xi, a[1], out);
        return;
      case BuiltinOp::Eq: {
        bool lc = closed(xi, a[0]);
        bool rc = closed(xi, a[1]);
        if (lc != rc) {
          ExprPtr known = lc ? a[0] : a[1];
          ExprPtr pattern = lc ? a[1] : a[0];
          Value v;
          try {
            v = eval(xi, known);
          } catch (const EvalError&) {
            out.push_back(xi);
            return;
          }
          Valuation ext = xi;
          if (match(pattern, v, ext)) out.push_back(std::move(ext));
          return;
        }
        break;
      }
      case BuiltinOp::In:
        if (!closed(xi, a[0]) && closed(xi, a[1])) {
          Value coll;
          try {
            coll = eval(xi, a[1]);
          } catch (const EvalError&) {
            out.push_back(xi);
            return;
          }
          std::vector<Value> elems;
          if (coll.kind() == ValueKind::Map)
            for (std::size_t i = 0; i < coll.map_size(); ++i) elems.push_back(coll.map_key(i));
          else
            for (const auto& x : coll.items()) elems.push_back(x);
          for (const auto& x : elems) {
            Valuation ext = xi;
            if (match(a[0], x, ext)) out.push_back(std::move(ext));
          }
          return;
        }
        break;
      default: break;
    }
  }
  out.push_back(xi);
}

namespace {

// A guard with an undefined subterm does not hold.
bool holds_defined(const Evaluator& ev, const Valuation& xi, ExprPtr phi) {
  try {
    return ev.holds(xi, phi);
  } catch (const EvalError& e) {
    if (e.kind() == EvalError::Kind::Undefined) return false;
    throw;
  }
}

}  // namespace

std::vector<Valuation> Evaluator::satisfy(const Valuation& xi, ExprPtr phi) const {
  std::vector<Symbol> missing;
  for (Symbol v : free_vars(phi))
    if (!xi.defines(v)) missing.push_back(v);
  if (missing.empty()) return holds_defined(*this, xi, phi) ? std::vector<Valuation>{xi} : std::vector<Valuation>{};

  std::vector<Valuation> candidates;
  generate(xi, phi, candidates);

  std::vector<Valuation> out;
  for (const auto& cand : candidates) {
    // Complete any variable left unbound by pattern matching over its domain.
    std::vector<Valuation> partial{cand};
    for (Symbol v : missing) {
      if (cand.defines(v)) continue;
      auto vs = sig_->var_sort(v);
      auto dom = vs ? sig_->domain(*vs) : std::nullopt;
      if (!dom)
        throw EvalError(EvalError::Kind::UnsupportedGuard,
                        "guard variable " + v.str() + " has no finite domain: " + to_string(phi));
      std::vector<Valuation> next;
      for (const auto& p : partial)
        for (const auto& d : *dom) next.push_back(p.set(v, d));
      partial = std::move(next);
    }
    for (auto& p : partial)
      if (holds_defined(*this, p, phi)) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct BindingWalker {
  std::vector<BindingViolation>& out;

  void need(ExprPtr e, const std::vector<Symbol>& bound, ProcPtr where) {
    for (Symbol v : free_vars(e))
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) out.push_back({v, to_string(where)});
  }

  void walk(ProcPtr p, std::vector<Symbol> bound) {
    auto bind = [&](Symbol v) {
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) bound.push_back(v);
    };
    switch (p->kind) {
      case ProcKind::Call:
        for (ExprPtr e : p->exprs) need(e, bound, p);
        return;
      case ProcKind::Guard:
        for (Symbol v : free_vars(p->exprs[0])) bind(v);
        walk(p->p, bound);
        return;
      case ProcKind::Assign:
        need(p->exprs[0], bound, p);
        bind(p->name);
        walk(p->p, bound);
        return;
      case ProcKind::Choice:
        walk(p->p, bound);
        walk(p->q, bound);
        return;
      case ProcKind::Receive:
        bind(p->name);
        walk(p->p, bound);
        return;
      case ProcKind::Unicast:
        for (ExprPtr e : p->exprs) need(e, bound, p);
        walk(p->p, bound);
        walk(p->q, bound);
        return;
      default:
        for (ExprPtr e : p->exprs) need(e, bound, p);
        walk(p->p, bound);
        return;
    }
  }
};

}  // namespace

std::vector<BindingViolation> check_bindings(const ProcessDefinition& def) {
  std::vector<BindingViolation> out;
  std::vector<Symbol> bound;
  for (const auto& prm : def.params) bound.push_back(prm.name);
  BindingWalker w{out};
  w.walk(def.body, bound);
  return out;
}

}  // namespace awn
