#include "awn/syntax.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace awn {

namespace builtin_ops {
BuiltinOp lookup(Symbol name) {
  static const std::vector<Symbol> all = [] {
    std::vector<Symbol> v;
    for (const char* s : {And, Or, Not, Implies, Eq, Neq, In, NotIn, Lt, Le, Gt, Ge, Add, Sub, Union,
                          Inter, Diff})
      v.push_back(Symbol::intern(s));
    return v;
  }();
  auto it = std::find(all.begin(), all.end(), name);
  if (it == all.end()) return BuiltinOp::None;
  return static_cast<BuiltinOp>(1 + (it - all.begin()));
}

bool is_builtin(Symbol name) { return lookup(name) != BuiltinOp::None; }
}  // namespace builtin_ops

namespace {

template <typename Node>
class InternTable {
 public:
  template <typename Eq>
  const Node* intern(Node&& n, Eq eq) {
    std::lock_guard lock(mu_);
    auto& bucket = index_[n.hash];
    for (const Node* existing : bucket)
      if (eq(*existing, n)) return existing;
    n.id = static_cast<uint32_t>(nodes_.size() + 1);
    nodes_.push_back(std::move(n));
    bucket.push_back(&nodes_.back());
    return &nodes_.back();
  }

 private:
  std::mutex mu_;
  std::deque<Node> nodes_;
  std::unordered_map<std::size_t, std::vector<const Node*>> index_;
};

InternTable<Expr>& expr_table() {
  static InternTable<Expr> t;
  return t;
}

InternTable<Proc>& proc_table() {
  static InternTable<Proc> t;
  return t;
}

std::size_t ptr_hash(const void* p) { return std::hash<const void*>()(p); }

ExprPtr intern_expr(ExprKind kind, Symbol sort, Symbol name, Value lit, std::vector<ExprPtr> args) {
  std::size_t h = hash_combine(static_cast<std::size_t>(kind), std::hash<Symbol>()(sort));
  h = hash_combine(h, std::hash<Symbol>()(name));
  h = hash_combine(h, lit.hash());
  for (ExprPtr a : args) h = hash_combine(h, ptr_hash(a));
  BuiltinOp bop = kind == ExprKind::App ? builtin_ops::lookup(name) : BuiltinOp::None;
  Expr e{kind, sort, name, std::move(lit), std::move(args), h, bop};
  return expr_table().intern(std::move(e), [](const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.sort == b.sort && a.name == b.name && a.lit == b.lit && a.args == b.args;
  });
}

ProcPtr intern_proc(ProcKind kind, Symbol name, std::vector<ExprPtr> exprs, ProcPtr p, ProcPtr q) {
  std::size_t h = hash_combine(static_cast<std::size_t>(kind) + 101, std::hash<Symbol>()(name));
  for (ExprPtr e : exprs) h = hash_combine(h, ptr_hash(e));
  h = hash_combine(h, ptr_hash(p));
  h = hash_combine(h, ptr_hash(q));
  Proc n{kind, name, std::move(exprs), p, q, h};
  return proc_table().intern(std::move(n), [](const Proc& a, const Proc& b) {
    return a.kind == b.kind && a.name == b.name && a.exprs == b.exprs && a.p == b.p && a.q == b.q;
  });
}

}  // namespace

ExprPtr make_var(Symbol name, Symbol sort) { return intern_expr(ExprKind::Var, sort, name, {}, {}); }
ExprPtr make_lit(Value v) {
  Symbol s = v.sort();
  return intern_expr(ExprKind::Lit, s, {}, std::move(v), {});
}
ExprPtr make_app(Symbol op, Symbol sort, std::vector<ExprPtr> args) {
  return intern_expr(ExprKind::App, sort, op, {}, std::move(args));
}
ExprPtr make_set(Symbol sort, std::vector<ExprPtr> elems) {
  return intern_expr(ExprKind::SetLit, sort, {}, {}, std::move(elems));
}
ExprPtr make_map(Symbol sort, std::vector<ExprPtr> flat_pairs) {
  return intern_expr(ExprKind::MapLit, sort, {}, {}, std::move(flat_pairs));
}
ExprPtr make_seq(Symbol sort, std::vector<ExprPtr> items) {
  return intern_expr(ExprKind::SeqLit, sort, {}, {}, std::move(items));
}

ProcPtr make_call(Symbol name, std::vector<ExprPtr> args) {
  return intern_proc(ProcKind::Call, name, std::move(args), nullptr, nullptr);
}
ProcPtr make_guard(ExprPtr phi, ProcPtr p) { return intern_proc(ProcKind::Guard, {}, {phi}, p, nullptr); }
ProcPtr make_assign(Symbol var, ExprPtr e, ProcPtr p) {
  return intern_proc(ProcKind::Assign, var, {e}, p, nullptr);
}
ProcPtr make_choice(ProcPtr p, ProcPtr q) { return intern_proc(ProcKind::Choice, {}, {}, p, q); }
ProcPtr make_broadcast(ExprPtr ms, ProcPtr p) {
  return intern_proc(ProcKind::Broadcast, {}, {ms}, p, nullptr);
}
ProcPtr make_groupcast(ExprPtr dests, ExprPtr ms, ProcPtr p) {
  return intern_proc(ProcKind::Groupcast, {}, {dests, ms}, p, nullptr);
}
ProcPtr make_unicast(ExprPtr dest, ExprPtr ms, ProcPtr p, ProcPtr q) {
  return intern_proc(ProcKind::Unicast, {}, {dest, ms}, p, q);
}
ProcPtr make_send(ExprPtr ms, ProcPtr p) { return intern_proc(ProcKind::Send, {}, {ms}, p, nullptr); }
ProcPtr make_deliver(ExprPtr data, ProcPtr p) {
  return intern_proc(ProcKind::Deliver, {}, {data}, p, nullptr);
}
ProcPtr make_receive(Symbol var, ProcPtr p) { return intern_proc(ProcKind::Receive, var, {}, p, nullptr); }

void collect_free_vars(ExprPtr e, std::vector<Symbol>& out) {
  if (e->kind == ExprKind::Var) {
    if (std::find(out.begin(), out.end(), e->name) == out.end()) out.push_back(e->name);
    return;
  }
  for (ExprPtr a : e->args) collect_free_vars(a, out);
}

std::vector<Symbol> free_vars(ExprPtr e) {
  std::vector<Symbol> out;
  collect_free_vars(e, out);
  return out;
}

namespace {

int precedence(ExprPtr e) {
  if (e->kind != ExprKind::App) return 100;
  const std::string& n = e->name.str();
  if (n == builtin_ops::Implies) return 1;
  if (n == builtin_ops::Or) return 2;
  if (n == builtin_ops::And) return 3;
  if (n == builtin_ops::Not) return 4;
  if (n == builtin_ops::Eq || n == builtin_ops::Neq || n == builtin_ops::In || n == builtin_ops::NotIn ||
      n == builtin_ops::Lt || n == builtin_ops::Le || n == builtin_ops::Gt || n == builtin_ops::Ge)
    return 5;
  if (n == builtin_ops::Add || n == builtin_ops::Sub) return 6;
  return 100;
}

void print_expr(std::ostream& os, ExprPtr e);

void print_operand(std::ostream& os, ExprPtr e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << "(";
    print_expr(os, e);
    os << ")";
  } else {
    print_expr(os, e);
  }
}

void print_list(std::ostream& os, const std::vector<ExprPtr>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ", ";
    print_expr(os, xs[i]);
  }
}

void print_expr(std::ostream& os, ExprPtr e) {
  switch (e->kind) {
    case ExprKind::Var: os << e->name.str(); return;
    case ExprKind::Lit: os << e->lit.str(); return;
    case ExprKind::SetLit:
      os << "{";
      print_list(os, e->args);
      os << "}";
      return;
    case ExprKind::SeqLit:
      os << "[";
      print_list(os, e->args);
      os << "]";
      return;
    case ExprKind::MapLit:
      os << "{";
      for (std::size_t i = 0; i + 1 < e->args.size(); i += 2) {
        if (i) os << ", ";
        print_expr(os, e->args[i]);
        os << " |-> ";
        print_expr(os, e->args[i + 1]);
      }
      if (e->args.empty()) os << "|->";
      os << "}";
      return;
    case ExprKind::App: break;
  }
  int prec = precedence(e);
  if (prec == 4) {
    os << "!";
    print_operand(os, e->args[0], 5);
    return;
  }
  if (prec < 100) {
    // Binary operators. Implication is right-associative, the others left.
    bool right_assoc = prec == 1;
    bool chain = prec == 2 || prec == 3 || prec == 6;
    int lp = right_assoc ? prec + 1 : (chain ? prec : prec + 1);
    int rp = right_assoc ? prec : prec + 1;
    print_operand(os, e->args[0], lp);
    os << " " << e->name.str() << " ";
    print_operand(os, e->args[1], rp);
    return;
  }
  os << e->name.str() << "(";
  print_list(os, e->args);
  os << ")";
}

void print_proc(std::ostream& os, ProcPtr p);

// Prefix-level operand; choices and (for unicast success branches) unicasts
// are parenthesised so that re-parsing yields the same tree.
void print_prefix_operand(std::ostream& os, ProcPtr p, bool guard_unicast) {
  bool paren = p->kind == ProcKind::Choice || (guard_unicast && p->kind == ProcKind::Unicast);
  if (paren) os << "(";
  print_proc(os, p);
  if (paren) os << ")";
}

void print_proc(std::ostream& os, ProcPtr p) {
  switch (p->kind) {
    case ProcKind::Call:
      os << p->name.str() << "(";
      print_list(os, p->exprs);
      os << ")";
      return;
    case ProcKind::Guard: {
      std::ostringstream f;
      print_expr(f, p->exprs[0]);
      std::string s = f.str();
      os << "[" << (!s.empty() && s[0] == '[' ? " " : "") << s << "] ";
      print_prefix_operand(os, p->p, false);
      return;
    }
    case ProcKind::Assign:
      os << "[[" << p->name.str() << " := ";
      print_expr(os, p->exprs[0]);
      os << "]] ";
      print_prefix_operand(os, p->p, false);
      return;
    case ProcKind::Choice:
      print_proc(os, p->p);
      os << "\n  + ";
      print_proc(os, p->q);
      return;
    case ProcKind::Broadcast:
    case ProcKind::Send:
    case ProcKind::Deliver: {
      const char* kw = p->kind == ProcKind::Broadcast ? "broadcast" : p->kind == ProcKind::Send ? "send" : "deliver";
      os << kw << "(";
      print_expr(os, p->exprs[0]);
      os << ") . ";
      print_prefix_operand(os, p->p, false);
      return;
    }
    case ProcKind::Groupcast:
      os << "groupcast(";
      print_list(os, p->exprs);
      os << ") . ";
      print_prefix_operand(os, p->p, false);
      return;
    case ProcKind::Unicast:
      os << "unicast(";
      print_list(os, p->exprs);
      os << ") . ";
      print_prefix_operand(os, p->p, true);
      os << " > ";
      print_prefix_operand(os, p->q, false);
      return;
    case ProcKind::Receive:
      os << "receive(" << p->name.str() << ") . ";
      print_prefix_operand(os, p->p, false);
      return;
  }
}

}  // namespace

std::string to_string(ExprPtr e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

std::string to_string(ProcPtr p) {
  std::ostringstream os;
  print_proc(os, p);
  return os.str();
}

}  // namespace awn
