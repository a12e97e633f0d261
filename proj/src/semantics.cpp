#include "awn/semantics.hpp"

#include <algorithm>
#include <sstream>

namespace awn {

namespace {

constexpr int kMaxCallDepth = 64;

bool in_set(const Value& set, const Value& x) { return set.set_contains(x); }

Value set_with(const Value& set, const Value& x) {
  std::vector<Value> xs(set.items().begin(), set.items().end());
  xs.push_back(x);
  return Value::set(set.sort(), std::move(xs));
}

Value set_without(const Value& set, const Value& x) {
  std::vector<Value> xs;
  for (const auto& y : set.items())
    if (!(y == x)) xs.push_back(y);
  return Value::set(set.sort(), std::move(xs));
}

Value set_inter(const Value& a, const Value& b) {
  std::vector<Value> xs;
  for (const auto& y : a.items())
    if (b.set_contains(y)) xs.push_back(y);
  return Value::set(sorts::SetIp(), std::move(xs));
}

Value empty_ips() { return ip_set({}); }

template <class Step, class Key>
void dedupe(std::vector<Step>& steps, Key key) {
  std::stable_sort(steps.begin(), steps.end(), [&](const Step& a, const Step& b) { return key(a) < key(b); });
  steps.erase(std::unique(steps.begin(), steps.end(), [&](const Step& a, const Step& b) { return key(a) == key(b); }),
              steps.end());
}

void dedupe_seq(std::vector<SeqStep>& v) {
  dedupe(v, [](const SeqStep& s) { return std::tie(s.label, s.target, s.rule); });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const SeqStep& a, const SeqStep& b) { return a.label == b.label && a.target == b.target; }),
          v.end());
}

std::strong_ordering compare_leaves(const std::vector<SeqState>& a, const std::vector<SeqState>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  return a.size() <=> b.size();
}

void dedupe_par(std::vector<ParStep>& v) {
  std::stable_sort(v.begin(), v.end(), [](const ParStep& a, const ParStep& b) {
    if (auto c = a.label <=> b.label; c != 0) return c < 0;
    if (auto c = compare_leaves(a.leaves, b.leaves); c != 0) return c < 0;
    return a.rule < b.rule;
  });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const ParStep& a, const ParStep& b) { return a.label == b.label && a.leaves == b.leaves; }),
          v.end());
}

void dedupe_node(std::vector<NodeStep>& v) {
  std::stable_sort(v.begin(), v.end(), [](const NodeStep& a, const NodeStep& b) {
    if (auto c = a.label <=> b.label; c != 0) return c < 0;
    if (auto c = a.target <=> b.target; c != 0) return c < 0;
    return a.rule < b.rule;
  });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const NodeStep& a, const NodeStep& b) { return a.label == b.label && a.target == b.target; }),
          v.end());
}

void dedupe_net(std::vector<NetStep>& v) {
  std::stable_sort(v.begin(), v.end(), [](const NetStep& a, const NetStep& b) {
    if (auto c = a.label <=> b.label; c != 0) return c < 0;
    if (auto c = a.shown <=> b.shown; c != 0) return c < 0;
    if (auto c = a.target <=> b.target; c != 0) return c < 0;
    return a.rule < b.rule;
  });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const NetStep& a, const NetStep& b) {
                        return a.label == b.label && a.shown == b.shown && a.target == b.target;
                      }),
          v.end());
}

}  // namespace

Semantics::Semantics(const Program& prog, SemanticsOptions opts, DataOptions data)
    : prog_(&prog), opts_(opts), eval_(prog.signature(), data) {}

std::string Semantics::rule(const std::string& ctx, const std::string& leaf) const {
  return opts_.record_rules ? ctx + leaf : std::string();
}

Value Semantics::eval(const Valuation& xi, ExprPtr e) const {
  try {
    return eval_.eval(xi, e);
  } catch (const EvalError& err) {
    throw SemanticsError(std::string(err.what()) + " in " + to_string(e) + " under " + xi.str());
  }
}

const ProcessDefinition& Semantics::def_of(ProcPtr call) const {
  const ProcessDefinition* d = prog_->definition(call->name);
  if (!d) throw SemanticsError("call to undefined process " + call->name.str());
  if (d->params.size() != call->exprs.size()) throw SemanticsError("arity mismatch in call " + to_string(call));
  return *d;
}

Valuation Semantics::call_frame(const Valuation& xi, ProcPtr call) const {
  const ProcessDefinition& d = def_of(call);
  std::vector<Valuation::Entry> entries;
  entries.reserve(d.params.size());
  for (std::size_t i = 0; i < d.params.size(); ++i) entries.emplace_back(d.params[i].name, eval(xi, call->exprs[i]));
  return Valuation(std::move(entries));
}

SeqState Semantics::normalise(Valuation xi, ProcPtr p) const {
  if (p->kind == ProcKind::Call) return {call_frame(xi, p), prog_->canonical_call(p->name)};
  return {std::move(xi), p};
}

// ---------------------------------------------------------------------------
// Sequential processes

void Semantics::seq_walk(const Valuation& xi, ProcPtr p, int depth, const std::string& ctx,
                         std::vector<SeqStep>& out) const {
  switch (p->kind) {
    case ProcKind::Broadcast:
      out.push_back({Label::broadcast(eval(xi, p->exprs[0])), normalise(xi, p->p), rule(ctx, "bcast")});
      return;
    case ProcKind::Groupcast:
      out.push_back({Label::groupcast(eval(xi, p->exprs[0]), eval(xi, p->exprs[1])), normalise(xi, p->p),
                     rule(ctx, "gcast")});
      return;
    case ProcKind::Unicast: {
      Value dest = eval(xi, p->exprs[0]);
      out.push_back({Label::unicast(dest, eval(xi, p->exprs[1])), normalise(xi, p->p), rule(ctx, "ucast")});
      out.push_back({Label::neg_unicast(dest), normalise(xi, p->q), rule(ctx, "nucast")});
      return;
    }
    case ProcKind::Send:
      out.push_back({Label::send(eval(xi, p->exprs[0])), normalise(xi, p->p), rule(ctx, "send")});
      return;
    case ProcKind::Deliver:
      out.push_back({Label::deliver(eval(xi, p->exprs[0])), normalise(xi, p->p), rule(ctx, "deliver")});
      return;
    case ProcKind::Receive:
      return;
    case ProcKind::Assign:
      out.push_back({Label::tau(), normalise(xi.set(p->name, eval(xi, p->exprs[0])), p->p), rule(ctx, "assign")});
      return;
    case ProcKind::Guard: {
      std::vector<Valuation> exts;
      try {
        exts = eval_.satisfy(xi, p->exprs[0]);
      } catch (const EvalError& err) {
        throw SemanticsError(std::string(err.what()) + " under " + xi.str());
      }
      for (std::size_t k = 0; k < exts.size(); ++k)
        out.push_back({Label::tau(), normalise(std::move(exts[k]), p->p),
                       opts_.record_rules ? ctx + "guard#" + std::to_string(k) : std::string()});
      return;
    }
    case ProcKind::Choice:
      seq_walk(xi, p->p, depth, opts_.record_rules ? ctx + "+L>" : ctx, out);
      seq_walk(xi, p->q, depth, opts_.record_rules ? ctx + "+R>" : ctx, out);
      return;
    case ProcKind::Call: {
      if (depth >= kMaxCallDepth) throw SemanticsError("unguarded recursion through " + p->name.str());
      const ProcessDefinition& d = def_of(p);
      seq_walk(call_frame(xi, p), d.body, depth + 1,
               opts_.record_rules ? ctx + "call(" + p->name.str() + ")>" : ctx, out);
      return;
    }
  }
}

std::vector<SeqStep> Semantics::seq_steps(const SeqState& s) const {
  std::vector<SeqStep> out;
  seq_walk(s.xi, s.proc, 0, "", out);
  dedupe_seq(out);
  return out;
}

bool Semantics::receive_walk(ProcPtr p, int depth) const {
  switch (p->kind) {
    case ProcKind::Receive:
      return true;
    case ProcKind::Choice:
      return receive_walk(p->p, depth) || receive_walk(p->q, depth);
    case ProcKind::Call:
      if (depth >= kMaxCallDepth) throw SemanticsError("unguarded recursion through " + p->name.str());
      return receive_walk(def_of(p).body, depth + 1);
    default:
      return false;
  }
}

bool Semantics::can_receive(const SeqState& s) const { return receive_walk(s.proc, 0); }

void Semantics::recv_walk(const Valuation& xi, ProcPtr p, const Value& m, int depth, const std::string& ctx,
                          std::vector<SeqStep>& out) const {
  switch (p->kind) {
    case ProcKind::Receive:
      out.push_back({Label::receive(m), normalise(xi.set(p->name, m), p->p),
                     opts_.record_rules ? ctx + "recv[" + m.str() + "]" : std::string()});
      return;
    case ProcKind::Choice:
      recv_walk(xi, p->p, m, depth, opts_.record_rules ? ctx + "+L>" : ctx, out);
      recv_walk(xi, p->q, m, depth, opts_.record_rules ? ctx + "+R>" : ctx, out);
      return;
    case ProcKind::Call: {
      if (depth >= kMaxCallDepth) throw SemanticsError("unguarded recursion through " + p->name.str());
      const ProcessDefinition& d = def_of(p);
      if (!receive_walk(d.body, depth + 1)) return;
      recv_walk(call_frame(xi, p), d.body, m, depth + 1,
                opts_.record_rules ? ctx + "call(" + p->name.str() + ")>" : ctx, out);
      return;
    }
    default:
      return;
  }
}

std::vector<SeqStep> Semantics::seq_receive(const SeqState& s, const Value& m) const {
  std::vector<SeqStep> out;
  recv_walk(s.xi, s.proc, m, 0, "", out);
  dedupe_seq(out);
  return out;
}

std::vector<SeqStep> Semantics::step_sequential(const SeqState& s, std::span<const Value> universe) const {
  std::vector<SeqStep> out = seq_steps(s);
  for (const auto& m : universe) {
    auto r = seq_receive(s, m);
    out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  dedupe_seq(out);
  return out;
}

// ---------------------------------------------------------------------------
// Parallel processes

std::vector<ParStep> Semantics::par_steps(const ParShape& shape, const std::vector<SeqState>& leaves) const {
  std::vector<ParStep> out;
  if (shape.leaf >= 0) {
    for (auto& st : seq_steps(leaves[shape.leaf])) {
      std::vector<SeqState> next = leaves;
      next[shape.leaf] = std::move(st.target);
      out.push_back({std::move(st.label), std::move(next), std::move(st.rule)});
    }
    return out;
  }
  const bool rec = opts_.record_rules;
  for (auto& l : par_steps(*shape.left, leaves))
    out.push_back({std::move(l.label), std::move(l.leaves), rec ? "L(" + l.rule + ")" : std::string()});
  for (auto& r : par_steps(*shape.right, leaves)) {
    if (r.label.kind != LabelKind::Send) {
      out.push_back({r.label, r.leaves, rec ? "R(" + r.rule + ")" : std::string()});
      continue;
    }
    // receive(m) of the left operand against send(m) of the right one
    for (auto& l : par_receive(*shape.left, r.leaves, r.label.m))
      out.push_back({Label::tau(), std::move(l.leaves), rec ? "sync(" + l.rule + "," + r.rule + ")" : std::string()});
  }
  dedupe_par(out);
  return out;
}

bool Semantics::par_can_receive(const ParShape& shape, const std::vector<SeqState>& leaves) const {
  if (shape.leaf >= 0) return can_receive(leaves[shape.leaf]);
  return par_can_receive(*shape.right, leaves);
}

std::vector<ParStep> Semantics::par_receive(const ParShape& shape, const std::vector<SeqState>& leaves,
                                            const Value& m) const {
  std::vector<ParStep> out;
  if (shape.leaf >= 0) {
    for (auto& st : seq_receive(leaves[shape.leaf], m)) {
      std::vector<SeqState> next = leaves;
      next[shape.leaf] = std::move(st.target);
      out.push_back({std::move(st.label), std::move(next), std::move(st.rule)});
    }
    return out;
  }
  for (auto& r : par_receive(*shape.right, leaves, m))
    out.push_back({std::move(r.label), std::move(r.leaves), opts_.record_rules ? "R(" + r.rule + ")" : std::string()});
  return out;
}

std::vector<ParStep> Semantics::step_parallel(const ParShape& shape, const std::vector<SeqState>& leaves,
                                              std::span<const Value> universe) const {
  std::vector<ParStep> out = par_steps(shape, leaves);
  for (const auto& m : universe) {
    auto r = par_receive(shape, leaves, m);
    out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  }
  dedupe_par(out);
  return out;
}

// ---------------------------------------------------------------------------
// Nodes

std::vector<NodeStep> Semantics::node_steps(const NodeState& n) const {
  std::vector<NodeStep> out;
  const bool rec = opts_.record_rules;
  const Value ip = ip_atom(n.ip);
  auto with_leaves = [&](std::vector<SeqState> leaves) {
    NodeState t = n;
    t.leaves = std::move(leaves);
    t.rehash();
    return t;
  };
  for (auto& st : par_steps(*n.shape, n.leaves)) {
    switch (st.label.kind) {
      case LabelKind::Broadcast:
        out.push_back({Label::cast(n.range, st.label.m), with_leaves(std::move(st.leaves)),
                       rec ? "N.bcast(" + st.rule + ")" : std::string()});
        break;
      case LabelKind::Groupcast:
        out.push_back({Label::cast(set_inter(n.range, st.label.set1), st.label.m), with_leaves(std::move(st.leaves)),
                       rec ? "N.gcast(" + st.rule + ")" : std::string()});
        break;
      case LabelKind::Unicast:
        if (in_set(n.range, st.label.a))
          out.push_back({Label::cast(ip_set({st.label.a}), st.label.m), with_leaves(std::move(st.leaves)),
                         rec ? "N.ucast(" + st.rule + ")" : std::string()});
        break;
      case LabelKind::NegUnicast:
        if (!in_set(n.range, st.label.a))
          out.push_back({Label::tau(), with_leaves(std::move(st.leaves)), rec ? "N.nucast(" + st.rule + ")" : std::string()});
        break;
      case LabelKind::Deliver:
        out.push_back({Label::node_deliver(ip, st.label.a), with_leaves(std::move(st.leaves)),
                       rec ? "N.deliver(" + st.rule + ")" : std::string()});
        break;
      case LabelKind::Tau:
        out.push_back({Label::tau(), with_leaves(std::move(st.leaves)), rec ? "N.tau(" + st.rule + ")" : std::string()});
        break;
      default:
        // send needs a receiving partner on the same node
        break;
    }
  }
  if (opts_.connect_policy == ConnectPolicy::free) {
    for (const auto& other : ips_) {
      if (other == ip) continue;
      NodeState c = n, d = n;
      c.range = set_with(n.range, other);
      c.rehash();
      d.range = set_without(n.range, other);
      d.rehash();
      out.push_back({Label::connect(ip, other), c, rec ? "N.connect[" + other.str() + "]" : std::string()});
      out.push_back({Label::disconnect(ip, other), d, rec ? "N.disconnect[" + other.str() + "]" : std::string()});
      if (opts_.symmetric_links) {
        out.push_back({Label::connect(other, ip), std::move(c), rec ? "N.connect'[" + other.str() + "]" : std::string()});
        out.push_back({Label::disconnect(other, ip), std::move(d), rec ? "N.disconnect'[" + other.str() + "]" : std::string()});
      }
    }
    if (opts_.symmetric_links) {
      for (const auto& x : ips_)
        for (const auto& y : ips_) {
          if (x == y || x == ip || y == ip) continue;
          out.push_back({Label::connect(x, y), n, rec ? "N.connect-other[" + x.str() + "," + y.str() + "]" : std::string()});
          out.push_back({Label::disconnect(x, y), n, rec ? "N.disconnect-other[" + x.str() + "," + y.str() + "]" : std::string()});
        }
    }
  }
  dedupe_node(out);
  return out;
}

std::vector<NodeStep> Semantics::node_arrive(const NodeState& n, const Value& m, bool here) const {
  std::vector<NodeStep> out;
  const bool rec = opts_.record_rules;
  const Value ip = ip_atom(n.ip);
  if (!here) {
    out.push_back({Label::arrive(empty_ips(), ip_set({ip}), m), n, rec ? "N.disregard[" + m.str() + "]" : std::string()});
    return out;
  }
  Label lab = Label::arrive(ip_set({ip}), empty_ips(), m);
  for (auto& st : par_receive(*n.shape, n.leaves, m)) {
    NodeState t = n;
    t.leaves = std::move(st.leaves);
    t.rehash();
    out.push_back({lab, std::move(t), rec ? "N.arrive(" + st.rule + ")" : std::string()});
  }
  if (out.empty() && opts_.non_blocking && !par_can_receive(*n.shape, n.leaves))
    out.push_back({lab, n, rec ? "N.ignore[" + m.str() + "]" : std::string()});
  dedupe_node(out);
  return out;
}

std::vector<NodeStep> Semantics::step_node(const NodeState& n, std::span<const Value> universe) const {
  std::vector<NodeStep> out = node_steps(n);
  for (const auto& m : universe)
    for (bool here : {true, false}) {
      auto r = node_arrive(n, m, here);
      out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
  dedupe_node(out);
  return out;
}

std::optional<NodeState> Semantics::node_topology(const NodeState& n, const Label& ev) const {
  const bool conn = ev.kind == LabelKind::Connect;
  if (!conn && ev.kind != LabelKind::Disconnect) return std::nullopt;
  const Value ip = ip_atom(n.ip);
  auto changed = [&](const Value& other) {
    NodeState t = n;
    t.range = conn ? set_with(n.range, other) : set_without(n.range, other);
    t.rehash();
    return t;
  };
  if (ev.a == ip) return changed(ev.b);
  if (!opts_.symmetric_links) return std::nullopt;
  if (ev.b == ip) return changed(ev.a);
  return n;
}

// ---------------------------------------------------------------------------
// Networks

namespace {

struct Partial {
  Label label;
  Label shown;
  std::vector<NodeState> nodes;  // positions [lo, hi) of the subtree
  std::string rule;
};

bool is_topology(const Label& l) { return l.kind == LabelKind::Connect || l.kind == LabelKind::Disconnect; }

Value set_union_ips(const Value& a, const Value& b) {
  std::vector<Value> xs(a.items().begin(), a.items().end());
  xs.insert(xs.end(), b.items().begin(), b.items().end());
  return Value::set(sorts::SetIp(), std::move(xs));
}

class NetDeriver {
 public:
  NetDeriver(const Semantics& sem, const NetworkTerm& net, std::span<const Value> universe)
      : sem_(sem), net_(net), universe_(universe), rec_(sem.options().record_rules) {}

  std::vector<Partial> steps(const NetShape& s) const {
    if (s.node >= 0) return leaf_steps(net_.nodes[s.node]);
    auto ls = steps(*s.left);
    auto rs = steps(*s.right);
    std::vector<Partial> out;
    const bool sym = sem_.options().symmetric_links;
    auto original = [&](const NetShape& t) {
      return std::vector<NodeState>(net_.nodes.begin() + t.lo, net_.nodes.begin() + t.hi);
    };
    auto join = [](std::vector<NodeState> a, const std::vector<NodeState>& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };
    for (const auto& l : ls) {
      const LabelKind k = l.label.kind;
      if (k == LabelKind::Tau || k == LabelKind::NodeDeliver || (is_topology(l.label) && !sym)) {
        out.push_back({l.label, l.shown, join(l.nodes, original(*s.right)), rec_ ? "W.L(" + l.rule + ")" : ""});
      } else if (is_topology(l.label)) {
        for (const auto& r : rs)
          if (r.label == l.label)
            out.push_back({l.label, l.shown, join(l.nodes, r.nodes), rec_ ? "W.sync(" + l.rule + "," + r.rule + ")" : ""});
      } else if (k == LabelKind::Cast) {
        for (auto& a : arrivals(*s.right, l.label.m, l.label.set1))
          out.push_back({l.label, l.shown, join(l.nodes, a.nodes), rec_ ? "W.castL(" + l.rule + "," + a.rule + ")" : ""});
      } else if (k == LabelKind::Arrive) {
        for (const auto& r : rs)
          if (r.label.kind == LabelKind::Arrive && r.label.m == l.label.m) {
            Label merged = Label::arrive(set_union_ips(l.label.set1, r.label.set1),
                                         set_union_ips(l.label.set2, r.label.set2), l.label.m);
            out.push_back({merged, merged, join(l.nodes, r.nodes), rec_ ? "W.arrive(" + l.rule + "," + r.rule + ")" : ""});
          }
      }
    }
    for (const auto& r : rs) {
      const LabelKind k = r.label.kind;
      if (k == LabelKind::Tau || k == LabelKind::NodeDeliver || (is_topology(r.label) && !sym)) {
        out.push_back({r.label, r.shown, join(original(*s.left), r.nodes), rec_ ? "W.R(" + r.rule + ")" : ""});
      } else if (k == LabelKind::Cast) {
        for (auto& a : arrivals(*s.left, r.label.m, r.label.set1))
          out.push_back({r.label, r.shown, join(a.nodes, r.nodes), rec_ ? "W.castR(" + a.rule + "," + r.rule + ")" : ""});
      }
    }
    return out;
  }

  // The unique arrive of a subtree that synchronises with a cast to R.
  std::vector<Partial> arrivals(const NetShape& s, const Value& m, const Value& range) const {
    if (s.node >= 0) {
      const NodeState& n = net_.nodes[s.node];
      std::vector<Partial> out;
      for (auto& st : sem_.node_arrive(n, m, range.set_contains(ip_atom(n.ip))))
        out.push_back({st.label, st.label, {std::move(st.target)}, std::move(st.rule)});
      return out;
    }
    auto ls = arrivals(*s.left, m, range);
    if (ls.empty()) return {};
    auto rs = arrivals(*s.right, m, range);
    std::vector<Partial> out;
    for (const auto& l : ls)
      for (const auto& r : rs) {
        std::vector<NodeState> nodes = l.nodes;
        nodes.insert(nodes.end(), r.nodes.begin(), r.nodes.end());
        Label merged = Label::arrive(set_union_ips(l.label.set1, r.label.set1), set_union_ips(l.label.set2, r.label.set2), m);
        out.push_back({merged, merged, std::move(nodes), rec_ ? "W.arrive(" + l.rule + "," + r.rule + ")" : ""});
      }
    return out;
  }

 private:
  std::vector<Partial> leaf_steps(const NodeState& n) const {
    std::vector<Partial> out;
    const Value ip = ip_atom(n.ip);
    for (auto& st : sem_.step_node(n, universe_)) {
      Label shown = st.label.kind == LabelKind::Cast ? Label::sent_cast(ip, st.label.set1, st.label.m) : st.label;
      out.push_back({std::move(st.label), std::move(shown), {std::move(st.target)}, std::move(st.rule)});
    }
    return out;
  }

  const Semantics& sem_;
  const NetworkTerm& net_;
  std::span<const Value> universe_;
  bool rec_;
};

}  // namespace

std::vector<NetStep> Semantics::step_network(const NetworkTerm& net, std::span<const Value> universe) const {
  NetDeriver d(*this, net, universe);
  std::vector<NetStep> out;
  const bool rec = opts_.record_rules;
  for (auto& p : d.steps(*net.shape)) {
    NetworkTerm t{net.shape, std::move(p.nodes), net.encapsulated};
    if (!net.encapsulated) {
      out.push_back({std::move(p.label), std::move(p.shown), std::move(t), std::move(p.rule)});
      continue;
    }
    switch (p.label.kind) {
      case LabelKind::Cast:
        out.push_back({Label::tau(), std::move(p.shown), std::move(t), rec ? "E.cast(" + p.rule + ")" : ""});
        break;
      case LabelKind::Arrive: {
        const Label& l = p.label;
        if (l.set1.size() != 1 || l.m.kind() != ValueKind::Ctor || l.m.ctor_name() != "newpkt"_sym) break;
        Label np = Label::newpkt(l.set1.items()[0], l.m.items()[0], l.m.items()[1]);
        out.push_back({np, np, std::move(t), rec ? "E.newpkt(" + p.rule + ")" : ""});
        break;
      }
      case LabelKind::Tau:
      case LabelKind::NodeDeliver:
      case LabelKind::Connect:
      case LabelKind::Disconnect:
        out.push_back({std::move(p.label), std::move(p.shown), std::move(t), rec ? "E.pass(" + p.rule + ")" : ""});
        break;
      default:
        break;
    }
  }
  dedupe_net(out);
  return out;
}

std::optional<SeqStep> Semantics::replay(const SeqState& s, const std::string& r, std::span<const Value> universe) const {
  for (auto& st : step_sequential(s, universe))
    if (st.rule == r) return st;
  return std::nullopt;
}

std::optional<NetStep> Semantics::replay(const NetworkTerm& net, const std::string& r,
                                         std::span<const Value> universe) const {
  for (auto& st : step_network(net, universe))
    if (st.rule == r) return st;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Flat encapsulated stepping

NetState FlatNetwork::make_state(const NetworkTerm& net) {
  NetState s;
  s.shape = net.shape;
  s.encapsulated = net.encapsulated;
  for (const auto& n : net.nodes) s.nodes.push_back(interner_.intern(n));
  return s;
}

const FlatNetwork::NodeInfo& FlatNetwork::info(NodePtr n) {
  InfoShard& sh = info_[n->hash % kShards];
  {
    std::lock_guard lock(sh.mu);
    auto it = sh.map.find(n);
    if (it != sh.map.end()) return *it->second;
  }
  auto fresh = std::make_unique<NodeInfo>();
  fresh->steps = sem_->node_steps(*n);
  fresh->can_receive = sem_->par_can_receive(*n->shape, n->leaves);
  std::lock_guard lock(sh.mu);
  auto [it, inserted] = sh.map.emplace(n, std::move(fresh));
  return *it->second;
}

std::vector<NodePtr> FlatNetwork::receivers(NodePtr n, const Value& m) {
  RecvShard& sh = recv_[hash_combine(n->hash, m.hash()) % kShards];
  RecvKey key{n, m};
  {
    std::lock_guard lock(sh.mu);
    auto it = sh.map.find(key);
    if (it != sh.map.end()) return it->second;
  }
  std::vector<NodePtr> out;
  for (auto& st : sem_->node_arrive(*n, m, true)) out.push_back(interner_.intern(std::move(st.target)));
  std::lock_guard lock(sh.mu);
  sh.map.emplace(std::move(key), out);
  return out;
}

std::vector<FlatStep> FlatNetwork::internal_steps(const NetState& s) {
  std::vector<FlatStep> out;
  const bool rec = sem_->options().record_rules;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const NodeInfo& inf = info(s.nodes[i]);
    const Value ip = ip_atom(s.nodes[i]->ip);
    for (const auto& st : inf.steps) {
      const LabelKind k = st.label.kind;
      if (k == LabelKind::Tau || k == LabelKind::NodeDeliver) {
        std::vector<NodePtr> nodes = s.nodes;
        nodes[i] = interner_.intern(st.target);
        out.push_back({st.label, st.label, std::move(nodes), rec ? "E.pass(" + ip.str() + ":" + st.rule + ")" : ""});
        continue;
      }
      if (k != LabelKind::Cast) continue;
      // Every node in range must receive; the others disregard.
      std::vector<std::vector<NodePtr>> options(s.nodes.size());
      bool blocked = false;
      for (std::size_t j = 0; j < s.nodes.size() && !blocked; ++j) {
        if (j == i) {
          options[j] = {interner_.intern(st.target)};
        } else if (st.label.set1.set_contains(ip_atom(s.nodes[j]->ip))) {
          options[j] = receivers(s.nodes[j], st.label.m);
          blocked = options[j].empty();
        } else {
          options[j] = {s.nodes[j]};
        }
      }
      if (blocked) continue;
      Label shown = Label::sent_cast(ip, st.label.set1, st.label.m);
      std::vector<NodePtr> pick(s.nodes.size());
      std::function<void(std::size_t)> product = [&](std::size_t j) {
        if (j == s.nodes.size()) {
          out.push_back({Label::tau(), shown, pick, rec ? "E.cast(" + ip.str() + ":" + st.rule + ")" : ""});
          return;
        }
        for (NodePtr p : options[j]) {
          pick[j] = p;
          product(j + 1);
        }
      };
      product(0);
    }
  }
  return out;
}

std::vector<FlatStep> FlatNetwork::inject(const NetState& s, std::size_t i, const Value& d, const Value& dip) {
  std::vector<FlatStep> out;
  const Value ip = ip_atom(s.nodes[i]->ip);
  Value m = Value::ctor(sorts::Msg(), "newpkt"_sym, {d, dip});
  for (NodePtr t : receivers(s.nodes[i], m)) {
    std::vector<NodePtr> nodes = s.nodes;
    nodes[i] = t;
    Label np = Label::newpkt(ip, d, dip);
    out.push_back({np, np, std::move(nodes), sem_->options().record_rules ? "E.newpkt(" + ip.str() + ")" : ""});
  }
  return out;
}

std::optional<FlatStep> FlatNetwork::topology(const NetState& s, const Label& ev) {
  std::vector<NodePtr> nodes = s.nodes;
  bool any = false;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    auto t = sem_->node_topology(*s.nodes[i], ev);
    if (!t) {
      if (sem_->options().symmetric_links) return std::nullopt;
      continue;
    }
    nodes[i] = interner_.intern(std::move(*t));
    any = true;
  }
  if (!any) return std::nullopt;
  return FlatStep{ev, ev, std::move(nodes), sem_->options().record_rules ? "E.topology" : ""};
}

// ---------------------------------------------------------------------------
// Printing

std::string print_seq_state(const Program& prog, const SeqState& s) {
  if (s.proc->kind == ProcKind::Call && prog.canonical_call(s.proc->name) == s.proc) {
    const ProcessDefinition* d = prog.definition(s.proc->name);
    std::string out = s.proc->name.str() + "(";
    bool all = true;
    for (std::size_t i = 0; i < d->params.size(); ++i) {
      const Value* v = s.xi.get(d->params[i].name);
      if (!v) {
        all = false;
        break;
      }
      if (i) out += static_cast<int>(i) == d->semicolon ? ";" : ",";
      out += v->str();
    }
    if (all) return out + ")";
  }
  return print_leaf(s);
}

namespace {

std::string print_par_state(const Program& prog, const ParShape& shape, const std::vector<SeqState>& leaves) {
  if (shape.leaf >= 0) return print_seq_state(prog, leaves[shape.leaf]);
  return "(" + print_par_state(prog, *shape.left, leaves) + " <<| " + print_par_state(prog, *shape.right, leaves) + ")";
}

}  // namespace

std::string print_node_state(const Program& prog, const NodeState& n, bool with_ip) {
  std::string body = print_par_state(prog, *n.shape, n.leaves);
  if (!with_ip) return body;
  return n.ip.str() + " : " + body + " : " + n.range.str();
}

std::string print_net(const Program& prog, const NetworkTerm& net) {
  std::string out = net.encapsulated ? "[" : "";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) out += (i ? " || " : "") + print_node_state(prog, net.nodes[i]);
  return out + (net.encapsulated ? "]" : "");
}

std::string print_net(const Program& prog, const NetState& s, const NetShape&) {
  std::string out = s.encapsulated ? "[" : "";
  for (std::size_t i = 0; i < s.nodes.size(); ++i) out += (i ? " || " : "") + print_node_state(prog, *s.nodes[i]);
  return out + (s.encapsulated ? "]" : "");
}

}  // namespace awn
