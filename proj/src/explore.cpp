#include "awn/explore.hpp"

#include <chrono>
#include <set>
#include <stdexcept>

#include "awn/aodv/data.hpp"
#include "awn/aodv/model.hpp"

namespace awn {

std::size_t ExploreState::hash() const {
  std::size_t h = net.hash();
  h = hash_combine(h, injected);
  h = hash_combine(h, script_pos);
  return hash_combine(h, budget_used);
}

std::shared_ptr<const Program> scenario_program(const Scenario& scn) {
  auto prog = std::make_shared<Program>(
      aodv::load_library(scn.library.empty() ? aodv::default_library_path() : scn.library));
  std::set<Symbol> ips, data;
  for (const auto& n : scn.nodes) {
    ips.insert(n.ip);
    ips.insert(n.range.begin(), n.range.end());
  }
  auto note = [&](const Injection& i) {
    ips.insert(i.node);
    ips.insert(i.dip);
    data.insert(i.data);
  };
  for (const auto& i : scn.inject) note(i);
  for (const auto& e : scn.script) {
    if (e.kind == ScriptEvent::Kind::inject) {
      note(e.injection);
    } else {
      ips.insert(e.from);
      ips.insert(e.to);
    }
  }
  auto& sig = prog->signature();
  for (Symbol s : ips)
    if (s.valid() && !sig.constant(s)) sig.add_constant(s, sorts::Ip());
  for (Symbol s : data)
    if (s.valid() && !sig.constant(s)) sig.add_constant(s, sorts::Data());
  return prog;
}

Explorer::Explorer(const Scenario& scn, std::shared_ptr<const Program> prog, bool record_rules)
    : scn_(scn), prog_(std::move(prog)) {
  SemanticsOptions o;
  o.non_blocking = scn_.non_blocking;
  o.symmetric_links = scn_.symmetric;
  o.record_rules = record_rules;
  sem_ = std::make_unique<Semantics>(*prog_, o, scn_.data);
  flat_ = std::make_unique<FlatNetwork>(*sem_);

  if (!scn_.network.empty()) {
    const NetworkTerm* net = prog_->network(Symbol::intern(scn_.network));
    if (!net) throw std::runtime_error("library has no network " + scn_.network);
    init_term_ = *net;
    if (!init_term_.encapsulated) throw std::runtime_error("network " + scn_.network + " is not encapsulated");
  } else {
    if (scn_.nodes.empty()) throw std::runtime_error("scenario has no nodes");
    std::shared_ptr<const NetShape> shape;
    for (std::size_t i = 0; i < scn_.nodes.size(); ++i) {
      auto leaf = NetShape::make_leaf(static_cast<int>(i));
      shape = shape ? NetShape::make_par(shape, leaf) : leaf;
      init_term_.nodes.push_back(aodv::initial_node(*prog_, scn_.nodes[i].ip, scn_.nodes[i].range));
    }
    init_term_.shape = shape;
    init_term_.encapsulated = true;
  }
  for (const auto& n : init_term_.nodes) ips_.push_back(n.ip);
  sem_->set_ip_universe([&] {
    std::vector<Value> v;
    for (Symbol s : ips_) v.push_back(ip_atom(s));
    return v;
  }());

  Evaluator ev(prog_->signature(), scn_.data);
  for (const auto& o : scn_.init) {
    auto pos = position(o.node);
    if (!pos) throw std::runtime_error("init override for unknown node " + o.node.str());
    NodeState& n = init_term_.nodes[*pos];
    if (o.leaf < 0 || static_cast<std::size_t>(o.leaf) >= n.leaves.size())
      throw std::runtime_error("init override: node " + o.node.str() + " has no leaf " + std::to_string(o.leaf));
    auto vs = prog_->signature().var_sort(o.var);
    if (!vs) throw std::runtime_error("init override of undeclared variable " + o.var.str());
    ExprPtr e = parse_expression(*prog_, o.expr, *vs);
    n.leaves[o.leaf].xi.assign(o.var, ev.eval({}, e));
    n.rehash();
  }
  shape_ = init_term_.shape;
}

std::optional<std::size_t> Explorer::position(Symbol ip) const {
  for (std::size_t i = 0; i < ips_.size(); ++i)
    if (ips_[i] == ip) return i;
  return std::nullopt;
}

ExploreState Explorer::initial() { return ExploreState{flat_->make_state(init_term_), 0, 0, 0}; }

std::optional<FlatStep> Explorer::fire_injection(const NetState& s, const Injection& inj) {
  auto pos = position(inj.node);
  if (!pos) throw std::runtime_error("injection at unknown node " + inj.node.str());
  auto v = flat_->inject(s, *pos, Value::atom(sorts::Data(), inj.data), ip_atom(inj.dip));
  if (v.empty()) return std::nullopt;
  return std::move(v.front());
}

std::vector<Succ<ExploreState>> Explorer::successors(const ExploreState& s) {
  std::vector<Succ<ExploreState>> out;
  auto next = [&](std::vector<NodePtr> nodes, uint32_t injected, uint16_t pos, uint16_t used) {
    return ExploreState{NetState{s.net.shape, std::move(nodes), true}, injected, pos, used};
  };
  auto internal = flat_->internal_steps(s.net);
  const bool quiet = internal.empty();
  for (auto& st : internal)
    out.push_back({st.label, st.shown, next(std::move(st.nodes), s.injected, s.script_pos, s.budget_used), st.rule});

  for (std::size_t i = 0; i < scn_.inject.size(); ++i) {
    const auto& inj = scn_.inject[i];
    if (s.injected & (1u << i)) continue;
    if (inj.when == When::quiescent && !quiet) continue;
    if (auto st = fire_injection(s.net, inj))
      out.push_back({st->label, st->shown, next(std::move(st->nodes), s.injected | (1u << i), s.script_pos, s.budget_used),
                     st->rule});
  }

  if (s.script_pos < scn_.script.size()) {
    const auto& ev = scn_.script[s.script_pos];
    if (ev.when == When::any || quiet) {
      std::optional<FlatStep> st;
      if (ev.kind == ScriptEvent::Kind::inject) {
        st = fire_injection(s.net, ev.injection);
      } else {
        Value a = ip_atom(ev.from), b = ip_atom(ev.to);
        st = flat_->topology(s.net, ev.kind == ScriptEvent::Kind::connect ? Label::connect(a, b) : Label::disconnect(a, b));
      }
      if (st)
        out.push_back({st->label, st->shown,
                       next(std::move(st->nodes), s.injected, static_cast<uint16_t>(s.script_pos + 1), s.budget_used),
                       st->rule});
    }
  }

  if (scn_.policy == ConnectPolicy::free && s.budget_used < scn_.budget) {
    for (std::size_t i = 0; i < s.net.nodes.size(); ++i)
      for (std::size_t j = 0; j < s.net.nodes.size(); ++j) {
        if (i == j) continue;
        Value a = ip_atom(ips_[i]), b = ip_atom(ips_[j]);
        bool linked = s.net.nodes[i]->range.set_contains(b);
        auto st = flat_->topology(s.net, linked ? Label::disconnect(a, b) : Label::connect(a, b));
        if (st)
          out.push_back({st->label, st->shown,
                         next(std::move(st->nodes), s.injected, s.script_pos, static_cast<uint16_t>(s.budget_used + 1)),
                         st->rule});
      }
  }
  return out;
}

std::strong_ordering Explorer::compare(const ExploreState& a, const ExploreState& b) const {
  if (auto c = awn::compare(a.net, b.net); c != 0) return c;
  if (auto c = a.injected <=> b.injected; c != 0) return c;
  if (auto c = a.script_pos <=> b.script_pos; c != 0) return c;
  return a.budget_used <=> b.budget_used;
}

bool Explorer::stop(const ExploreState& s) const {
  const auto& bd = scn_.bounds;
  for (NodePtr n : s.net.nodes) {
    auto v = aodv::view(*n);
    if (v.sn && v.sn->kind() == ValueKind::Nat && v.sn->as_nat() > bd.max_sn) return true;
    if (v.rt && v.rt->kind() == ValueKind::Map)
      for (std::size_t i = 0; i < v.rt->map_size(); ++i)
        if (v.rt->map_val(i).items()[1].as_nat() > bd.max_sn) return true;
    if (v.msgs && v.msgs->size() > bd.max_queue) return true;
    if (v.store && v.store->kind() == ValueKind::Map)
      for (std::size_t i = 0; i < v.store->map_size(); ++i)
        if (v.store->map_val(i).items()[1].size() > bd.max_queue) return true;
  }
  return false;
}

std::string Explorer::print(const ExploreState& s) const { return print_net(*prog_, s.net, *shape_); }

Exploration explore(const Scenario& scn, int workers, bool record_rules) {
  auto t0 = std::chrono::steady_clock::now();
  Exploration e;
  e.explorer = std::make_unique<Explorer>(scn, scenario_program(scn), record_rules);
  Bounds b;
  b.max_states = scn.bounds.max_states;
  b.max_depth = scn.bounds.max_depth;
  e.built = build_lts(*e.explorer, e.explorer->initial(), b, workers);
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return e;
}

std::vector<uint32_t> path_edges(const Built<ExploreState>& b, uint32_t s) {
  std::vector<uint32_t> edges;
  while (b.parent[s].state != std::numeric_limits<uint32_t>::max()) {
    edges.push_back(b.parent[s].edge);
    s = b.parent[s].state;
  }
  std::reverse(edges.begin(), edges.end());
  return edges;
}

}  // namespace awn
