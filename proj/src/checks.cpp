#include "awn/checks.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "awn/aodv/data.hpp"
#include "awn/aodv/model.hpp"
#include "awn/ctl.hpp"

namespace awn {

namespace {

using aodv::RoutingTable;

RoutingTable table_of(NodePtr n) {
  auto v = aodv::view(*n);
  if (!v.rt || v.rt->kind() != ValueKind::Map) return {};
  return aodv::table_from_value(*v.rt);
}

std::vector<RoutingTable> tables(const NetState& s) {
  std::vector<RoutingTable> out;
  out.reserve(s.nodes.size());
  for (NodePtr n : s.nodes) out.push_back(table_of(n));
  return out;
}

std::optional<std::size_t> index_of(const NetState& s, Symbol ip) {
  for (std::size_t i = 0; i < s.nodes.size(); ++i)
    if (s.nodes[i]->ip == ip) return i;
  return std::nullopt;
}

void finish(CheckResult& r, const Exploration& e) {
  if (r.verdict == Verdict::pass && e.built.lts.truncated) {
    r.verdict = Verdict::inconclusive;
    r.detail = "no violation within bounds; exploration truncated (" + std::to_string(e.built.lts.frontier) +
               " frontier states)";
  }
}

std::string entry_str(const aodv::RouteEntry& r) {
  std::ostringstream os;
  os << "(" << r.dip.str() << "," << r.dsn << "," << (r.known ? "kno" : "unkno") << "," << (r.valid ? "val" : "inval")
     << "," << r.hops << "," << r.nhip.str() << ")";
  return os.str();
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::violation: return "violation";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

bool connected_star(const NetState& s, Symbol from, Symbol to) {
  if (from == to) return true;
  std::set<Symbol> seen{from};
  std::deque<Symbol> work{from};
  while (!work.empty()) {
    Symbol x = work.front();
    work.pop_front();
    auto i = index_of(s, x);
    if (!i) continue;
    for (const auto& y : s.nodes[*i]->range.items()) {
      Symbol ys = y.as_atom();
      if (ys == to) return true;
      if (seen.insert(ys).second) work.push_back(ys);
    }
  }
  return false;
}

CheckResult check_prop1(const Exploration& e) {
  CheckResult r;
  r.name = "prop1";
  const Lts& lts = e.built.lts;
  const Symbol rrep = "rrep"_sym;
  for (std::size_t k = 0; k < lts.edges.size(); ++k) {
    const LtsEdge& ed = lts.edges[k];
    const Label& l = lts.shown_labels[ed.shown];
    if (l.kind != LabelKind::Cast || l.m.kind() != ValueKind::Ctor || l.m.ctor_name() != rrep) continue;
    auto f = l.m.items();  // hops, dip, dsn, oip, sip
    Symbol dip = f[1].as_atom(), ipc = f[4].as_atom();
    if (ipc == dip) continue;
    ++r.checked;
    const NetState& src = e.built.states[ed.src].net;
    auto i = index_of(src, ipc);
    std::string why;
    if (!i) {
      why = "sender " + ipc.str() + " is not a node";
    } else {
      auto rt = table_of(src.nodes[*i]);
      auto it = rt.find(dip);
      if (it == rt.end()) {
        why = dip.str() + " not in kD of " + ipc.str();
      } else {
        const auto& en = it->second;
        if (en.dsn != f[2].as_nat()) why = "sqn " + std::to_string(en.dsn) + " != dsn_c " + f[2].str();
        else if (en.hops != f[0].as_nat()) why = "dhops " + std::to_string(en.hops) + " != hops_c " + f[0].str();
        else if (!en.valid) why = "route to " + dip.str() + " is invalid";
        if (!why.empty()) why += " in entry " + entry_str(en);
      }
    }
    if (!why.empty()) {
      r.verdict = Verdict::violation;
      r.detail = l.str() + ": " + why;
      r.trace = path_edges(e.built, ed.src);
      r.trace.push_back(static_cast<uint32_t>(k));
      return r;
    }
  }
  r.detail = std::to_string(r.checked) + " route replies checked";
  finish(r, e);
  return r;
}

std::vector<std::pair<Symbol, Symbol>> routing_arcs(const Exploration& e, uint32_t state, Symbol dip) {
  std::vector<std::pair<Symbol, Symbol>> arcs;
  const NetState& s = e.built.states[state].net;
  for (NodePtr n : s.nodes) {
    if (n->ip == dip) continue;
    auto rt = table_of(n);
    auto it = rt.find(dip);
    if (it != rt.end() && it->second.valid) arcs.emplace_back(n->ip, it->second.nhip);
  }
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.str(), a.second.str()) < std::tie(b.first.str(), b.second.str());
  });
  return arcs;
}

std::string routing_graph_dot(const Exploration& e, uint32_t state, Symbol dip) {
  std::ostringstream os;
  os << "digraph \"R(" << dip.str() << ")\" {\n";
  std::vector<std::string> names;
  for (Symbol ip : e.explorer->ips()) names.push_back(ip.str());
  std::sort(names.begin(), names.end());
  for (const auto& n : names) os << "  \"" << n << "\";\n";
  for (const auto& [a, b] : routing_arcs(e, state, dip)) os << "  \"" << a.str() << "\" -> \"" << b.str() << "\";\n";
  os << "}\n";
  return os.str();
}

CheckResult check_loop_freedom(const Exploration& e) {
  CheckResult r;
  r.name = "loop_freedom";
  const auto& ips = e.explorer->ips();
  for (uint32_t s = 0; s < e.built.states.size(); ++s) {
    const NetState& st = e.built.states[s].net;
    auto rts = tables(st);
    for (Symbol dip : ips) {
      ++r.checked;
      std::map<Symbol, Symbol> next;
      bool invariant_ok = true;
      std::string why;
      for (std::size_t i = 0; i < st.nodes.size(); ++i) {
        Symbol ip = st.nodes[i]->ip;
        if (ip == dip) continue;
        auto it = rts[i].find(dip);
        if (it == rts[i].end() || !it->second.valid) continue;
        Symbol nhip = it->second.nhip;
        next[ip] = nhip;
        if (nhip == dip) continue;
        auto j = index_of(st, nhip);
        if (!j) continue;
        auto jt = rts[*j].find(dip);
        if (jt == rts[*j].end() || !jt->second.valid) continue;
        const auto& a = it->second;
        const auto& b = jt->second;
        if (invariant_ok && !(a.dsn < b.dsn || (a.dsn == b.dsn && a.hops > b.hops))) {
          invariant_ok = false;
          why = "arc " + ip.str() + "->" + nhip.str() + " for " + dip.str() + ": " + entry_str(a) + " vs " +
                entry_str(b);
        }
      }
      // Each node has at most one arc, so a cycle shows up by following them.
      std::vector<std::string> cycle;
      for (const auto& [start, _] : next) {
        std::vector<Symbol> path;
        std::set<Symbol> on;
        Symbol x = start;
        while (next.count(x) && !on.count(x)) {
          on.insert(x);
          path.push_back(x);
          x = next[x];
        }
        if (on.count(x)) {
          auto at = std::find(path.begin(), path.end(), x);
          for (auto p = at; p != path.end(); ++p) cycle.push_back(p->str());
          cycle.push_back(x.str());
          break;
        }
      }
      if (!invariant_ok || !cycle.empty()) {
        r.verdict = Verdict::violation;
        r.cycle = cycle;
        if (!cycle.empty()) {
          std::string c;
          for (const auto& n : cycle) c += (c.empty() ? "" : "->") + n;
          why = (invariant_ok ? "routing loop " : why + "; routing loop ") + c + " for " + dip.str() +
                (invariant_ok ? " although the arc invariant holds" : "");
        }
        r.detail = why + " (state " + std::to_string(s) + ")";
        r.trace = path_edges(e.built, s);
        return r;
      }
    }
  }
  r.detail = std::to_string(e.built.states.size()) + " states, " + std::to_string(ips.size()) + " destinations";
  finish(r, e);
  return r;
}

CheckResult check_monotonicity(const Exploration& e) {
  CheckResult r;
  r.name = "monotonicity";
  const Lts& lts = e.built.lts;
  std::vector<std::vector<RoutingTable>> cache(e.built.states.size());
  auto rts = [&](uint32_t s) -> const std::vector<RoutingTable>& {
    if (cache[s].empty()) cache[s] = tables(e.built.states[s].net);
    return cache[s];
  };
  for (std::size_t k = 0; k < lts.edges.size(); ++k) {
    const LtsEdge& ed = lts.edges[k];
    ++r.checked;
    const NetState& a = e.built.states[ed.src].net;
    const NetState& b = e.built.states[ed.dst].net;
    const auto& ra = rts(ed.src);
    const auto& rb = rts(ed.dst);
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      if (a.nodes[i] == b.nodes[i]) continue;
      std::string why;
      auto va = aodv::view(*a.nodes[i]), vb = aodv::view(*b.nodes[i]);
      if (va.sn && vb.sn && vb.sn->as_nat() < va.sn->as_nat())
        why = "sn of " + a.nodes[i]->ip.str() + " drops from " + va.sn->str() + " to " + vb.sn->str();
      for (const auto& [dip, en] : ra[i]) {
        if (!why.empty()) break;
        Symbol ip = a.nodes[i]->ip;
        uint64_t after = aodv::sqn(rb[i], dip);
        if (after < en.dsn)
          why = "sqn(rt of " + ip.str() + ", " + dip.str() + ") drops from " + std::to_string(en.dsn) + " to " +
                std::to_string(after);
      }
      if (!why.empty()) {
        r.verdict = Verdict::violation;
        r.detail = why;
        r.trace = path_edges(e.built, ed.src);
        r.trace.push_back(static_cast<uint32_t>(k));
        return r;
      }
    }
  }
  r.detail = std::to_string(r.checked) + " transitions checked";
  finish(r, e);
  return r;
}

CheckResult check_packet_delivery(const Exploration& e) {
  CheckResult r;
  r.name = "packet_delivery";
  const Lts& lts = e.built.lts;
  const Scenario& scn = e.explorer->scenario();
  std::vector<Injection> tuples = scn.inject;
  for (const auto& ev : scn.script)
    if (ev.kind == ScriptEvent::Kind::inject) tuples.push_back(ev.injection);
  std::set<std::tuple<Symbol, Symbol, Symbol>> seen;

  for (const auto& inj : tuples) {
    if (!seen.insert({inj.node, inj.data, inj.dip}).second) continue;
    const Value oip = ip_atom(inj.node), d = Value::atom(sorts::Data(), inj.data), dip = ip_atom(inj.dip);
    std::map<std::string, ctl::LabelPredicate> lp{
        {"newpkt", [&](const Label& l) { return l.kind == LabelKind::NewPkt && l.a == oip && l.b == d && l.c == dip; }},
        {"deliver", [&](const Label& l) { return l.kind == LabelKind::NodeDeliver && l.a == dip && l.b == d; }},
        {"disconnect", [](const Label& l) { return l.kind == LabelKind::Disconnect; }},
    };
    std::map<std::string, ctl::StatePredicate> sp{
        {"connected", [&](uint32_t s) { return connected_star(e.built.states[s].net, inj.node, inj.dip); }},
        {"cut", [&](uint32_t s) { return e.built.cut[s] != 0; }},
    };
    ctl::Kripke k = ctl::tag_split(lts, lp, sp);
    using namespace ctl;
    auto goal = lor(atom("disconnect"), atom("deliver"));
    auto phi = AG(implies(land(atom("newpkt"), atom("connected")), AF(goal)));
    r.checked += k.num_states;
    if (holds(k, *phi)) continue;

    // A violation must not lean on unexplored successors.
    auto stuck = sat(k, *EG(land(lnot(goal), lnot(atom("cut")))));
    auto trigger = sat(k, *land(atom("newpkt"), atom("connected")));
    std::vector<uint32_t> bad;
    for (uint32_t s = 0; s < k.num_states; ++s)
      if (trigger[s] && stuck[s]) bad.push_back(s);
    uint32_t best = 0;
    std::vector<uint32_t> prefix;
    for (uint32_t s : bad) {
      auto p = path_to(k, s);
      if (!p.empty() && (prefix.empty() || p.size() < prefix.size())) {
        prefix = std::move(p);
        best = s;
      }
    }
    if (prefix.empty()) {
      r.verdict = Verdict::inconclusive;
      r.detail = "newpkt(" + inj.data.str() + "," + inj.dip.str() + ") at " + inj.node.str() +
                 ": delivery not established within bounds (counterexamples only through truncated states)";
      continue;
    }
    auto lasso = eg_witness(k, stuck, best);
    std::vector<uint32_t> edges;
    for (std::size_t i = 1; i < prefix.size(); ++i) edges.push_back(static_cast<uint32_t>(k.via[prefix[i]]));
    const std::size_t base = edges.size();
    for (std::size_t i = 1; i < lasso.states.size(); ++i) edges.push_back(static_cast<uint32_t>(k.via[lasso.states[i]]));
    r.verdict = Verdict::violation;
    r.trace = edges;
    if (lasso.loop_start >= 0) {
      r.trace.push_back(static_cast<uint32_t>(k.via[lasso.states[lasso.loop_start]]));
      r.loop_start = static_cast<int64_t>(base) + lasso.loop_start;
    } else {
      r.deadlock_end = true;
    }
    r.detail = inj.node.str() + ":newpkt(" + inj.data.str() + "," + inj.dip.str() + ") with " + inj.node.str() +
               " connected to " + inj.dip.str() + ", then a maximal path with neither disconnect nor " +
               inj.dip.str() + ":deliver(" + inj.data.str() + ")";
    return r;
  }
  if (r.verdict == Verdict::pass) {
    r.detail = std::to_string(seen.size()) + " injections";
    finish(r, e);
  }
  return r;
}

std::string format_trace(const Exploration& e, const CheckResult& r) {
  std::ostringstream os;
  const Lts& lts = e.built.lts;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (static_cast<int64_t>(i) == r.loop_start) os << "-- loop from here --\n";
    const LtsEdge& ed = lts.edges[r.trace[i]];
    const std::string& rule = e.built.rules[r.trace[i]];
    os << i + 1 << ": " << lts.shown_labels[ed.shown].str() << " :: " << (rule.empty() ? "-" : rule) << "\n";
  }
  if (r.deadlock_end) os << "deadlock after " << r.trace.size() << " steps\n";
  return os.str();
}

}  // namespace awn
