#include "awn/aodv/data.hpp"

#include <algorithm>
#include <sstream>

namespace awn::aodv {

namespace {

std::vector<Symbol> merge(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  std::vector<Symbol> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

RoutingTable upd(const RoutingTable& rt, const RouteEntry& r) {
  RoutingTable out = rt;
  auto it = out.find(r.dip);
  if (it == out.end()) {
    out.emplace(r.dip, r);
    return out;
  }
  RouteEntry& e = it->second;
  bool fresher = r.dsn > e.dsn || (r.dsn == e.dsn && (!e.valid || r.hops < e.hops));
  if (fresher) {
    RouteEntry n = r;
    n.pre = merge(r.pre, e.pre);
    e = std::move(n);
  } else {
    e.pre = merge(e.pre, r.pre);
  }
  return out;
}

RoutingTable inv(const RoutingTable& rt, const Dests& dests, InvalidationMode mode) {
  RoutingTable out = rt;
  for (const auto& [rip, rsn] : dests) {
    auto it = out.find(rip);
    if (it == out.end()) continue;
    RouteEntry& e = it->second;
    if (mode == InvalidationMode::paper) {
      if (!e.valid) continue;
      e.dsn = std::max(e.dsn + 1, rsn);
    } else {
      e.dsn = rsn;
    }
    e.valid = false;
  }
  return out;
}

Sqn sqn(const RoutingTable& rt, Symbol dip) {
  auto it = rt.find(dip);
  return it == rt.end() ? 0 : it->second.dsn;
}

bool sqn_known(const RoutingTable& rt, Symbol dip) {
  auto it = rt.find(dip);
  return it != rt.end() && it->second.known;
}

std::optional<bool> status(const RoutingTable& rt, Symbol dip) {
  auto it = rt.find(dip);
  if (it == rt.end()) return std::nullopt;
  return it->second.valid;
}

std::optional<uint64_t> dhops(const RoutingTable& rt, Symbol dip) {
  auto it = rt.find(dip);
  if (it == rt.end()) return std::nullopt;
  return it->second.hops;
}

std::optional<Symbol> nhop(const RoutingTable& rt, Symbol dip) {
  auto it = rt.find(dip);
  if (it == rt.end()) return std::nullopt;
  return it->second.nhip;
}

std::optional<std::vector<Symbol>> precs(const RoutingTable& rt, Symbol dip) {
  auto it = rt.find(dip);
  if (it == rt.end()) return std::nullopt;
  return it->second.pre;
}

std::vector<Symbol> akD(const RoutingTable& rt) {
  std::vector<Symbol> out;
  for (const auto& [dip, e] : rt)
    if (e.valid) out.push_back(dip);
  return out;
}

std::vector<Symbol> kD(const RoutingTable& rt) {
  std::vector<Symbol> out;
  for (const auto& [dip, e] : rt) out.push_back(dip);
  return out;
}

std::optional<RoutingTable> addprecrt(const RoutingTable& rt, Symbol dip, const std::vector<Symbol>& npre) {
  auto it = rt.find(dip);
  if (it == rt.end()) return std::nullopt;
  RoutingTable out = rt;
  std::vector<Symbol> sorted = npre;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  out[dip].pre = merge(it->second.pre, sorted);
  return out;
}

Dests broken(const RoutingTable& rt, Symbol nhip) {
  Dests out;
  for (const auto& [dip, e] : rt)
    if (e.valid && e.nhip == nhip) out[dip] = inc(e.dsn);
  return out;
}

Dests affected(const RoutingTable& rt, const Dests& dests, Symbol sip) {
  Dests out;
  for (const auto& [rip, rsn] : dests) {
    auto it = rt.find(rip);
    if (it != rt.end() && it->second.valid && it->second.nhip == sip) out[rip] = rsn;
  }
  return out;
}

std::vector<Symbol> precsof(const RoutingTable& rt, const Dests& dests) {
  std::vector<Symbol> out;
  for (const auto& [rip, rsn] : dests) {
    auto it = rt.find(rip);
    if (it != rt.end()) out = merge(out, it->second.pre);
  }
  return out;
}

Dests withprecs(const RoutingTable& rt, const Dests& dests) {
  Dests out;
  for (const auto& [rip, rsn] : dests) {
    auto it = rt.find(rip);
    if (it != rt.end() && !it->second.pre.empty()) out[rip] = rsn;
  }
  return out;
}

std::string dump(const RoutingTable& rt) {
  std::vector<const RouteEntry*> rows;
  for (const auto& [dip, e] : rt) rows.push_back(&e);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->dip.str() < b->dip.str(); });
  std::ostringstream os;
  for (const auto* e : rows) {
    std::vector<std::string> pre;
    for (Symbol p : e->pre) pre.push_back(p.str());
    std::sort(pre.begin(), pre.end());
    os << e->dip.str() << " " << e->dsn << " " << (e->known ? "kno" : "unkno") << " "
       << (e->valid ? "val" : "inval") << " " << e->hops << " " << e->nhip.str() << " {";
    for (std::size_t i = 0; i < pre.size(); ++i) os << (i ? "," : "") << pre[i];
    os << "}\n";
  }
  return os.str();
}

namespace sorts {
Symbol Sqn() { static const Symbol s = Symbol::intern("SQN"); return s; }
Symbol Sqnk() { static const Symbol s = Symbol::intern("SQNK"); return s; }
Symbol Flag() { static const Symbol s = Symbol::intern("FLAG"); return s; }
Symbol Pending() { static const Symbol s = Symbol::intern("PENDING"); return s; }
Symbol Route() { static const Symbol s = Symbol::intern("ROUTE"); return s; }
Symbol Rt() { static const Symbol s = Symbol::intern("RT"); return s; }
Symbol Rid() { static const Symbol s = Symbol::intern("RID"); return s; }
Symbol Rreqs() { static const Symbol s = Symbol::intern("RREQS"); return s; }
Symbol DataQ() { static const Symbol s = Symbol::intern("DATAQ"); return s; }
Symbol QEntry() { static const Symbol s = Symbol::intern("QENTRY"); return s; }
Symbol Queues() { static const Symbol s = Symbol::intern("QUEUES"); return s; }
Symbol Msgs() { static const Symbol s = Symbol::intern("MSGS"); return s; }
Symbol Dests() { static const Symbol s = Symbol::intern("DESTS"); return s; }
}  // namespace sorts

namespace {

Value nat(uint64_t n) { return Value::nat(awn::sorts::Nat(), n); }
Symbol sym_route() { static const Symbol s = Symbol::intern("route"); return s; }
Symbol sym_qe() { static const Symbol s = Symbol::intern("qe"); return s; }
Symbol sym_rid() { static const Symbol s = Symbol::intern("rid"); return s; }
Value flag_value(bool valid) {
  static const Value v = Value::atom(sorts::Flag(), Symbol::intern("val"));
  static const Value i = Value::atom(sorts::Flag(), Symbol::intern("inval"));
  return valid ? v : i;
}
Value known_value(bool known) {
  static const Value k = Value::atom(sorts::Sqnk(), Symbol::intern("kno"));
  static const Value u = Value::atom(sorts::Sqnk(), Symbol::intern("unkno"));
  return known ? k : u;
}
Value pending_value(bool pen) {
  static const Value p = Value::atom(sorts::Pending(), Symbol::intern("pen"));
  static const Value n = Value::atom(sorts::Pending(), Symbol::intern("nonpen"));
  return pen ? p : n;
}

Value ip_set_of(const std::vector<Symbol>& xs) {
  std::vector<Value> vs;
  vs.reserve(xs.size());
  for (Symbol s : xs) vs.push_back(ip_atom(s));
  return ip_set(std::move(vs));
}

std::vector<Symbol> symbols_of(const Value& set) {
  std::vector<Symbol> out;
  for (const auto& v : set.items()) out.push_back(v.as_atom());
  return out;
}

[[noreturn]] void undefined(const std::string& what) { throw EvalError(EvalError::Kind::Undefined, what); }

}  // namespace

Value to_value(const RouteEntry& r) {
  return Value::ctor(sorts::Route(), sym_route(),
                     {ip_atom(r.dip), nat(r.dsn), known_value(r.known), flag_value(r.valid), nat(r.hops),
                      ip_atom(r.nhip), ip_set_of(r.pre)});
}

Value to_value(const RoutingTable& rt) {
  std::vector<std::pair<Value, Value>> kv;
  kv.reserve(rt.size());
  for (const auto& [dip, e] : rt) kv.emplace_back(ip_atom(dip), to_value(e));
  return Value::map(sorts::Rt(), std::move(kv));
}

Value dests_value(const Dests& d) {
  std::vector<std::pair<Value, Value>> kv;
  for (const auto& [rip, rsn] : d) kv.emplace_back(ip_atom(rip), nat(rsn));
  return Value::map(sorts::Dests(), std::move(kv));
}

RouteEntry entry_from_value(const Value& v) {
  auto f = v.items();
  RouteEntry r;
  r.dip = f[0].as_atom();
  r.dsn = f[1].as_nat();
  r.known = f[2].as_atom() == Symbol::intern("kno");
  r.valid = f[3].as_atom() == Symbol::intern("val");
  r.hops = f[4].as_nat();
  r.nhip = f[5].as_atom();
  r.pre = symbols_of(f[6]);
  return r;
}

RoutingTable table_from_value(const Value& v) {
  RoutingTable rt;
  for (std::size_t i = 0; i < v.map_size(); ++i) rt.emplace_hint(rt.end(), v.map_key(i).as_atom(), entry_from_value(v.map_val(i)));
  return rt;
}

Dests dests_from_value(const Value& v) {
  Dests d;
  for (std::size_t i = 0; i < v.map_size(); ++i) d.emplace_hint(d.end(), v.map_key(i).as_atom(), v.map_val(i).as_nat());
  return d;
}

namespace {

// Store of queued data packets: IP -> qe(PENDING, [DATA]).
Value store_add(const Value& store, const Value& data, const Value& dip) {
  std::vector<std::pair<Value, Value>> kv;
  bool found = false;
  for (std::size_t i = 0; i < store.map_size(); ++i) {
    const Value& k = store.map_key(i);
    const Value& e = store.map_val(i);
    if (k == dip) {
      found = true;
      std::vector<Value> q(e.items()[1].items().begin(), e.items()[1].items().end());
      q.push_back(data);
      kv.emplace_back(k, Value::ctor(sorts::QEntry(), sym_qe(), {e.items()[0], Value::seq(sorts::DataQ(), q)}));
    } else {
      kv.emplace_back(k, e);
    }
  }
  if (!found)
    kv.emplace_back(dip, Value::ctor(sorts::QEntry(), sym_qe(), {pending_value(false), Value::seq(sorts::DataQ(), {data})}));
  return Value::map(sorts::Queues(), std::move(kv));
}

const Value& store_entry(const Value& store, const Value& dip, const char* op) {
  const Value* e = store.map_find(dip);
  if (!e) undefined(std::string(op) + ": no queued data for " + dip.str());
  return *e;
}

Value store_with(const Value& store, const Value& dip, std::optional<Value> entry) {
  std::vector<std::pair<Value, Value>> kv;
  for (std::size_t i = 0; i < store.map_size(); ++i) {
    if (store.map_key(i) == dip) {
      if (entry) kv.emplace_back(dip, *entry);
    } else {
      kv.emplace_back(store.map_key(i), store.map_val(i));
    }
  }
  return Value::map(sorts::Queues(), std::move(kv));
}

Value make_seq(Symbol sort, std::span<const Value> items) { return Value::seq(sort, {items.begin(), items.end()}); }

Operator op(const char* name, std::vector<Symbol> params, Symbol result, OperatorImpl impl) {
  return Operator{Symbol::intern(name), std::move(params), result, false, std::move(impl)};
}

Operator ctor(const char* name, std::vector<Symbol> params, Symbol result) {
  return Operator{Symbol::intern(name), std::move(params), result, true, {}};
}

}  // namespace

void register_signature(Signature& sig) {
  using awn::sorts::Bool;
  using awn::sorts::Data;
  using awn::sorts::Ip;
  using awn::sorts::Msg;
  using awn::sorts::Nat;
  using awn::sorts::SetIp;
  using namespace sorts;
  using sorts::Sqn;
  using sorts::Dests;
  using Args = std::span<const Value>;

  sig.add_sort({Sqn(), SortKind::Nat, {}, {}, {}});
  sig.add_sort({Sqnk(), SortKind::Enum, {}, {}, {}});
  sig.add_sort({Flag(), SortKind::Enum, {}, {}, {}});
  sig.add_sort({Pending(), SortKind::Enum, {}, {}, {}});
  sig.add_sort({Route(), SortKind::Data, {}, {}, {}});
  sig.add_sort({Rt(), SortKind::Map, {}, Ip(), Route()});
  sig.add_sort({Rid(), SortKind::Data, {}, {}, {}});
  sig.add_sort({Rreqs(), SortKind::Set, Rid(), {}, {}});
  sig.add_sort({DataQ(), SortKind::Seq, Data(), {}, {}});
  sig.add_sort({QEntry(), SortKind::Data, {}, {}, {}});
  sig.add_sort({Queues(), SortKind::Map, {}, Ip(), QEntry()});
  sig.add_sort({Msgs(), SortKind::Seq, Msg(), {}, {}});
  sig.add_sort({Dests(), SortKind::Map, {}, Ip(), Sqn()});

  for (const char* c : {"kno", "unkno"}) sig.add_constant(Symbol::intern(c), Sqnk());
  for (const char* c : {"val", "inval"}) sig.add_constant(Symbol::intern(c), Flag());
  for (const char* c : {"pen", "nonpen"}) sig.add_constant(Symbol::intern(c), Pending());

  sig.add_operator(ctor("route", {Ip(), Sqn(), Sqnk(), Flag(), Nat(), Ip(), SetIp()}, Route()));
  sig.add_operator(ctor("rid", {Ip(), Nat()}, Rid()));
  sig.add_operator(ctor("qe", {Pending(), DataQ()}, QEntry()));
  sig.add_operator(ctor("pkt", {Data(), Ip(), Ip()}, Msg()));
  sig.add_operator(ctor("rreq", {Nat(), Nat(), Ip(), Sqn(), Sqnk(), Ip(), Sqn(), Ip()}, Msg()));
  sig.add_operator(ctor("rrep", {Nat(), Ip(), Sqn(), Ip(), Ip()}, Msg()));
  sig.add_operator(ctor("rerr", {Dests(), Ip()}, Msg()));

  sig.add_operator(op("upd", {Rt(), Route()}, Rt(), [](Args a, const DataOptions&) {
    return to_value(upd(table_from_value(a[0]), entry_from_value(a[1])));
  }));
  sig.add_operator(op("inv", {Rt(), Dests()}, Rt(), [](Args a, const DataOptions& o) {
    return to_value(inv(table_from_value(a[0]), dests_from_value(a[1]), o.inv_mode));
  }));
  sig.add_operator(op("sqn", {Rt(), Ip()}, Sqn(), [](Args a, const DataOptions&) {
    const Value* e = a[0].map_find(a[1]);
    return e ? e->items()[1] : nat(0);
  }));
  sig.add_operator(op("sqnk", {Rt(), Ip()}, Sqnk(), [](Args a, const DataOptions&) {
    const Value* e = a[0].map_find(a[1]);
    return e ? e->items()[2] : known_value(false);
  }));
  auto field = [](const char* name, Symbol result, std::size_t idx) {
    return op(name, {Rt(), Ip()}, result, [name, idx](Args a, const DataOptions&) {
      const Value* e = a[0].map_find(a[1]);
      if (!e) undefined(std::string(name) + ": no route to " + a[1].str());
      return e->items()[idx];
    });
  };
  sig.add_operator(field("status", Flag(), 3));
  sig.add_operator(field("dhops", Nat(), 4));
  sig.add_operator(field("nhop", Ip(), 5));
  sig.add_operator(field("precs", SetIp(), 6));
  sig.add_operator(op("akD", {Rt()}, SetIp(), [](Args a, const DataOptions&) {
    std::vector<Value> out;
    for (std::size_t i = 0; i < a[0].map_size(); ++i)
      if (a[0].map_val(i).items()[3] == flag_value(true)) out.push_back(a[0].map_key(i));
    return ip_set(std::move(out));
  }));
  sig.add_operator(op("kD", {Rt()}, SetIp(), [](Args a, const DataOptions&) {
    std::vector<Value> out;
    for (std::size_t i = 0; i < a[0].map_size(); ++i) out.push_back(a[0].map_key(i));
    return ip_set(std::move(out));
  }));
  sig.add_operator(op("addprecrt", {Rt(), Ip(), SetIp()}, Rt(), [](Args a, const DataOptions&) {
    auto r = addprecrt(table_from_value(a[0]), a[1].as_atom(), symbols_of(a[2]));
    if (!r) undefined("addprecrt: no route to " + a[1].str());
    return to_value(*r);
  }));
  sig.add_operator(op("inc", {Sqn()}, Sqn(), [](Args a, const DataOptions&) { return nat(a[0].as_nat() + 1); }));
  sig.add_operator(op("max", {Nat(), Nat()}, Nat(), [](Args a, const DataOptions&) {
    return nat(std::max(a[0].as_nat(), a[1].as_nat()));
  }));
  sig.add_operator(op("broken", {Rt(), Ip()}, Dests(), [](Args a, const DataOptions&) {
    return dests_value(broken(table_from_value(a[0]), a[1].as_atom()));
  }));
  sig.add_operator(op("affected", {Rt(), Dests(), Ip()}, Dests(), [](Args a, const DataOptions&) {
    return dests_value(affected(table_from_value(a[0]), dests_from_value(a[1]), a[2].as_atom()));
  }));
  sig.add_operator(op("precsof", {Rt(), Dests()}, SetIp(), [](Args a, const DataOptions&) {
    return ip_set_of(precsof(table_from_value(a[0]), dests_from_value(a[1])));
  }));
  sig.add_operator(op("withprecs", {Rt(), Dests()}, Dests(), [](Args a, const DataOptions&) {
    return dests_value(withprecs(table_from_value(a[0]), dests_from_value(a[1])));
  }));

  sig.add_operator(op("qD", {Queues()}, SetIp(), [](Args a, const DataOptions&) {
    std::vector<Value> out;
    for (std::size_t i = 0; i < a[0].map_size(); ++i) out.push_back(a[0].map_key(i));
    return ip_set(std::move(out));
  }));
  sig.add_operator(op("qadd", {Queues(), Data(), Ip()}, Queues(),
                      [](Args a, const DataOptions&) { return store_add(a[0], a[1], a[2]); }));
  sig.add_operator(op("qhead", {Queues(), Ip()}, Data(), [](Args a, const DataOptions&) {
    return store_entry(a[0], a[1], "qhead").items()[1].items()[0];
  }));
  sig.add_operator(op("qdrop", {Queues(), Ip()}, Queues(), [](Args a, const DataOptions&) {
    const Value& e = store_entry(a[0], a[1], "qdrop");
    auto q = e.items()[1].items();
    if (q.size() <= 1) return store_with(a[0], a[1], std::nullopt);
    return store_with(a[0], a[1],
                      Value::ctor(sorts::QEntry(), sym_qe(), {e.items()[0], make_seq(sorts::DataQ(), q.subspan(1))}));
  }));
  sig.add_operator(op("pflag", {Queues(), Ip()}, Pending(), [](Args a, const DataOptions&) {
    return store_entry(a[0], a[1], "pflag").items()[0];
  }));
  sig.add_operator(op("setP", {Queues(), Ip(), Pending()}, Queues(), [](Args a, const DataOptions&) {
    const Value* e = a[0].map_find(a[1]);
    if (!e) return a[0];
    return store_with(a[0], a[1], Value::ctor(sorts::QEntry(), sym_qe(), {a[2], e->items()[1]}));
  }));
  sig.add_operator(op("resetP", {Queues(), Dests()}, Queues(), [](Args a, const DataOptions&) {
    Value store = a[0];
    for (std::size_t i = 0; i < a[1].map_size(); ++i) {
      const Value* e = store.map_find(a[1].map_key(i));
      if (e)
        store = store_with(store, a[1].map_key(i),
                           Value::ctor(sorts::QEntry(), sym_qe(), {pending_value(false), e->items()[1]}));
    }
    return store;
  }));

  sig.add_operator(op("nextid", {Rreqs(), Ip()}, Nat(), [](Args a, const DataOptions&) {
    uint64_t best = 0;
    for (const auto& r : a[0].items())
      if (r.items()[0] == a[1]) best = std::max(best, r.items()[1].as_nat());
    return nat(best + 1);
  }));

  sig.add_operator(op("append", {Msgs(), Msg()}, Msgs(), [](Args a, const DataOptions&) {
    std::vector<Value> xs(a[0].items().begin(), a[0].items().end());
    xs.push_back(a[1]);
    return Value::seq(sorts::Msgs(), std::move(xs));
  }));
  sig.add_operator(op("head", {Msgs()}, Msg(), [](Args a, const DataOptions&) {
    if (a[0].size() == 0) undefined("head of empty queue");
    return a[0].items()[0];
  }));
  sig.add_operator(op("tail", {Msgs()}, Msgs(), [](Args a, const DataOptions&) {
    if (a[0].size() == 0) undefined("tail of empty queue");
    return make_seq(sorts::Msgs(), a[0].items().subspan(1));
  }));
  sig.add_operator(op("irrep", {}, Bool(), [](Args, const DataOptions& o) {
    return Value::boolean(o.intermediate_rrep);
  }));
}

Signature standard_signature() {
  Signature sig = Signature::builtin();
  register_signature(sig);
  return sig;
}

}  // namespace awn::aodv
