#include "awn/aodv/model.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "awn/aodv/data.hpp"

namespace awn::aodv {

std::string default_library_path() { return std::string(AWN_SOURCE_DIR) + "/models/aodv.awn"; }

Program load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), standard_signature());
}

NodeState initial_node(const Program& prog, Symbol ip, const std::vector<Symbol>& range) {
  ProcPtr aodv = prog.canonical_call("AODV"_sym);
  ProcPtr qmsg = prog.canonical_call("QMSG"_sym);
  if (!aodv || !qmsg) throw std::runtime_error("library defines no AODV/QMSG processes");
  Valuation xi;
  xi.assign("ip"_sym, ip_atom(ip));
  xi.assign("sn"_sym, Value::nat(awn::sorts::Nat(), 1));
  xi.assign("rt"_sym, Value::map(sorts::Rt(), {}));
  xi.assign("rreqs"_sym, Value::set(sorts::Rreqs(), {}));
  xi.assign("store"_sym, Value::map(sorts::Queues(), {}));
  Valuation xi2;
  xi2.assign("msgs"_sym, Value::seq(sorts::Msgs(), {}));

  NodeState n;
  n.ip = ip;
  n.shape = ParShape::make_par(ParShape::make_leaf(0), ParShape::make_leaf(1));
  n.leaves = {SeqState{std::move(xi), aodv}, SeqState{std::move(xi2), qmsg}};
  std::vector<Value> r;
  for (Symbol s : range) r.push_back(ip_atom(s));
  n.range = ip_set(std::move(r));
  n.rehash();
  return n;
}

NodeView view(const NodeState& n) {
  NodeView v;
  if (n.leaves.empty()) return v;
  const Valuation& xi = n.leaves.front().xi;
  v.ip = xi.get("ip"_sym);
  v.sn = xi.get("sn"_sym);
  v.rt = xi.get("rt"_sym);
  v.rreqs = xi.get("rreqs"_sym);
  v.store = xi.get("store"_sym);
  if (n.leaves.size() > 1) v.msgs = n.leaves.back().xi.get("msgs"_sym);
  return v;
}

}  // namespace awn::aodv
