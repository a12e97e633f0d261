#pragma once

#include <optional>
#include <string>
#include <vector>

#include "awn/explore.hpp"

namespace awn {

enum class Verdict { pass, violation, inconclusive };
const char* verdict_name(Verdict v);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::size_t checked = 0;  // transitions or states examined
  std::string detail;
  // Witness: edge indices from the initial state. For lassos, edges from
  // loop_start on repeat forever.
  std::vector<uint32_t> trace;
  int64_t loop_start = -1;
  bool deadlock_end = false;
  std::vector<std::string> cycle;  // routing loop, when one was found
};

// Route-reply consistency: every rrep cast by ip_c for dip_c != ip_c matches
// ip_c's routing table in the source state.
CheckResult check_prop1(const Exploration& e);

// For every state and destination: the sequence-number/hop-count invariant
// on every arc of the routing graph, and acyclicity of the graph.
CheckResult check_loop_freedom(const Exploration& e);

// Along every transition no node's sn or sqn(rt, dip) decreases.
CheckResult check_monotonicity(const Exploration& e);

// AG((oip:newpkt(d,dip) & connected*(oip,dip)) => AF(disconnect(*,*) | dip:deliver(d)))
// for every injection of the scenario. Truncated explorations give
// inconclusive rather than pass.
CheckResult check_packet_delivery(const Exploration& e);

// Arcs (ip, nhip) of R_N(dip) in a state.
std::vector<std::pair<Symbol, Symbol>> routing_arcs(const Exploration& e, uint32_t state, Symbol dip);
// DOT digraph over all node addresses.
std::string routing_graph_dot(const Exploration& e, uint32_t state, Symbol dip);

// Directed reachability over ranges.
bool connected_star(const NetState& s, Symbol from, Symbol to);

// `<step>: <label> :: <rule-id>` lines for a witness.
std::string format_trace(const Exploration& e, const CheckResult& r);

}  // namespace awn
