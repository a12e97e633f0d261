#pragma once

#include <deque>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "awn/eval.hpp"
#include "awn/label.hpp"
#include "awn/program.hpp"
#include "awn/state.hpp"

namespace awn {

enum class ConnectPolicy { scripted, free };

struct SemanticsOptions {
  bool non_blocking = false;     // arrive at a node that cannot receive is ignored
  bool symmetric_links = false;  // connect/disconnect act on both ends at once
  ConnectPolicy connect_policy = ConnectPolicy::scripted;
  bool record_rules = true;  // fill in rule ids (costly during exploration)
};

// Raised for ill-formed terms met during a derivation: unbound variables,
// unguarded recursion, calls to undefined processes.
class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeqStep {
  Label label;
  SeqState target;
  std::string rule;
};

struct ParStep {
  Label label;
  std::vector<SeqState> leaves;
  std::string rule;
};

struct NodeStep {
  Label label;
  NodeState target;
  std::string rule;
};

struct NetStep {
  Label label;  // formal label
  Label shown;  // as printed in traces (casts show their sender)
  NetworkTerm target;
  std::string rule;
};

// Encapsulated step on interned node states.
struct FlatStep {
  Label label;
  Label shown;
  std::vector<NodePtr> nodes;
  std::string rule;
};

class Semantics {
 public:
  Semantics(const Program& prog, SemanticsOptions opts = {}, DataOptions data = {});

  const Program& program() const { return *prog_; }
  const SemanticsOptions& options() const { return opts_; }
  const Evaluator& evaluator() const { return eval_; }

  // Addresses that connect/disconnect may name under the free policy.
  void set_ip_universe(std::vector<Value> ips) { ips_ = std::move(ips); }
  const std::vector<Value>& ip_universe() const { return ips_; }

  // (xi, X(exps)) becomes ({params = values}, X(params)); other states are kept.
  SeqState normalise(Valuation xi, ProcPtr p) const;

  // --- sequential processes ---
  // All transitions except receive.
  std::vector<SeqStep> seq_steps(const SeqState& s) const;
  // Whether receive(m) is possible; this never depends on m.
  bool can_receive(const SeqState& s) const;
  std::vector<SeqStep> seq_receive(const SeqState& s, const Value& m) const;
  // Every transition, receive restricted to the given messages.
  std::vector<SeqStep> step_sequential(const SeqState& s, std::span<const Value> universe) const;

  // --- parallel processes (leaves of a <<| tree) ---
  std::vector<ParStep> par_steps(const ParShape& shape, const std::vector<SeqState>& leaves) const;
  bool par_can_receive(const ParShape& shape, const std::vector<SeqState>& leaves) const;
  std::vector<ParStep> par_receive(const ParShape& shape, const std::vector<SeqState>& leaves, const Value& m) const;
  std::vector<ParStep> step_parallel(const ParShape& shape, const std::vector<SeqState>& leaves,
                                     std::span<const Value> universe) const;

  // --- nodes ---
  // Casts, tau, deliver, and connect/disconnect under the free policy.
  std::vector<NodeStep> node_steps(const NodeState& n) const;
  // Arrival of m: {ip}¬{} when here, else the disregard loop {}¬{ip}.
  std::vector<NodeStep> node_arrive(const NodeState& n, const Value& m, bool here) const;
  // Every transition, arrive restricted to the given messages.
  std::vector<NodeStep> step_node(const NodeState& n, std::span<const Value> universe) const;

  // --- networks ---
  // Partial or encapsulated network. Arrive transitions of partial networks
  // are listed for universe messages only; for encapsulated networks the
  // universe gives the injectable newpkt messages.
  std::vector<NetStep> step_network(const NetworkTerm& net, std::span<const Value> universe) const;

  // Re-derives a step from its rule id; nullopt if the id does not apply.
  std::optional<SeqStep> replay(const SeqState& s, const std::string& rule, std::span<const Value> universe) const;
  std::optional<NetStep> replay(const NetworkTerm& net, const std::string& rule,
                                std::span<const Value> universe) const;

  // Node-level effect of a topology event, or nullopt if the node has no
  // transition with that label.
  std::optional<NodeState> node_topology(const NodeState& n, const Label& ev) const;

 private:
  void seq_walk(const Valuation& xi, ProcPtr p, int depth, const std::string& ctx, std::vector<SeqStep>& out) const;
  bool receive_walk(ProcPtr p, int depth) const;
  void recv_walk(const Valuation& xi, ProcPtr p, const Value& m, int depth, const std::string& ctx,
                 std::vector<SeqStep>& out) const;
  Valuation call_frame(const Valuation& xi, ProcPtr call) const;
  const ProcessDefinition& def_of(ProcPtr call) const;
  Value eval(const Valuation& xi, ExprPtr e) const;
  std::string rule(const std::string& ctx, const std::string& leaf) const;

  const Program* prog_;
  SemanticsOptions opts_;
  Evaluator eval_;
  std::vector<Value> ips_;
};

// Encapsulated-network stepping over interned node states, with per-node
// memoisation. Safe to call from several threads at once.
class FlatNetwork {
 public:
  explicit FlatNetwork(const Semantics& sem) : sem_(&sem) {}

  const Semantics& semantics() const { return *sem_; }
  NodeInterner& interner() { return interner_; }
  NodePtr intern(NodeState n) { return interner_.intern(std::move(n)); }

  // Casts (as tau) and node-local tau/deliver steps of [M].
  std::vector<FlatStep> internal_steps(const NetState& s);
  // ip:newpkt(d, dip) entering at node position i.
  std::vector<FlatStep> inject(const NetState& s, std::size_t i, const Value& d, const Value& dip);
  // connect/disconnect as a network transition; nullopt if blocked.
  std::optional<FlatStep> topology(const NetState& s, const Label& ev);

  NetState make_state(const NetworkTerm& net);

 private:
  struct NodeInfo {
    std::vector<NodeStep> steps;
    bool can_receive = false;
  };
  const NodeInfo& info(NodePtr n);
  std::vector<NodePtr> receivers(NodePtr n, const Value& m);

  const Semantics* sem_;
  NodeInterner interner_;
  static constexpr std::size_t kShards = 64;
  struct InfoShard {
    std::mutex mu;
    std::unordered_map<NodePtr, std::unique_ptr<NodeInfo>> map;
  };
  std::array<InfoShard, kShards> info_;
  struct RecvKey {
    NodePtr n;
    Value m;
    bool operator==(const RecvKey& o) const { return n == o.n && m == o.m; }
  };
  struct RecvHash {
    std::size_t operator()(const RecvKey& k) const { return hash_combine(k.n->hash, k.m.hash()); }
  };
  struct RecvShard {
    std::mutex mu;
    std::unordered_map<RecvKey, std::vector<NodePtr>, RecvHash> map;
  };
  std::array<RecvShard, kShards> recv_;
};

// Printing of states: `X(a;d,b)` for canonical calls,
// `{x = v} p` otherwise; `[Y(a) || Y(b)]` for networks.
std::string print_seq_state(const Program& prog, const SeqState& s);
std::string print_node_state(const Program& prog, const NodeState& n, bool with_ip = false);
std::string print_net(const Program& prog, const NetworkTerm& net);
std::string print_net(const Program& prog, const NetState& s, const NetShape& shape);

}  // namespace awn
