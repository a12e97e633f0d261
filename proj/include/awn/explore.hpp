#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "awn/lts.hpp"
#include "awn/program.hpp"
#include "awn/semantics.hpp"

namespace awn {

struct NodeSpec {
  Symbol ip;
  std::vector<Symbol> range;
};

enum class When { any, quiescent };

struct Injection {
  Symbol node;
  Symbol data;
  Symbol dip;
  When when = When::any;
};

struct ScriptEvent {
  enum class Kind { connect, disconnect, inject } kind = Kind::connect;
  Symbol from, to;      // connect/disconnect
  Injection injection;  // inject
  When when = When::any;
};

// Overrides one variable of a node's initial state. leaf 0 is the protocol
// process, leaf 1 the message buffer.
struct InitOverride {
  Symbol node;
  int leaf = 0;
  Symbol var;
  std::string expr;
};

struct ExploreBounds {
  std::size_t max_states = 1'000'000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  uint64_t max_sn = 16;       // own sn and every dsn in rt
  std::size_t max_queue = 4;  // msgs and each data queue in store
};

struct Scenario {
  std::string name;
  std::string library;  // path; empty for the AODV library
  std::string network;  // named network of the library; empty for model: aodv
  std::vector<NodeSpec> nodes;
  std::vector<Injection> inject;  // each fires at most once, in any order
  std::vector<ScriptEvent> script;
  ConnectPolicy policy = ConnectPolicy::scripted;
  std::size_t budget = 0;  // topology changes under the free policy
  bool symmetric = false;
  bool non_blocking = false;
  DataOptions data;
  ExploreBounds bounds;
  std::vector<InitOverride> init;
};

// Scenario YAML; relative library paths resolve against base_dir.
Scenario parse_scenario(const std::string& yaml_text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

// Network state plus the environment's progress.
struct ExploreState {
  NetState net;
  uint32_t injected = 0;  // bit i: inject[i] has fired
  uint16_t script_pos = 0;
  uint16_t budget_used = 0;

  std::size_t hash() const;
  friend bool operator==(const ExploreState& a, const ExploreState& b) {
    return a.injected == b.injected && a.script_pos == b.script_pos && a.budget_used == b.budget_used &&
           a.net == b.net;
  }
};

// The closed system [M] under a scenario's environment.
class Explorer {
 public:
  using State = ExploreState;

  Explorer(const Scenario& scn, std::shared_ptr<const Program> prog, bool record_rules = false);

  const Scenario& scenario() const { return scn_; }
  const Program& program() const { return *prog_; }
  const Semantics& semantics() const { return *sem_; }
  FlatNetwork& flat() { return *flat_; }
  const NetShape& shape() const { return *shape_; }
  const std::vector<Symbol>& ips() const { return ips_; }

  ExploreState initial();

  std::vector<Succ<State>> successors(const State& s);
  std::size_t hash(const State& s) const { return s.hash(); }
  bool equal(const State& a, const State& b) const { return a == b; }
  std::strong_ordering compare(const State& a, const State& b) const;
  bool stop(const State& s) const;

  std::optional<std::size_t> position(Symbol ip) const;
  std::string print(const State& s) const;

 private:
  std::optional<FlatStep> fire_injection(const NetState& s, const Injection& inj);

  Scenario scn_;
  std::shared_ptr<const Program> prog_;
  std::unique_ptr<Semantics> sem_;
  std::unique_ptr<FlatNetwork> flat_;
  std::shared_ptr<const NetShape> shape_;
  NetworkTerm init_term_;
  std::vector<Symbol> ips_;
};

// Program for a scenario: its library, plus IP and DATA constants for the
// names the scenario mentions.
std::shared_ptr<const Program> scenario_program(const Scenario& scn);

struct Exploration {
  std::unique_ptr<Explorer> explorer;
  Built<ExploreState> built;
  double seconds = 0;
};

Exploration explore(const Scenario& scn, int workers = 1, bool record_rules = false);

// Labels along the BFS tree from the initial state to s, with rule ids.
std::vector<uint32_t> path_edges(const Built<ExploreState>& b, uint32_t s);

}  // namespace awn
