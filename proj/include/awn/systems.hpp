#pragma once

#include <span>
#include <vector>

#include "awn/lts.hpp"
#include "awn/semantics.hpp"

namespace awn {

// Adapters from the layered semantics to build_lts.

class SeqSystem {
 public:
  using State = SeqState;
  SeqSystem(const Semantics& sem, std::vector<Value> universe) : sem_(&sem), universe_(std::move(universe)) {}

  std::vector<Succ<State>> successors(const State& s) const {
    std::vector<Succ<State>> out;
    for (auto& st : sem_->step_sequential(s, universe_)) out.push_back({st.label, st.label, std::move(st.target), st.rule});
    return out;
  }
  std::size_t hash(const State& s) const { return s.hash(); }
  bool equal(const State& a, const State& b) const { return a == b; }
  std::strong_ordering compare(const State& a, const State& b) const { return a <=> b; }
  bool stop(const State&) const { return false; }

 private:
  const Semantics* sem_;
  std::vector<Value> universe_;
};

class ParSystem {
 public:
  using State = std::vector<SeqState>;
  ParSystem(const Semantics& sem, std::shared_ptr<const ParShape> shape, std::vector<Value> universe)
      : sem_(&sem), shape_(std::move(shape)), universe_(std::move(universe)) {}

  std::vector<Succ<State>> successors(const State& s) const {
    std::vector<Succ<State>> out;
    for (auto& st : sem_->step_parallel(*shape_, s, universe_))
      out.push_back({st.label, st.label, std::move(st.leaves), st.rule});
    return out;
  }
  std::size_t hash(const State& s) const {
    std::size_t h = 0;
    for (const auto& l : s) h = hash_combine(h, l.hash());
    return h;
  }
  bool equal(const State& a, const State& b) const { return a == b; }
  std::strong_ordering compare(const State& a, const State& b) const {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }
  bool stop(const State&) const { return false; }

 private:
  const Semantics* sem_;
  std::shared_ptr<const ParShape> shape_;
  std::vector<Value> universe_;
};

// Partial or encapsulated network through the generic derivation.
class NetSystem {
 public:
  using State = NetworkTerm;
  NetSystem(const Semantics& sem, std::vector<Value> universe) : sem_(&sem), universe_(std::move(universe)) {}

  std::vector<Succ<State>> successors(const State& s) const {
    std::vector<Succ<State>> out;
    for (auto& st : sem_->step_network(s, universe_)) out.push_back({st.label, st.shown, std::move(st.target), st.rule});
    return out;
  }
  std::size_t hash(const State& s) const { return s.hash(); }
  bool equal(const State& a, const State& b) const { return a == b; }
  std::strong_ordering compare(const State& a, const State& b) const { return a <=> b; }
  bool stop(const State&) const { return false; }

 private:
  const Semantics* sem_;
  std::vector<Value> universe_;
};

}  // namespace awn
