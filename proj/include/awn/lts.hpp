#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <omp.h>

#include "awn/label.hpp"

namespace awn {

struct LtsEdge {
  uint32_t src;
  uint32_t label;  // index into Lts::labels
  uint32_t dst;
  uint32_t shown;  // index into Lts::shown_labels
};

// Finite labelled transition system. Edges are grouped by source.
struct Lts {
  uint32_t num_states = 0;
  uint32_t initial = 0;
  std::vector<Label> labels;
  std::vector<Label> shown_labels;
  std::vector<LtsEdge> edges;
  bool truncated = false;
  std::size_t frontier = 0;  // states left unexpanded or dropped at a bound

  uint32_t label_id(const Label& l);
  uint32_t shown_id(const Label& l);
  void add_edge(uint32_t src, const Label& label, uint32_t dst, const Label& shown) {
    edges.push_back({src, label_id(label), dst, shown_id(shown)});
  }
  void add_edge(uint32_t src, const Label& label, uint32_t dst) { add_edge(src, label, dst, label); }

  // CSR index over edges; call after the last add_edge.
  void finalise();
  std::size_t out_begin(uint32_t s) const { return offsets_[s]; }
  std::size_t out_end(uint32_t s) const { return offsets_[s + 1]; }
  std::size_t out_degree(uint32_t s) const { return offsets_[s + 1] - offsets_[s]; }

  // `states N transitions M initial I truncated B`, then `src\tlabel\tdst`.
  std::string dump() const;

 private:
  std::map<Label, uint32_t> label_index_;
  std::map<Label, uint32_t> shown_index_;
  std::vector<std::size_t> offsets_;
};

struct Bounds {
  std::size_t max_states = 1'000'000;
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
};

template <class State>
struct Succ {
  Label label;
  Label shown;
  State target;
  std::string rule;
};

struct Parent {
  uint32_t state = std::numeric_limits<uint32_t>::max();
  uint32_t edge = std::numeric_limits<uint32_t>::max();
};

template <class State>
struct Built {
  Lts lts;
  std::vector<State> states;
  std::vector<Parent> parent;  // BFS tree
  std::vector<uint32_t> depth;
  std::vector<char> cut;  // 1: some successors were not explored
  std::vector<std::string> rules;  // per edge, when the system records them
};

// Breadth-first closure of a transition system.
//
// A system provides
//   std::vector<Succ<State>> successors(const State&)   (thread-safe)
//   std::size_t hash(const State&) const
//   bool equal(const State&, const State&) const
//   std::strong_ordering compare(const State&, const State&) const
//   bool stop(const State&) const   (true: state exceeds a data bound)
//
// Successors of each level are computed with `workers` OpenMP threads (serial
// when workers <= 1) and merged in a fixed order, so the result does not
// depend on the worker count.
template <class Sys>
Built<typename Sys::State> build_lts(Sys& sys, const typename Sys::State& init, const Bounds& bounds,
                                     int workers = 1) {
  using State = typename Sys::State;
  struct Hash {
    const Sys* sys;
    std::size_t operator()(const State& s) const { return sys->hash(s); }
  };
  struct Eq {
    const Sys* sys;
    bool operator()(const State& a, const State& b) const { return sys->equal(a, b); }
  };
  Built<State> out;
  std::unordered_map<State, uint32_t, Hash, Eq> index(1024, Hash{&sys}, Eq{&sys});
  auto add_state = [&](const State& s, Parent p, uint32_t d) {
    uint32_t id = static_cast<uint32_t>(out.states.size());
    out.states.push_back(s);
    out.parent.push_back(p);
    out.depth.push_back(d);
    out.cut.push_back(0);
    index.emplace(s, id);
    return id;
  };
  add_state(init, {}, 0);
  out.lts.initial = 0;

  std::vector<uint32_t> level{0};
  uint32_t depth = 0;
  while (!level.empty()) {
    std::vector<std::vector<Succ<State>>> succ(level.size());
    std::vector<char> stopped(level.size(), 0);
    auto expand = [&](std::size_t k) {
      const State& s = out.states[level[k]];
      if (sys.stop(s)) {
        stopped[k] = 1;
        return;
      }
      auto v = sys.successors(s);
      std::stable_sort(v.begin(), v.end(), [&](const Succ<State>& a, const Succ<State>& b) {
        if (auto c = a.label <=> b.label; c != 0) return c < 0;
        if (auto c = sys.compare(a.target, b.target); c != 0) return c < 0;
        return a.shown < b.shown;
      });
      v.erase(std::unique(v.begin(), v.end(),
                          [&](const Succ<State>& a, const Succ<State>& b) {
                            return a.label == b.label && sys.equal(a.target, b.target);
                          }),
              v.end());
      succ[k] = std::move(v);
    };
    if (workers > 1) {
      const long n = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
      for (long k = 0; k < n; ++k) expand(static_cast<std::size_t>(k));
    } else {
      for (std::size_t k = 0; k < level.size(); ++k) expand(k);
    }

    std::vector<uint32_t> next;
    const bool at_depth_bound = depth >= bounds.max_depth;
    for (std::size_t k = 0; k < level.size(); ++k) {
      uint32_t src = level[k];
      if (stopped[k]) {
        out.cut[src] = 1;
        out.lts.truncated = true;
        ++out.lts.frontier;
        continue;
      }
      if (at_depth_bound) {
        if (!succ[k].empty()) {
          out.cut[src] = 1;
          out.lts.truncated = true;
          ++out.lts.frontier;
        }
        continue;
      }
      for (auto& sc : succ[k]) {
        auto it = index.find(sc.target);
        uint32_t dst;
        if (it != index.end()) {
          dst = it->second;
        } else if (out.states.size() >= bounds.max_states) {
          out.cut[src] = 1;
          out.lts.truncated = true;
          ++out.lts.frontier;
          continue;
        } else {
          dst = add_state(sc.target, {src, static_cast<uint32_t>(out.lts.edges.size())}, depth + 1);
          next.push_back(dst);
        }
        out.lts.add_edge(src, sc.label, dst, sc.shown);
        out.rules.push_back(std::move(sc.rule));
      }
    }
    level = std::move(next);
    ++depth;
  }
  out.lts.num_states = static_cast<uint32_t>(out.states.size());
  out.lts.finalise();
  return out;
}

}  // namespace awn
