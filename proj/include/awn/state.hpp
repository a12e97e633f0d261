#pragma once

#include <array>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_set>
#include <vector>

#include "awn/syntax.hpp"
#include "awn/valuation.hpp"
#include "awn/value.hpp"

namespace awn {

// (xi, p)
struct SeqState {
  Valuation xi;
  ProcPtr proc = nullptr;

  std::size_t hash() const { return hash_combine(xi.hash(), proc ? proc->id : 0); }
  friend bool operator==(const SeqState& a, const SeqState& b) { return a.proc == b.proc && a.xi == b.xi; }
  friend std::strong_ordering operator<=>(const SeqState& a, const SeqState& b);
};

// Shape of a <<| tree; leaves are numbered left to right. The shape never
// changes along a transition, only the leaf states do.
struct ParShape {
  int leaf = -1;  // >= 0 for a leaf
  std::shared_ptr<const ParShape> left, right;
  int lo = 0, hi = 0;  // leaf range [lo, hi)

  static std::shared_ptr<const ParShape> make_leaf(int index);
  static std::shared_ptr<const ParShape> make_par(std::shared_ptr<const ParShape> l, std::shared_ptr<const ParShape> r);
  bool same_as(const ParShape& o) const;
};

// ip : PP : R
struct NodeState {
  Symbol ip;
  std::shared_ptr<const ParShape> shape;
  std::vector<SeqState> leaves;
  Value range;  // SET_IP
  std::size_t hash = 0;

  void rehash();
  friend bool operator==(const NodeState& a, const NodeState& b);
  friend std::strong_ordering operator<=>(const NodeState& a, const NodeState& b);
};

using NodePtr = const NodeState*;

// Shape of a || tree over node positions.
struct NetShape {
  int node = -1;
  std::shared_ptr<const NetShape> left, right;
  int lo = 0, hi = 0;

  static std::shared_ptr<const NetShape> make_leaf(int index);
  static std::shared_ptr<const NetShape> make_par(std::shared_ptr<const NetShape> l, std::shared_ptr<const NetShape> r);
};

// Either a partial network (a || tree of nodes) or its encapsulation [M].
struct NetState {
  std::shared_ptr<const NetShape> shape;
  std::vector<NodePtr> nodes;
  bool encapsulated = false;

  std::size_t hash() const;
  friend bool operator==(const NetState& a, const NetState& b) {
    return a.encapsulated == b.encapsulated && a.nodes == b.nodes;
  }
};

// Structural order, independent of where nodes were interned.
std::strong_ordering compare(const NetState& a, const NetState& b);

// Thread-safe hash-consing of node states.
class NodeInterner {
 public:
  NodePtr intern(NodeState n);
  std::size_t size() const;

 private:
  struct PtrHash {
    std::size_t operator()(NodePtr n) const { return n->hash; }
  };
  struct PtrEq {
    bool operator()(NodePtr a, NodePtr b) const { return *a == *b; }
  };
  struct Shard {
    mutable std::mutex mu;
    std::unordered_set<NodePtr, PtrHash, PtrEq> index;
    std::deque<NodeState> store;
  };
  static constexpr std::size_t kShards = 64;
  std::array<Shard, kShards> shards_;
};

struct NetStateHash {
  std::size_t operator()(const NetState& s) const { return s.hash(); }
};

}  // namespace awn
