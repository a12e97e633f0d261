#include "awn/state.hpp"

namespace awn {

std::strong_ordering operator<=>(const SeqState& a, const SeqState& b) {
  uint32_t ia = a.proc ? a.proc->id : 0;
  uint32_t ib = b.proc ? b.proc->id : 0;
  if (auto c = ia <=> ib; c != 0) return c;
  return a.xi <=> b.xi;
}

std::shared_ptr<const ParShape> ParShape::make_leaf(int index) {
  auto s = std::make_shared<ParShape>();
  s->leaf = index;
  s->lo = index;
  s->hi = index + 1;
  return s;
}

std::shared_ptr<const ParShape> ParShape::make_par(std::shared_ptr<const ParShape> l, std::shared_ptr<const ParShape> r) {
  auto s = std::make_shared<ParShape>();
  s->lo = l->lo;
  s->hi = r->hi;
  s->left = std::move(l);
  s->right = std::move(r);
  return s;
}

bool ParShape::same_as(const ParShape& o) const {
  if (leaf != o.leaf || lo != o.lo || hi != o.hi) return false;
  if (leaf >= 0) return true;
  return left->same_as(*o.left) && right->same_as(*o.right);
}

void NodeState::rehash() {
  std::size_t h = hash_combine(std::hash<Symbol>()(ip), range.hash());
  for (const auto& l : leaves) h = hash_combine(h, l.hash());
  hash = h;
}

bool operator==(const NodeState& a, const NodeState& b) {
  if (&a == &b) return true;
  return a.hash == b.hash && a.ip == b.ip && a.range == b.range && a.leaves == b.leaves &&
         (a.shape == b.shape || a.shape->same_as(*b.shape));
}

std::strong_ordering operator<=>(const NodeState& a, const NodeState& b) {
  if (&a == &b) return std::strong_ordering::equal;
  if (auto c = a.ip <=> b.ip; c != 0) return c;
  if (auto c = a.range <=> b.range; c != 0) return c;
  std::size_t n = std::min(a.leaves.size(), b.leaves.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a.leaves[i] <=> b.leaves[i]; c != 0) return c;
  return a.leaves.size() <=> b.leaves.size();
}

std::shared_ptr<const NetShape> NetShape::make_leaf(int index) {
  auto s = std::make_shared<NetShape>();
  s->node = index;
  s->lo = index;
  s->hi = index + 1;
  return s;
}

std::shared_ptr<const NetShape> NetShape::make_par(std::shared_ptr<const NetShape> l, std::shared_ptr<const NetShape> r) {
  auto s = std::make_shared<NetShape>();
  s->lo = l->lo;
  s->hi = r->hi;
  s->left = std::move(l);
  s->right = std::move(r);
  return s;
}

std::size_t NetState::hash() const {
  std::size_t h = encapsulated ? 0x7f4a7c15 : 0x2545f491;
  for (NodePtr n : nodes) h = hash_combine(h, n->hash);
  return h;
}

std::strong_ordering compare(const NetState& a, const NetState& b) {
  if (auto c = a.encapsulated <=> b.encapsulated; c != 0) return c;
  std::size_t n = std::min(a.nodes.size(), b.nodes.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = *a.nodes[i] <=> *b.nodes[i]; c != 0) return c;
  return a.nodes.size() <=> b.nodes.size();
}

NodePtr NodeInterner::intern(NodeState n) {
  if (n.hash == 0) n.rehash();
  Shard& s = shards_[n.hash % kShards];
  std::lock_guard lock(s.mu);
  auto it = s.index.find(&n);
  if (it != s.index.end()) return *it;
  s.store.push_back(std::move(n));
  NodePtr p = &s.store.back();
  s.index.insert(p);
  return p;
}

std::size_t NodeInterner::size() const {
  std::size_t total = 0;
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mu);
    total += s.store.size();
  }
  return total;
}

}  // namespace awn
