#include "awn/value.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace awn {

struct Value::Node {
  Symbol sort;
  ValueKind kind;
  uint64_t scalar = 0;       // bool, nat, atom id or ctor name id
  std::vector<Value> items;  // maps store key,val,key,val,...
  std::size_t hash = 0;
};

namespace {

std::size_t compute_hash(const Symbol sort, ValueKind kind, uint64_t scalar,
                         const std::vector<Value>& items) {
  std::size_t h = std::hash<uint32_t>()(sort.id());
  h = hash_combine(h, static_cast<std::size_t>(kind));
  h = hash_combine(h, std::hash<uint64_t>()(scalar));
  for (const auto& v : items) h = hash_combine(h, v.hash());
  return h;
}

const std::vector<Value>& empty_items() {
  static const std::vector<Value> e;
  return e;
}

}  // namespace

namespace sorts {
Symbol Bool() { static const Symbol s = Symbol::intern("BOOL"); return s; }
Symbol Nat() { static const Symbol s = Symbol::intern("NAT"); return s; }
Symbol Data() { static const Symbol s = Symbol::intern("DATA"); return s; }
Symbol Msg() { static const Symbol s = Symbol::intern("MSG"); return s; }
Symbol Ip() { static const Symbol s = Symbol::intern("IP"); return s; }
Symbol SetIp() { static const Symbol s = Symbol::intern("SET_IP"); return s; }
}  // namespace sorts

Value Value::boolean(bool b) {
  static const Value t = [] {
    auto n = std::make_shared<Node>(Node{sorts::Bool(), ValueKind::Bool, 1, {}, 0});
    n->hash = compute_hash(n->sort, n->kind, n->scalar, n->items);
    return Value(n);
  }();
  static const Value f = [] {
    auto n = std::make_shared<Node>(Node{sorts::Bool(), ValueKind::Bool, 0, {}, 0});
    n->hash = compute_hash(n->sort, n->kind, n->scalar, n->items);
    return Value(n);
  }();
  return b ? t : f;
}

Value Value::nat(Symbol sort, uint64_t v) {
  auto n = std::make_shared<Node>(Node{sort, ValueKind::Nat, v, {}, 0});
  n->hash = compute_hash(sort, n->kind, v, n->items);
  return Value(std::move(n));
}

Value Value::atom(Symbol sort, Symbol name) {
  auto n = std::make_shared<Node>(Node{sort, ValueKind::Atom, name.id(), {}, 0});
  n->hash = compute_hash(sort, n->kind, n->scalar, n->items);
  return Value(std::move(n));
}

Value Value::ctor(Symbol sort, Symbol name, std::vector<Value> args) {
  auto n = std::make_shared<Node>(Node{sort, ValueKind::Ctor, name.id(), std::move(args), 0});
  n->hash = compute_hash(sort, n->kind, n->scalar, n->items);
  return Value(std::move(n));
}

Value Value::set(Symbol sort, std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  auto n = std::make_shared<Node>(Node{sort, ValueKind::Set, 0, std::move(elems), 0});
  n->hash = compute_hash(sort, n->kind, 0, n->items);
  return Value(std::move(n));
}

Value Value::map(Symbol sort, std::vector<std::pair<Value, Value>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Value> flat;
  flat.reserve(entries.size() * 2);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].first == entries[i - 1].first)
      throw std::invalid_argument("duplicate map key " + entries[i].first.str());
    flat.push_back(std::move(entries[i].first));
    flat.push_back(std::move(entries[i].second));
  }
  auto n = std::make_shared<Node>(Node{sort, ValueKind::Map, 0, std::move(flat), 0});
  n->hash = compute_hash(sort, n->kind, 0, n->items);
  return Value(std::move(n));
}

Value Value::seq(Symbol sort, std::vector<Value> items) {
  auto n = std::make_shared<Node>(Node{sort, ValueKind::Seq, 0, std::move(items), 0});
  n->hash = compute_hash(sort, n->kind, 0, n->items);
  return Value(std::move(n));
}

ValueKind Value::kind() const { return node_->kind; }
Symbol Value::sort() const { return node_->sort; }

bool Value::as_bool() const {
  if (!node_ || node_->kind != ValueKind::Bool) throw std::logic_error("value is not a boolean");
  return node_->scalar != 0;
}

uint64_t Value::as_nat() const {
  if (!node_ || node_->kind != ValueKind::Nat) throw std::logic_error("value is not a number");
  return node_->scalar;
}

Symbol Value::as_atom() const {
  if (!node_ || node_->kind != ValueKind::Atom) throw std::logic_error("value is not an atom");
  return Symbol::from_id(static_cast<uint32_t>(node_->scalar));
}

Symbol Value::ctor_name() const {
  if (!node_ || node_->kind != ValueKind::Ctor) throw std::logic_error("value is not a constructor term");
  return Symbol::from_id(static_cast<uint32_t>(node_->scalar));
}

std::span<const Value> Value::items() const {
  return node_ ? std::span<const Value>(node_->items) : std::span<const Value>(empty_items());
}

std::size_t Value::size() const {
  if (!node_) return 0;
  return node_->kind == ValueKind::Map ? node_->items.size() / 2 : node_->items.size();
}

std::size_t Value::map_size() const { return node_->items.size() / 2; }
const Value& Value::map_key(std::size_t i) const { return node_->items[2 * i]; }
const Value& Value::map_val(std::size_t i) const { return node_->items[2 * i + 1]; }

const Value* Value::map_find(const Value& key) const {
  std::size_t lo = 0, hi = map_size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    auto c = map_key(mid) <=> key;
    if (c == 0) return &map_val(mid);
    if (c < 0) lo = mid + 1; else hi = mid;
  }
  return nullptr;
}

bool Value::set_contains(const Value& v) const {
  return std::binary_search(node_->items.begin(), node_->items.end(), v);
}

std::size_t Value::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.sort <=> y.sort; c != 0) return c;
  if (auto c = x.scalar <=> y.scalar; c != 0) return c;
  std::size_t n = std::min(x.items.size(), y.items.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = x.items[i] <=> y.items[i]; c != 0) return c;
  return x.items.size() <=> y.items.size();
}

std::string Value::str() const {
  if (!node_) return "<null>";
  std::ostringstream os;
  auto list = [&](const char* open, const char* close) {
    os << open;
    for (std::size_t i = 0; i < node_->items.size(); ++i) {
      if (i) os << ", ";
      os << node_->items[i].str();
    }
    os << close;
  };
  switch (node_->kind) {
    case ValueKind::Bool: os << (node_->scalar ? "true" : "false"); break;
    case ValueKind::Nat: os << node_->scalar; break;
    case ValueKind::Atom: os << as_atom().str(); break;
    case ValueKind::Ctor:
      os << ctor_name().str();
      list("(", ")");
      break;
    case ValueKind::Set: list("{", "}"); break;
    case ValueKind::Seq: list("[", "]"); break;
    case ValueKind::Map:
      os << "{";
      for (std::size_t i = 0; i < map_size(); ++i) {
        if (i) os << ", ";
        os << map_key(i).str() << " |-> " << map_val(i).str();
      }
      os << "}";
      break;
  }
  return os.str();
}

Value ip_set(std::vector<Value> ips) { return Value::set(sorts::SetIp(), std::move(ips)); }
Value ip_atom(Symbol name) { return Value::atom(sorts::Ip(), name); }

}  // namespace awn
