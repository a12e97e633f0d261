#include "awn/label.hpp"

#include <algorithm>
#include <optional>

namespace awn {

std::string Label::str() const {
  switch (kind) {
    case LabelKind::Broadcast: return "broadcast(" + m.str() + ")";
    case LabelKind::Groupcast: return "groupcast(" + set1.str() + ", " + m.str() + ")";
    case LabelKind::Unicast: return "unicast(" + a.str() + ", " + m.str() + ")";
    case LabelKind::NegUnicast: return "¬unicast(" + a.str() + ")";
    case LabelKind::Send: return "send(" + m.str() + ")";
    case LabelKind::Deliver: return "deliver(" + a.str() + ")";
    case LabelKind::Receive: return "receive(" + m.str() + ")";
    case LabelKind::Tau: return "tau";
    case LabelKind::Cast: return (a ? a.str() : set1.str()) + ":*cast(" + m.str() + ")";
    case LabelKind::Arrive: return set1.str() + "¬" + set2.str() + ":arrive(" + m.str() + ")";
    case LabelKind::Connect: return "connect(" + a.str() + "," + b.str() + ")";
    case LabelKind::Disconnect: return "disconnect(" + a.str() + "," + b.str() + ")";
    case LabelKind::NodeDeliver: return a.str() + ":deliver(" + b.str() + ")";
    case LabelKind::NewPkt: return a.str() + ":newpkt(" + b.str() + "," + c.str() + ")";
  }
  return "?";
}

std::size_t Label::hash() const {
  std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b1u;
  for (const Value* v : {&m, &set1, &set2, &a, &b, &c}) h = hash_combine(h, v->hash());
  return h;
}

std::strong_ordering operator<=>(const Label& x, const Label& y) {
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.m <=> y.m; c != 0) return c;
  if (auto c = x.set1 <=> y.set1; c != 0) return c;
  if (auto c = x.set2 <=> y.set2; c != 0) return c;
  if (auto c = x.a <=> y.a; c != 0) return c;
  if (auto c = x.b <=> y.b; c != 0) return c;
  return x.c <=> y.c;
}

namespace {

bool subset(const Value& small, const Value& big) {
  for (const auto& x : small.items())
    if (!big.set_contains(x)) return false;
  return true;
}

bool disjoint(const Value& p, const Value& q) {
  for (const auto& x : p.items())
    if (q.set_contains(x)) return false;
  return true;
}

Value set_union(const Value& p, const Value& q) {
  std::vector<Value> xs(p.items().begin(), p.items().end());
  xs.insert(xs.end(), q.items().begin(), q.items().end());
  return Value::set(p.sort(), std::move(xs));
}

}  // namespace

std::optional<Label> compose_gamma(const Label& x, const Label& y) {
  if (x.kind == LabelKind::Receive && y.kind == LabelKind::Send && x.m == y.m) return Label::tau();
  const Label* cast = nullptr;
  const Label* arrive = nullptr;
  if (x.kind == LabelKind::Cast && y.kind == LabelKind::Arrive) {
    cast = &x;
    arrive = &y;
  } else if (x.kind == LabelKind::Arrive && y.kind == LabelKind::Cast) {
    cast = &y;
    arrive = &x;
  }
  if (cast) {
    if (cast->m == arrive->m && subset(arrive->set1, cast->set1) && disjoint(arrive->set2, cast->set1)) return *cast;
    return std::nullopt;
  }
  if (x.kind == LabelKind::Arrive && y.kind == LabelKind::Arrive && x.m == y.m)
    return Label::arrive(set_union(x.set1, y.set1), set_union(x.set2, y.set2), x.m);
  return std::nullopt;
}

}  // namespace awn
