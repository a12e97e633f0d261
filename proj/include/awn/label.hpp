#pragma once

#include <compare>
#include <optional>
#include <string>

#include "awn/value.hpp"

namespace awn {

enum class LabelKind : uint8_t {
  // sequential layer
  Broadcast,
  Groupcast,
  Unicast,
  NegUnicast,
  Send,
  Deliver,
  Receive,
  Tau,
  // node and network layers
  Cast,
  Arrive,
  Connect,
  Disconnect,
  NodeDeliver,
  NewPkt
};

// Field use per kind:
//   Broadcast(m)          m
//   Groupcast(D,m)        set1 = D, m
//   Unicast(dip,m)        a = dip, m
//   NegUnicast(dip)       a = dip
//   Send(m), Receive(m)   m
//   Deliver(d)            a = d
//   Cast(R,m)             set1 = R, m; a = sender in display labels only
//   Arrive(H,K,m)         set1 = H, set2 = K, m
//   Connect/Disconnect    a = ip, b = ip'
//   NodeDeliver(ip,d)     a = ip, b = d
//   NewPkt(ip,d,dip)      a = ip, b = d, c = dip
struct Label {
  LabelKind kind = LabelKind::Tau;
  Value m;
  Value set1;
  Value set2;
  Value a;
  Value b;
  Value c;

  static Label tau() { return {}; }
  static Label broadcast(Value m) { return {LabelKind::Broadcast, std::move(m), {}, {}, {}, {}, {}}; }
  static Label groupcast(Value d, Value m) { return {LabelKind::Groupcast, std::move(m), std::move(d), {}, {}, {}, {}}; }
  static Label unicast(Value dip, Value m) { return {LabelKind::Unicast, std::move(m), {}, {}, std::move(dip), {}, {}}; }
  static Label neg_unicast(Value dip) { return {LabelKind::NegUnicast, {}, {}, {}, std::move(dip), {}, {}}; }
  static Label send(Value m) { return {LabelKind::Send, std::move(m), {}, {}, {}, {}, {}}; }
  static Label deliver(Value d) { return {LabelKind::Deliver, {}, {}, {}, std::move(d), {}, {}}; }
  static Label receive(Value m) { return {LabelKind::Receive, std::move(m), {}, {}, {}, {}, {}}; }
  static Label cast(Value r, Value m) { return {LabelKind::Cast, std::move(m), std::move(r), {}, {}, {}, {}}; }
  // Display form of an encapsulated cast, printed `sender:*cast(m)`.
  static Label sent_cast(Value sender, Value r, Value m) {
    return {LabelKind::Cast, std::move(m), std::move(r), {}, std::move(sender), {}, {}};
  }
  static Label arrive(Value h, Value k, Value m) {
    return {LabelKind::Arrive, std::move(m), std::move(h), std::move(k), {}, {}, {}};
  }
  static Label connect(Value ip, Value ip2) { return {LabelKind::Connect, {}, {}, {}, std::move(ip), std::move(ip2), {}}; }
  static Label disconnect(Value ip, Value ip2) {
    return {LabelKind::Disconnect, {}, {}, {}, std::move(ip), std::move(ip2), {}};
  }
  static Label node_deliver(Value ip, Value d) {
    return {LabelKind::NodeDeliver, {}, {}, {}, std::move(ip), std::move(d), {}};
  }
  static Label newpkt(Value ip, Value d, Value dip) {
    return {LabelKind::NewPkt, {}, {}, {}, std::move(ip), std::move(d), std::move(dip)};
  }

  bool is_tau() const { return kind == LabelKind::Tau; }

  // Paper notation: `{b}:*cast(m)`, `{a}¬{}:arrive(m)`, `tau`, `b:deliver(d)`, ...
  std::string str() const;
  std::size_t hash() const;

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& x, const Label& y);
};

// The partial communication function: receive/send gives tau, cast/arrive gives
// the cast when H is inside R and K outside it, two arrives merge. Returns
// nullopt where undefined.
std::optional<Label> compose_gamma(const Label& x, const Label& y);

}  // namespace awn

template <>
struct std::hash<awn::Label> {
  std::size_t operator()(const awn::Label& l) const noexcept { return l.hash(); }
};
