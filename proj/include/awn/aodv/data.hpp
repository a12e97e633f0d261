#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "awn/signature.hpp"
#include "awn/symbol.hpp"
#include "awn/value.hpp"

namespace awn::aodv {

using Sqn = uint64_t;

// (dip, dsn, dsk, flag, hops, nhip, pre)
struct RouteEntry {
  Symbol dip;
  Sqn dsn = 0;
  bool known = true;  // dsk: kno / unkno
  bool valid = true;  // flag: val / inval
  uint64_t hops = 0;
  Symbol nhip;
  std::vector<Symbol> pre;  // sorted, unique

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

// At most one entry per destination, by construction.
using RoutingTable = std::map<Symbol, RouteEntry>;
using Dests = std::map<Symbol, Sqn>;

RoutingTable upd(const RoutingTable& rt, const RouteEntry& r);
RoutingTable inv(const RoutingTable& rt, const Dests& dests, InvalidationMode mode);

Sqn sqn(const RoutingTable& rt, Symbol dip);
bool sqn_known(const RoutingTable& rt, Symbol dip);
std::optional<bool> status(const RoutingTable& rt, Symbol dip);
std::optional<uint64_t> dhops(const RoutingTable& rt, Symbol dip);
std::optional<Symbol> nhop(const RoutingTable& rt, Symbol dip);
std::optional<std::vector<Symbol>> precs(const RoutingTable& rt, Symbol dip);
std::vector<Symbol> akD(const RoutingTable& rt);
std::vector<Symbol> kD(const RoutingTable& rt);
std::optional<RoutingTable> addprecrt(const RoutingTable& rt, Symbol dip, const std::vector<Symbol>& npre);
inline Sqn inc(Sqn n) { return n + 1; }

// {rip -> inc(sqn)} for every valid route whose next hop is nhip.
Dests broken(const RoutingTable& rt, Symbol nhip);
// Entries of dests that are valid in rt with next hop sip.
Dests affected(const RoutingTable& rt, const Dests& dests, Symbol sip);
// Union of the precursors of the listed destinations.
std::vector<Symbol> precsof(const RoutingTable& rt, const Dests& dests);
// Entries of dests whose route has at least one precursor.
Dests withprecs(const RoutingTable& rt, const Dests& dests);

// One line per entry, `dip dsn dsk flag hops nhip {pre,...}`, sorted by dip name.
std::string dump(const RoutingTable& rt);

// Sort names registered by register_signature.
namespace sorts {
Symbol Sqn();
Symbol Sqnk();
Symbol Flag();
Symbol Pending();
Symbol Route();
Symbol Rt();
Symbol Rid();
Symbol Rreqs();
Symbol DataQ();
Symbol QEntry();
Symbol Queues();
Symbol Msgs();
Symbol Dests();
}  // namespace sorts

// Conversions between the typed view and data values.
Value to_value(const RouteEntry& r);
Value to_value(const RoutingTable& rt);
Value dests_value(const Dests& d);
RouteEntry entry_from_value(const Value& v);
RoutingTable table_from_value(const Value& v);
Dests dests_from_value(const Value& v);

// Adds the AODV sorts, constants, message constructors and operators.
void register_signature(Signature& sig);

// builtin() plus the AODV signature.
Signature standard_signature();

}  // namespace awn::aodv
