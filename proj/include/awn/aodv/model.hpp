#pragma once

#include <string>
#include <vector>

#include "awn/program.hpp"
#include "awn/state.hpp"

namespace awn::aodv {

// models/aodv.awn in the source tree.
std::string default_library_path();

// Reads an AWN source file over the AODV signature.
Program load_library(const std::string& path);

// ip : ({ip, sn = 1, rt = {}, rreqs = {}, store = {}} AODV <<| {msgs = []} QMSG) : range
NodeState initial_node(const Program& prog, Symbol ip, const std::vector<Symbol>& range);

// The node variables as seen by the AODV leaf; null where the leaf does not
// bind them (for instance in non-AODV libraries).
struct NodeView {
  const Value* ip = nullptr;
  const Value* sn = nullptr;
  const Value* rt = nullptr;
  const Value* rreqs = nullptr;
  const Value* store = nullptr;
  const Value* msgs = nullptr;
};
NodeView view(const NodeState& n);

}  // namespace awn::aodv
