#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "awn/aodv/data.hpp"
#include "awn/program.hpp"
#include "awn/semantics.hpp"

namespace awn::test {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program toy() { return parse_program(slurp(AWN_SOURCE_DIR "/models/toy.awn"), aodv::standard_signature()); }

inline std::string scenario_path(const std::string& name) { return AWN_SOURCE_DIR "/scenarios/" + name + ".yaml"; }

inline Value value_of(const Program& prog, const std::string& text) {
  Evaluator ev(prog.signature());
  return ev.eval({}, parse_expression(prog, text));
}

inline std::string ranges(const NetworkTerm& net) {
  std::string s;
  for (const auto& n : net.nodes) s += (s.empty() ? "" : " ") + n.ip.str() + ":" + n.range.str();
  return s;
}

inline std::set<std::string> render(const Program& prog, const std::vector<SeqStep>& steps) {
  std::set<std::string> out;
  for (const auto& st : steps) out.insert(st.label.str() + " => " + print_seq_state(prog, st.target));
  return out;
}

inline std::set<std::string> render(const Program& prog, const std::vector<NetStep>& steps, bool with_ranges = false) {
  std::set<std::string> out;
  for (const auto& st : steps) {
    std::string s = st.label.str();
    if (!(st.shown == st.label)) s += " [" + st.shown.str() + "]";
    s += " => " + print_net(prog, st.target);
    if (with_ranges) s += " | " + ranges(st.target);
    out.insert(s);
  }
  return out;
}

}  // namespace awn::test
