#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "awn/aodv/data.hpp"
#include "awn/program.hpp"
#include "awn/semantics.hpp"

// Rule fixtures read from tests/fixtures/sos.txt, shared by the unit tests
// and the acceptance runner.
namespace awn::fixtures {

struct Fixture {
  std::string name;
  std::string mode;  // seq, par or net
  std::string term;
  std::vector<std::string> options;
  std::vector<std::string> universe{"mg(d, a)", "mg(e, b)"};
  std::set<std::string> expected;
  int line = 0;

  friend void PrintTo(const Fixture& f, std::ostream* os) { *os << f.name; }

  bool has(const std::string& o) const {
    for (const auto& x : options)
      if (x == o) return true;
    return false;
  }
};

struct Outcome {
  std::set<std::string> derived;
  std::vector<std::string> replay_failures;
  bool ok(const Fixture& f) const { return derived == f.expected && replay_failures.empty(); }
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

inline std::vector<Fixture> load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<Fixture> out;
  Fixture cur;
  bool open = false;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    auto fail = [&](const std::string& what) {
      throw std::runtime_error(path + ":" + std::to_string(no) + ": " + what);
    };
    if (key == "fixture") {
      if (open) fail("missing end");
      cur = Fixture{};
      cur.name = rest;
      cur.line = no;
      open = true;
    } else if (!open) {
      fail("expected fixture");
    } else if (key == "seq" || key == "par" || key == "net") {
      cur.mode = key;
      cur.term = rest;
    } else if (key == "options") {
      std::istringstream ss(rest);
      for (std::string o; ss >> o;) cur.options.push_back(o);
    } else if (key == "universe") {
      cur.universe.clear();
      std::istringstream ss(rest);
      for (std::string m; std::getline(ss, m, ';');)
        if (!trim(m).empty()) cur.universe.push_back(trim(m));
    } else if (key == "=>") {
      cur.expected.insert(rest);
    } else if (key == "end") {
      if (cur.mode.empty()) fail("fixture without a term");
      out.push_back(cur);
      open = false;
    } else {
      fail("unknown key " + key);
    }
  }
  if (open) throw std::runtime_error(path + ": missing end");
  return out;
}

inline Program program(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), aodv::standard_signature());
}

inline Outcome derive(const Program& prog, const Fixture& f) {
  Evaluator ev(prog.signature());
  std::vector<Value> universe;
  for (const auto& m : f.universe) universe.push_back(ev.eval({}, parse_expression(prog, m)));
  SemanticsOptions o;
  o.non_blocking = f.has("non_blocking");
  o.symmetric_links = f.has("symmetric");
  o.connect_policy = f.has("free") ? ConnectPolicy::free : ConnectPolicy::scripted;
  Semantics s(prog, o);
  s.set_ip_universe({ev.eval({}, parse_expression(prog, "a")), ev.eval({}, parse_expression(prog, "b"))});

  Outcome out;
  if (f.mode == "seq") {
    SeqState from = s.normalise({}, parse_process(prog, f.term));
    for (const auto& st : s.step_sequential(from, universe)) {
      out.derived.insert(st.label.str() + " => " + print_seq_state(prog, st.target));
      auto again = s.replay(from, st.rule, universe);
      if (!again || !(again->label == st.label && again->target == st.target)) out.replay_failures.push_back(st.rule);
    }
  } else if (f.mode == "par") {
    NodeState n = parse_network(prog, "a : " + f.term + " : {}").nodes.front();
    for (const auto& st : s.step_parallel(*n.shape, n.leaves, universe)) {
      std::string t;
      for (const auto& l : st.leaves) t += (t.empty() ? "" : " <<| ") + print_seq_state(prog, l);
      out.derived.insert(st.label.str() + " => " + t);
    }
  } else {
    NetworkTerm t = parse_network(prog, f.term);
    for (const auto& st : s.step_network(t, universe)) {
      std::string line = st.label.str();
      if (!(st.shown == st.label)) line += " [" + st.shown.str() + "]";
      line += " => " + print_net(prog, st.target);
      if (f.has("ranges")) {
        std::string r;
        for (const auto& n : st.target.nodes) r += (r.empty() ? "" : " ") + n.ip.str() + ":" + n.range.str();
        line += " | " + r;
      }
      out.derived.insert(line);
      auto again = s.replay(t, st.rule, universe);
      if (!again || !(again->label == st.label && again->target == st.target)) out.replay_failures.push_back(st.rule);
    }
  }
  return out;
}

}  // namespace awn::fixtures
