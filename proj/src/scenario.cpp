#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <yaml-cpp/yaml.h>

#include "awn/explore.hpp"

namespace awn {

namespace {

[[noreturn]] void bad(const YAML::Node& n, const std::string& msg) {
  throw std::runtime_error("scenario line " + std::to_string(n.Mark().line + 1) + ": " + msg);
}

Symbol sym(const YAML::Node& n, const char* key) {
  if (!n[key]) bad(n, std::string("missing key '") + key + "'");
  return Symbol::intern(n[key].as<std::string>());
}

When when_of(const YAML::Node& n) {
  if (!n["when"]) return When::any;
  auto w = n["when"].as<std::string>();
  if (w == "any") return When::any;
  if (w == "quiescent") return When::quiescent;
  bad(n, "when must be 'any' or 'quiescent'");
}

Injection injection(const YAML::Node& n) {
  Injection i;
  i.node = sym(n, "node");
  i.data = sym(n, "data");
  i.dip = sym(n, "dip");
  i.when = when_of(n);
  return i;
}

void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed) {
  for (const auto& kv : n) {
    auto k = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) bad(kv.first, "unknown key '" + k + "'");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
  YAML::Node root = YAML::Load(text);
  if (!root.IsMap()) throw std::runtime_error("scenario must be a mapping");
  check_keys(root, {"name", "model", "library", "network", "nodes", "inject", "script", "topology", "bounds",
                    "options", "init"});
  Scenario s;
  if (root["name"]) s.name = root["name"].as<std::string>();
  if (root["library"]) {
    std::filesystem::path p = root["library"].as<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    s.library = p.lexically_normal().string();
  }
  if (root["model"] && root["model"].as<std::string>() != "aodv") bad(root["model"], "only model: aodv is known");
  if (root["network"]) s.network = root["network"].as<std::string>();
  if (root["network"] && root["nodes"]) bad(root["nodes"], "give either network or nodes");
  if (!root["network"] && !root["nodes"]) throw std::runtime_error("scenario needs network or nodes");

  for (const auto& n : root["nodes"]) {
    check_keys(n, {"ip", "range"});
    NodeSpec ns;
    ns.ip = sym(n, "ip");
    for (const auto& r : n["range"]) ns.range.push_back(Symbol::intern(r.as<std::string>()));
    s.nodes.push_back(std::move(ns));
  }
  for (const auto& n : root["inject"]) {
    check_keys(n, {"node", "data", "dip", "when"});
    s.inject.push_back(injection(n));
  }
  if (s.inject.size() > 32) bad(root["inject"], "at most 32 injections");
  for (const auto& n : root["script"]) {
    check_keys(n, {"event", "from", "to", "node", "data", "dip", "when"});
    ScriptEvent e;
    auto kind = n["event"] ? n["event"].as<std::string>() : "";
    if (kind == "connect" || kind == "disconnect") {
      e.kind = kind == "connect" ? ScriptEvent::Kind::connect : ScriptEvent::Kind::disconnect;
      e.from = sym(n, "from");
      e.to = sym(n, "to");
    } else if (kind == "inject") {
      e.kind = ScriptEvent::Kind::inject;
      e.injection = injection(n);
    } else {
      bad(n, "event must be connect, disconnect or inject");
    }
    e.when = when_of(n);
    s.script.push_back(std::move(e));
  }
  if (auto t = root["topology"]) {
    check_keys(t, {"policy", "budget", "symmetric"});
    if (t["policy"]) {
      auto p = t["policy"].as<std::string>();
      if (p == "scripted") s.policy = ConnectPolicy::scripted;
      else if (p == "free") s.policy = ConnectPolicy::free;
      else bad(t["policy"], "policy must be scripted or free");
    }
    if (t["budget"]) {
      long b = t["budget"].as<long>();
      if (b < 0) bad(t["budget"], "budget must be >= 0");
      s.budget = static_cast<std::size_t>(b);
    }
    if (t["symmetric"]) s.symmetric = t["symmetric"].as<bool>();
  }
  if (auto b = root["bounds"]) {
    check_keys(b, {"max_states", "max_depth", "max_sn", "max_queue"});
    if (b["max_states"]) s.bounds.max_states = b["max_states"].as<std::size_t>();
    if (b["max_depth"]) s.bounds.max_depth = b["max_depth"].as<std::size_t>();
    if (b["max_sn"]) s.bounds.max_sn = b["max_sn"].as<uint64_t>();
    if (b["max_queue"]) s.bounds.max_queue = b["max_queue"].as<std::size_t>();
  }
  if (auto o = root["options"]) {
    check_keys(o, {"non_blocking", "inv_mode", "intermediate_rrep"});
    if (o["non_blocking"]) s.non_blocking = o["non_blocking"].as<bool>();
    if (o["intermediate_rrep"]) s.data.intermediate_rrep = o["intermediate_rrep"].as<bool>();
    if (o["inv_mode"]) {
      auto m = o["inv_mode"].as<std::string>();
      if (m == "paper") s.data.inv_mode = InvalidationMode::paper;
      else if (m == "rfc_literal") s.data.inv_mode = InvalidationMode::rfc_literal;
      else bad(o["inv_mode"], "inv_mode must be paper or rfc_literal");
    }
  }
  for (const auto& n : root["init"]) {
    check_keys(n, {"node", "leaf", "var", "value"});
    InitOverride io;
    io.node = sym(n, "node");
    io.var = sym(n, "var");
    if (!n["value"]) bad(n, "missing key 'value'");
    io.expr = n["value"].as<std::string>();
    if (n["leaf"]) {
      auto l = n["leaf"].as<std::string>();
      if (l == "protocol" || l == "0") io.leaf = 0;
      else if (l == "queue" || l == "1") io.leaf = 1;
      else bad(n["leaf"], "leaf must be protocol or queue");
    }
    s.init.push_back(std::move(io));
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto dir = std::filesystem::path(path).parent_path().string();
  Scenario s = parse_scenario(ss.str(), dir.empty() ? "." : dir);
  if (s.name.empty()) s.name = std::filesystem::path(path).stem().string();
  return s;
}

}  // namespace awn
