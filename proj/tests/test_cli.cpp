#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>
#include <json.hpp>

#include "awn/explore.hpp"
#include "support.hpp"

using namespace awn;
using namespace awn::test;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("awn_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args) {
  std::string cmd = std::string(AWN_CLI) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string write_scenario(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / ("awn_cli_" + name + ".yaml");
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Cli, TraceIsReproducible) {
  auto a = scratch("trace_a"), b = scratch("trace_b");
  ASSERT_EQ(run("trace --scenario " + scenario_path("fig1") + " --seed 5 --out " + a.string()), 0);
  ASSERT_EQ(run("trace --scenario " + scenario_path("fig1") + " --seed 5 --out " + b.string()), 0);
  EXPECT_EQ(slurp((a / "trace.txt").string()), slurp((b / "trace.txt").string()));
  EXPECT_FALSE(slurp((a / "trace.txt").string()).empty());
}

TEST(Cli, ToyTraces) {
  auto out = scratch("toy");
  ASSERT_EQ(run("trace --scenario " + scenario_path("toy_in_range") + " --out " + out.string()), 0);
  std::string t = slurp((out / "trace.txt").string());
  auto cast = t.find("a:*cast(mg(d, b))"), tau = t.find(": tau"), del = t.find("b:deliver(d)");
  ASSERT_NE(cast, std::string::npos);
  EXPECT_LT(cast, tau);
  EXPECT_LT(tau, del);
  EXPECT_NE(t.find("final: [Y(a) || Y(b)]"), std::string::npos);
  ASSERT_EQ(run("trace --scenario " + scenario_path("toy_both_sending") + " --out " + out.string()), 0);
  EXPECT_NE(slurp((out / "trace.txt").string()).find("deadlock after 0 steps"), std::string::npos);
}

TEST(Cli, CheckPassesOnFig1) {
  auto out = scratch("fig1");
  EXPECT_EQ(run("check --scenario " + scenario_path("fig1") + " --checks prop1,loopfree --out " + out.string()), 0);
  auto report = nlohmann::json::parse(slurp((out / "report.json").string()));
  ASSERT_EQ(report["checks"].size(), 2u);
  for (const auto& c : report["checks"]) EXPECT_EQ(c["verdict"], "pass");
  std::set<std::string> files;
  for (const auto& f : fs::directory_iterator(out)) files.insert(f.path().filename().string());
  EXPECT_EQ(files, (std::set<std::string>{"report.json", "report.txt"}));
}

TEST(Cli, MonotonicityViolationExitsOne) {
  auto out = scratch("rfc");
  EXPECT_EQ(run("check --scenario " + scenario_path("rerr_rfc_literal") + " --checks monotonic --out " + out.string()), 1);
  auto report = nlohmann::json::parse(slurp((out / "report.json").string()));
  EXPECT_EQ(report["checks"][0]["verdict"], "violation");
  EXPECT_FALSE(report["checks"][0]["trace"].empty());
  EXPECT_TRUE(fs::exists(out / "monotonic.trace.txt"));
}

TEST(Cli, BoundHitExitsTwo) {
  std::string path = write_scenario("tiny", "name: tiny\nnodes:\n  - {ip: s, range: [d]}\n  - {ip: d, range: [s]}\n"
                                            "inject:\n  - {node: s, data: d0, dip: d}\nbounds: {max_states: 1}\n");
  EXPECT_EQ(run("check --scenario " + path + " --checks prop1"), 2);
  EXPECT_EQ(run("explore --scenario " + path), 2);
}

TEST(Cli, UsageAndParseErrorsExitThree) {
  EXPECT_EQ(run(""), 3);
  EXPECT_EQ(run("explore"), 3);
  EXPECT_EQ(run("check --scenario " + scenario_path("fig1") + " --checks nonsense"), 3);
  EXPECT_EQ(run("explore --scenario " + write_scenario("bad", "name: x\nnodez: []\n")), 3);
  EXPECT_EQ(run("explore --scenario " + write_scenario("bad_lib", "library: /nonexistent.awn\nnetwork: n\n")), 3);
  EXPECT_EQ(run("trace --scenario /nonexistent.yaml"), 3);
}

TEST(Cli, BisimOfAugmentedToys) {
  EXPECT_EQ(run("bisim " + scenario_path("toy_in_range") + " " + scenario_path("toy_in_range")), 0);
  EXPECT_EQ(run("bisim " + scenario_path("toy_both_sending") + " " + scenario_path("toy_both_sending_augmented")), 1);
}

TEST(Scenario, RejectsMalformedInput) {
  EXPECT_THROW(parse_scenario("- a\n- b\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("name: x\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: []\nnetwork: n\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\nmodel: dsdv\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\ntopology: {policy: random}\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\ntopology: {budget: -1}\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\nscript: [{event: teleport}]\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\noptions: {inv_mode: lax}\n"), std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\ninject: [{node: a, data: d0, dip: a, when: later}]\n"),
               std::runtime_error);
  EXPECT_THROW(parse_scenario("nodes: [{ip: a, range: []}]\nbounds: {max_nodes: 3}\n"), std::runtime_error);
}

TEST(Scenario, ReadsEverySection) {
  Scenario s = parse_scenario(R"(
name: full
nodes:
  - {ip: a, range: [b]}
  - {ip: b, range: [a]}
inject:
  - {node: a, data: d0, dip: b, when: quiescent}
script:
  - {event: disconnect, from: a, to: b}
  - {event: inject, node: b, data: d1, dip: a}
topology: {policy: free, budget: 2, symmetric: true}
bounds: {max_states: 10, max_depth: 4, max_sn: 3, max_queue: 2}
options: {non_blocking: true, inv_mode: rfc_literal, intermediate_rrep: false}
init:
  - {node: a, leaf: queue, var: msgs, value: "[]"}
)");
  EXPECT_EQ(s.name, "full");
  EXPECT_EQ(s.nodes.size(), 2u);
  EXPECT_EQ(s.inject[0].when, When::quiescent);
  EXPECT_EQ(s.script[1].kind, ScriptEvent::Kind::inject);
  EXPECT_EQ(s.policy, ConnectPolicy::free);
  EXPECT_EQ(s.budget, 2u);
  EXPECT_TRUE(s.symmetric);
  EXPECT_EQ(s.bounds.max_depth, 4u);
  EXPECT_TRUE(s.non_blocking);
  EXPECT_EQ(s.data.inv_mode, InvalidationMode::rfc_literal);
  EXPECT_FALSE(s.data.intermediate_rrep);
  EXPECT_EQ(s.init[0].leaf, 1);
}
