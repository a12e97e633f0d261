#include <gtest/gtest.h>

#include "awn/aodv/model.hpp"
#include "awn/bisim.hpp"
#include "awn/explore.hpp"
#include "awn/systems.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace awn;
using namespace awn::test;

namespace {

Label act(uint64_t a) { return Label::deliver(Value::nat(sorts::Nat(), a)); }

Lts make(uint32_t n, std::vector<std::tuple<uint32_t, uint64_t, uint32_t>> edges) {
  Lts l;
  l.num_states = n;
  for (auto [s, a, t] : edges) l.add_edge(s, act(a), t);
  l.finalise();
  return l;
}

// Disjoint union with b's states shifted by a.num_states.
Lts sum(const Lts& a, const Lts& b) {
  Lts l;
  l.num_states = a.num_states + b.num_states;
  for (const auto& e : a.edges) l.add_edge(e.src, a.labels[e.label], e.dst);
  for (const auto& e : b.edges) l.add_edge(e.src + a.num_states, b.labels[e.label], e.dst + a.num_states);
  l.finalise();
  return l;
}

}  // namespace

TEST(Bisim, ClassesMatchNaiveRelation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    uint32_t n = 1 + rng() % 12;
    Lts l = oracle::random_lts(rng, n, 2, 0.12);
    auto cls = bisim_classes(l);
    auto rel = oracle::bisim_relation(l);
    for (uint32_t p = 0; p < n; ++p)
      for (uint32_t q = 0; q < n; ++q) ASSERT_EQ(cls[p] == cls[q], rel[p][q] != 0) << "instance " << i;
  }
}

TEST(Bisim, InitialStatesMatchNaiveRelation) {
  std::mt19937_64 rng(11);
  int distinguished = 0;
  for (int i = 0; i < 300; ++i) {
    Lts a = oracle::random_lts(rng, 1 + rng() % 6, 2, 0.2);
    Lts b = oracle::random_lts(rng, 1 + rng() % 6, 2, 0.2);
    auto rel = oracle::bisim_relation(sum(a, b));
    auto r = bisimilar(a, b);
    ASSERT_EQ(r.equivalent, rel[0][a.num_states] != 0) << "instance " << i;
    if (!r.equivalent) {
      ++distinguished;
      EXPECT_FALSE(r.formula.empty());
    }
  }
  EXPECT_GT(distinguished, 0);
}

TEST(Bisim, DistinguishingFormula) {
  // a.(b + c) against a.b + a.c
  Lts l = make(4, {{0, 0, 1}, {1, 1, 2}, {1, 2, 3}});
  Lts r = make(5, {{0, 0, 1}, {0, 0, 2}, {1, 1, 3}, {2, 2, 4}});
  auto res = bisimilar(l, r);
  ASSERT_FALSE(res.equivalent);
  EXPECT_EQ(res.formula, "<deliver(0)>(<deliver(2)>tt & <deliver(1)>tt)");
  EXPECT_EQ(res.trace.front(), "deliver(0)");
  EXPECT_EQ(bisimilar(make(1, {}), make(2, {{0, 0, 1}})).formula, "!<deliver(0)>tt");
}

TEST(Bisim, RefusesTruncatedLts) {
  Lts l = make(1, {});
  l.truncated = true;
  EXPECT_THROW(bisimilar(l, l), std::invalid_argument);
}

TEST(Ctl, AgreesWithNaiveFixpoints) {
  std::mt19937_64 rng(2024);
  std::vector<std::string> atoms{"p", "q", "r"};
  for (int i = 0; i < 1000; ++i) {
    auto k = oracle::random_kripke(rng, 1 + rng() % 100, atoms);
    auto f = oracle::random_formula(rng, 1 + rng() % 4, atoms);
    ASSERT_EQ(ctl::sat(k, *f), oracle::ctl_sat(k, *f)) << "instance " << i << ": " << f->str();
  }
}

TEST(Ctl, MaximalPathConventions) {
  ctl::Kripke k;
  k.num_states = 2;
  k.succ = {{1}, {}};
  k.initial = {0};
  k.props["p"] = {1, 0};
  EXPECT_EQ(ctl::sat(k, *ctl::AX(ctl::ff())), (std::vector<char>{0, 1}));
  EXPECT_EQ(ctl::sat(k, *ctl::EG(ctl::atom("p"))), (std::vector<char>{0, 0}));
  EXPECT_EQ(ctl::sat(k, *ctl::EG(ctl::tt())), (std::vector<char>{1, 1}));
  EXPECT_EQ(ctl::sat(k, *ctl::AF(ctl::atom("p"))), (std::vector<char>{1, 0}));
  EXPECT_TRUE(ctl::holds(k, *ctl::AG(ctl::tt())));
}

TEST(Ctl, TagSplitSeparatesIncomingLabels) {
  // 0 -a-> 2, 1 -b-> 2, 0 -c-> 1
  Lts l = make(3, {{0, 0, 2}, {1, 1, 2}, {0, 2, 1}});
  auto k = ctl::tag_split(l, {{"a", [](const Label& x) { return x == act(0); }}},
                          {{"two", [](uint32_t s) { return s == 2; }}});
  EXPECT_EQ(k.num_states, 6u);  // an untagged copy of each state plus one per edge
  int tagged_two = 0;
  for (uint32_t s = 0; s < k.num_states; ++s)
    if (k.props["two"][s] && k.via[s] >= 0) {
      ++tagged_two;
      EXPECT_EQ(k.props["a"][s] != 0, l.edges[k.via[s]].label == l.label_id(act(0)));
    }
  EXPECT_EQ(tagged_two, 2);
  EXPECT_TRUE(ctl::holds(k, *ctl::EX(ctl::atom("a"))));
  EXPECT_FALSE(ctl::holds(k, *ctl::AX(ctl::atom("a"))));
}

TEST(Ctl, LassoWitness) {
  ctl::Kripke k;
  k.num_states = 3;
  k.succ = {{1}, {2}, {1}};
  k.initial = {0};
  auto eg = ctl::sat(k, *ctl::EG(ctl::tt()));
  auto w = ctl::eg_witness(k, eg, 0);
  ASSERT_GE(w.loop_start, 0);
  EXPECT_EQ(w.states.front(), 0u);
  EXPECT_EQ(k.succ[w.states.back()].front(), w.states[w.loop_start]);
}

TEST(Lts, ParallelBuildMatchesSerial) {
  Scenario scn = load_scenario(scenario_path("fig1"));
  auto serial = explore(scn, 1);
  auto parallel = explore(scn, 4);
  EXPECT_FALSE(serial.built.lts.truncated);
  EXPECT_EQ(serial.built.lts.dump(), parallel.built.lts.dump());
  ASSERT_EQ(serial.built.states.size(), parallel.built.states.size());
  for (std::size_t i = 0; i < serial.built.states.size(); i += 97)
    EXPECT_EQ(serial.explorer->compare(serial.built.states[i], parallel.built.states[i]), std::strong_ordering::equal);
}

TEST(Lts, BoundsTruncate) {
  Scenario scn = load_scenario(scenario_path("fig1"));
  scn.bounds.max_states = 10;
  auto e = explore(scn);
  EXPECT_TRUE(e.built.lts.truncated);
  EXPECT_EQ(e.built.lts.num_states, 10u);
  scn.bounds.max_states = 1'000'000;
  scn.bounds.max_depth = 3;
  auto d = explore(scn);
  EXPECT_TRUE(d.built.lts.truncated);
  for (auto depth : d.built.depth) EXPECT_LE(depth, 3u);
}

// The generic derivation and the interned one agree on AODV.
TEST(Lts, GenericAndFlatNetworksAgree) {
  Scenario scn;
  scn.name = "queued";
  Symbol s = Symbol::intern("s"), a = Symbol::intern("a"), d = Symbol::intern("d");
  scn.nodes = {{s, {a}}, {a, {s, d}}, {d, {a}}};
  scn.init = {{s, 0, Symbol::intern("store"), "qadd({|->}, d0, d)"}};
  Explorer ex(scn, scenario_program(scn));
  auto flat = build_lts(ex, ex.initial(), {});

  NetworkTerm term;
  for (std::size_t i = 0; i < scn.nodes.size(); ++i) {
    auto leaf = NetShape::make_leaf(static_cast<int>(i));
    term.shape = term.shape ? NetShape::make_par(term.shape, leaf) : leaf;
    term.nodes.push_back(aodv::initial_node(ex.program(), scn.nodes[i].ip, scn.nodes[i].range));
  }
  term.encapsulated = true;
  Evaluator ev(ex.program().signature());
  term.nodes[0].leaves[0].xi.assign(Symbol::intern("store"),
                                    ev.eval({}, parse_expression(ex.program(), "qadd({|->}, d0, d)")));
  term.nodes[0].rehash();
  NetSystem sys(ex.semantics(), {});
  auto generic = build_lts(sys, term, {});

  EXPECT_GT(flat.lts.num_states, 20u);
  EXPECT_EQ(flat.lts.num_states, generic.lts.num_states);
  EXPECT_EQ(flat.lts.edges.size(), generic.lts.edges.size());
  EXPECT_TRUE(bisimilar(flat.lts, generic.lts).equivalent);
}
