#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace awn;
using namespace awn::test;
namespace A = awn::aodv;

namespace {

struct Domain {
  Symbol x = Symbol::intern("x"), y = Symbol::intern("y"), p = Symbol::intern("p");
  std::vector<A::RouteEntry> ex = oracle::entries(x, y, {{}, {p}});
  std::vector<A::RouteEntry> ey = oracle::entries(y, x, {{}, {p}});
  std::vector<A::RoutingTable> tables = oracle::tables(ex, ey);
};

const Domain& domain() {
  static Domain d;
  return d;
}

std::vector<A::Dests> all_dests() {
  std::vector<A::Dests> out{{}};
  const auto& d = domain();
  for (A::Sqn a = 0; a <= 4; ++a) {
    out.push_back({{d.x, a}});
    out.push_back({{d.y, a}});
    for (A::Sqn b = 0; b <= 4; ++b) out.push_back({{d.x, a}, {d.y, b}});
  }
  return out;
}

}  // namespace

TEST(Upd, MatchesDecisionTableExhaustively) {
  const auto& d = domain();
  std::size_t cases = 0, mismatches = 0;
  for (const auto& rt : d.tables)
    for (const auto* es : {&d.ex, &d.ey})
      for (const auto& r : *es) {
        ++cases;
        if (A::upd(rt, r) != oracle::upd(rt, r)) ++mismatches;
      }
  EXPECT_GT(cases, 4'000'000u);
  EXPECT_EQ(mismatches, 0u);
}

TEST(Upd, NeverLowersSequenceNumbersAndKeepsOtherEntries) {
  const auto& d = domain();
  for (std::size_t i = 0; i < d.tables.size(); i += 7)
    for (const auto& r : d.ex) {
      const auto& rt = d.tables[i];
      auto out = A::upd(rt, r);
      EXPECT_TRUE(out.count(r.dip));
      for (const auto& [dip, e] : rt) {
        EXPECT_GE(out.at(dip).dsn, e.dsn);
        if (dip != r.dip) EXPECT_EQ(out.at(dip), e);
      }
    }
}

TEST(Inv, MatchesOracleInBothModes) {
  const auto& d = domain();
  auto dests = all_dests();
  std::size_t mismatches = 0, lowered = 0;
  for (const auto& rt : d.tables)
    for (const auto& ds : dests) {
      auto paper = A::inv(rt, ds, InvalidationMode::paper);
      auto rfc = A::inv(rt, ds, InvalidationMode::rfc_literal);
      if (paper != oracle::inv(rt, ds, false) || rfc != oracle::inv(rt, ds, true)) ++mismatches;
      for (const auto& [dip, e] : rt) {
        EXPECT_GE(paper.at(dip).dsn, e.dsn);
        if (rfc.at(dip).dsn < e.dsn) ++lowered;
      }
    }
  EXPECT_EQ(mismatches, 0u);
  EXPECT_GT(lowered, 0u);  // copying the incoming number can go backwards
}

TEST(Inv, PaperModeRaisesEveryInvalidatedNumber) {
  const auto& d = domain();
  for (const auto& rt : d.tables)
    for (const auto& [dip, e] : rt) {
      if (!e.valid) continue;
      auto out = A::inv(rt, {{dip, 0}}, InvalidationMode::paper);
      EXPECT_EQ(out.at(dip).dsn, e.dsn + 1);
      EXPECT_FALSE(out.at(dip).valid);
    }
}

// The data language evaluates upd and inv through the same functions.
TEST(DataLanguage, UpdAndInvAgreeWithTables) {
  Program prog = parse_program("var rt : RT\nvar r : ROUTE\nvar ds : DESTS\nconst x, y, p : IP\n", A::standard_signature());
  const auto& d = domain();
  Symbol rt_v = Symbol::intern("rt"), r_v = Symbol::intern("r"), ds_v = Symbol::intern("ds");
  ExprPtr upd_e = parse_expression(prog, "upd(rt, r)");
  ExprPtr inv_e = parse_expression(prog, "inv(rt, ds)");
  auto dests = all_dests();
  for (auto mode : {InvalidationMode::paper, InvalidationMode::rfc_literal}) {
    DataOptions o;
    o.inv_mode = mode;
    Evaluator ev(prog.signature(), o);
    for (std::size_t i = 0; i < d.tables.size(); i += 37) {
      const auto& rt = d.tables[i];
      for (std::size_t j = 0; j < d.ex.size(); j += 5) {
        Valuation xi({{rt_v, A::to_value(rt)}, {r_v, A::to_value(d.ex[j])}});
        EXPECT_EQ(ev.eval(xi, upd_e), A::to_value(A::upd(rt, d.ex[j])));
      }
      for (std::size_t j = 0; j < dests.size(); j += 3) {
        Valuation xi({{rt_v, A::to_value(rt)}, {ds_v, A::dests_value(dests[j])}});
        EXPECT_EQ(ev.eval(xi, inv_e), A::to_value(A::inv(rt, dests[j], mode)));
      }
    }
  }
}

TEST(RoutingTable, Projections) {
  const auto& d = domain();
  A::RoutingTable rt{{d.x, {d.x, 2, true, true, 1, d.y, {d.p}}}, {d.y, {d.y, 0, false, false, 3, d.x, {}}}};
  EXPECT_EQ(A::sqn(rt, d.x), 2u);
  EXPECT_EQ(A::sqn(rt, d.p), 0u);
  EXPECT_TRUE(A::sqn_known(rt, d.x));
  EXPECT_FALSE(A::sqn_known(rt, d.y));
  EXPECT_EQ(A::status(rt, d.y), std::optional<bool>(false));
  EXPECT_EQ(A::dhops(rt, d.y), std::optional<uint64_t>(3));
  EXPECT_EQ(A::nhop(rt, d.x), std::optional<Symbol>(d.y));
  EXPECT_EQ(A::akD(rt), std::vector<Symbol>{d.x});
  EXPECT_EQ(A::kD(rt).size(), 2u);
  EXPECT_FALSE(A::addprecrt(rt, d.p, {d.y}).has_value());
  EXPECT_EQ(A::addprecrt(rt, d.y, {d.p})->at(d.y).pre, std::vector<Symbol>{d.p});
}

TEST(RoutingTable, BrokenAffectedAndPrecursors) {
  const auto& d = domain();
  A::RoutingTable rt{{d.x, {d.x, 2, true, true, 1, d.y, {d.p}}}, {d.y, {d.y, 5, true, true, 1, d.y, {}}}};
  EXPECT_EQ(A::broken(rt, d.y), (A::Dests{{d.x, 3}, {d.y, 6}}));
  EXPECT_EQ(A::affected(rt, {{d.x, 7}, {d.p, 1}}, d.y), (A::Dests{{d.x, 7}}));
  EXPECT_EQ(A::precsof(rt, {{d.x, 3}, {d.y, 6}}), std::vector<Symbol>{d.p});
  EXPECT_EQ(A::withprecs(rt, {{d.x, 3}, {d.y, 6}}), (A::Dests{{d.x, 3}}));
}

TEST(DataLanguage, QueueAndRequestOperators) {
  Program prog = parse_program("var store : QUEUES\nvar rreqs : RREQS\nconst x, y : IP\nconst d0, d1 : DATA\n",
                               A::standard_signature());
  Evaluator ev(prog.signature());
  auto eval = [&](const std::string& s) { return ev.eval({}, parse_expression(prog, s)).str(); };
  EXPECT_EQ(eval("qD(qadd(qadd({|->}, d0, x), d1, x))"), "{x}");
  EXPECT_EQ(eval("qhead(qadd(qadd({|->}, d0, x), d1, x), x)"), "d0");
  EXPECT_EQ(eval("qD(qdrop(qadd({|->}, d0, x), x))"), "{}");
  EXPECT_EQ(eval("pflag(setP(qadd({|->}, d0, x), x, pen), x)"), "pen");
  EXPECT_EQ(eval("nextid({rid(x, 1), rid(x, 3), rid(y, 7)}, x)"), "4");
  EXPECT_EQ(eval("nextid({}, x)"), "1");
  EXPECT_EQ(eval("inc(4)"), "5");
  EXPECT_EQ(eval("max(2, 5)"), "5");
  EXPECT_EQ(eval("qhead(qdrop(qadd(qadd({|->}, d0, y), d1, y), y), y)"), "d1");
}
