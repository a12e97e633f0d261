// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "awn/bisim.hpp"
#include "awn/checks.hpp"
#include "awn/systems.hpp"
#include "oracles.hpp"
#include "sos_fixtures.hpp"
#include "support.hpp"

using namespace awn;
using namespace awn::test;

namespace {

// Pinned limits.
constexpr double kToySeconds = 1.0;
constexpr double kAlgebraSeconds = 60.0;
constexpr std::size_t kMinFixtures = 20;
constexpr std::size_t kMinAlgebraSystems = 5;
constexpr std::size_t kMaxAlgebraStates = 10'000;
constexpr int kCtlInstances = 1000;
constexpr uint64_t kCtlSeed = 4242;
constexpr std::size_t kMinUpdCases = 4'000'000;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = true;
  std::ostringstream why;
  std::string failures;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures += " [failed: " + what + "]";
    }
  }
};

Exploration run(const std::string& name, bool record = true) {
  return explore(load_scenario(scenario_path(name)), workers(), record);
}

bool any_shown(const Exploration& e, const std::string& needle) {
  for (const auto& l : e.built.lts.shown_labels)
    if (l.str().find(needle) != std::string::npos) return true;
  return false;
}

std::set<std::vector<std::string>> maximal_paths(const Exploration& e, std::set<std::string>* finals) {
  const Lts& l = e.built.lts;
  std::set<std::vector<std::string>> paths;
  std::vector<std::pair<uint32_t, std::vector<std::string>>> stack{{l.initial, {}}};
  while (!stack.empty()) {
    auto [s, p] = stack.back();
    stack.pop_back();
    if (l.out_degree(s) == 0) {
      paths.insert(p);
      finals->insert(e.explorer->print(e.built.states[s]));
    }
    if (p.size() > 16) continue;
    for (std::size_t i = l.out_begin(s); i < l.out_end(s); ++i) {
      auto q = p;
      q.push_back(l.shown_labels[l.edges[i].shown].str());
      stack.push_back({l.edges[i].dst, q});
    }
  }
  return paths;
}

void criterion1(Outcome& o) {
  auto t = Clock::now();
  using Paths = std::set<std::vector<std::string>>;
  std::set<std::string> finals;

  auto in = run("toy_in_range");
  o.require(maximal_paths(in, &finals) == Paths{{"a:*cast(mg(d, b))", "tau", "b:deliver(d)"}}, "in_range trace");
  o.require(finals == std::set<std::string>{"[Y(a) || Y(b)]"}, "in_range final state");

  finals.clear();
  auto out = run("toy_out_of_range");
  o.require(maximal_paths(out, &finals) == Paths{{"a:*cast(mg(d, b))"}}, "out_of_range trace");
  o.require(!any_shown(out, "deliver"), "out_of_range delivers nothing");
  Program prog = toy();
  Semantics sem(prog);
  NetworkTerm open = *prog.network(Symbol::intern("out_of_range"));
  open.encapsulated = false;
  std::set<std::string> casts;
  for (const auto& st : sem.step_network(open, {}))
    if (st.label.kind == LabelKind::Cast) casts.insert(st.label.str());
  o.require(casts == std::set<std::string>{"{}:*cast(mg(d, b))"}, "out_of_range casts to {}");

  auto stuck = run("toy_both_sending");
  o.require(stuck.built.lts.edges.empty(), "both_sending has no transitions");

  finals.clear();
  auto aug = run("toy_both_sending_augmented");
  o.require(maximal_paths(aug, &finals) ==
                Paths{{"a:*cast(mg(d, b))", "b:*cast(mg(e, a))", "tau", "a:deliver(e)"},
                      {"b:*cast(mg(e, a))", "a:*cast(mg(d, b))", "tau", "b:deliver(d)"}},
            "augmented both_sending paths");
  o.require(finals == std::set<std::string>{"[Y(a) || Y(b)]"}, "augmented final state");

  double s = since(t);
  o.require(s < kToySeconds, "runtime");
  o.why << "toy traces match; both_sending stuck, augmented gives the two 4-label paths (" << s << " s)";
}

void criterion2(Outcome& o) {
  const std::string dir = AWN_SOURCE_DIR "/tests/fixtures/";
  auto fs = fixtures::load(dir + "sos.txt");
  Program prog = fixtures::program(dir + "sos.awn");
  std::size_t ok = 0, transitions = 0;
  for (const auto& f : fs) {
    auto out = fixtures::derive(prog, f);
    transitions += f.expected.size();
    if (out.ok(f))
      ++ok;
    else
      o.require(false, f.name);
  }
  o.require(fs.size() >= kMinFixtures, "at least 20 fixtures");
  o.why << ok << "/" << fs.size() << " rule fixtures match exactly (" << transitions << " transitions)";
}

// Program for the algebraic laws: the toy protocol plus two small processes.
Program algebra_program() {
  return parse_program(slurp(AWN_SOURCE_DIR "/models/toy.awn") +
                           "\nconst c : IP\n"
                           "def T(ip) = receive(m) . send(m) . T(ip)\n"
                           "def Z(ip) = send(mg(d, ip)) . Z(ip)\n",
                       aodv::standard_signature());
}

void criterion3(Outcome& o) {
  auto t = Clock::now();
  Program prog = algebra_program();
  std::vector<Value> universe{value_of(prog, "mg(d, b)"), value_of(prog, "mg(e, a)")};
  Semantics sem(prog);
  sem.set_ip_universe({value_of(prog, "a"), value_of(prog, "b"), value_of(prog, "c")});
  NetSystem nets(sem, universe);

  auto net_lts = [&](const std::string& text) { return build_lts(nets, parse_network(prog, text), {}).lts; };
  auto par_lts = [&](const std::string& term) {
    NodeState n = parse_network(prog, "a : " + term + " : {}").nodes.front();
    ParSystem sys(sem, n.shape, universe);
    return build_lts(sys, n.leaves, {}).lts;
  };

  const std::string xa = "a : {ip = a, data = d, dip = b} X(ip, data, dip) : {b}";
  const std::string xb = "b : {ip = b, data = e, dip = a} X(ip, data, dip) : {a, c}";
  const std::string yb = "b : {ip = b} Y(ip) : {a, c}";
  const std::string yc = "c : {ip = c} Y(ip) : {b}";
  const std::string y = "{ip = a} Y(ip)", tr = "{ip = a} T(ip)", z = "{ip = a} Z(ip)";

  struct Law {
    std::string name;
    std::function<Lts()> lhs, rhs;
  };
  std::vector<Law> laws{
      {"M||N = N||M (in range)", [&] { return net_lts(xa + " || " + yb); }, [&] { return net_lts(yb + " || " + xa); }},
      {"M||N = N||M (both sending)", [&] { return net_lts(xa + " || " + xb); },
       [&] { return net_lts(xb + " || " + xa); }},
      {"[M||N] = [N||M]", [&] { return net_lts("[ " + xa + " || " + yb + " ]"); },
       [&] { return net_lts("[ " + yb + " || " + xa + " ]"); }},
      {"(M||N)||O = M||(N||O) (relay)", [&] { return net_lts("(" + xa + " || " + yb + ") || " + yc); },
       [&] { return net_lts(xa + " || (" + yb + " || " + yc + ")"); }},
      {"(M||N)||O = M||(N||O) (both sending)", [&] { return net_lts("(" + xa + " || " + xb + ") || " + yc); },
       [&] { return net_lts(xa + " || (" + xb + " || " + yc + ")"); }},
      {"(P<<Q)<<R = P<<(Q<<R) (relays)", [&] { return par_lts("(" + tr + " <<| " + tr + ") <<| " + z); },
       [&] { return par_lts(tr + " <<| (" + tr + " <<| " + z + ")"); }},
      {"(P<<Q)<<R = P<<(Q<<R) (receiver)", [&] { return par_lts("(" + y + " <<| " + tr + ") <<| " + z); },
       [&] { return par_lts(y + " <<| (" + tr + " <<| " + z + ")"); }},
  };
  std::size_t held = 0, states = 0;
  for (const auto& law : laws) {
    Lts l = law.lhs(), r = law.rhs();
    states += l.num_states + r.num_states;
    bool ok = l.edges.size() > 0 && l.num_states <= kMaxAlgebraStates && r.num_states <= kMaxAlgebraStates &&
              bisimilar(l, r).equivalent;
    held += ok;
    o.require(ok, law.name);
  }
  o.require(laws.size() >= kMinAlgebraSystems, "at least 5 systems");

  // Mutated controls must be told apart.
  auto swapped = bisimilar(par_lts(y + " <<| " + z), par_lts(z + " <<| " + y));
  o.require(!swapped.equivalent, "P<<Q vs Q<<P distinguished");
  auto ranged = bisimilar(net_lts(xa + " || " + yb), net_lts("a : {ip = a, data = d, dip = b} X(ip, data, dip) : {} || " + yb));
  o.require(!ranged.equivalent, "changed range distinguished");

  double s = since(t);
  o.require(s < kAlgebraSeconds, "runtime");
  o.why << held << "/" << laws.size() << " laws bisimilar over " << states << " states; controls distinguished by "
        << swapped.formula << " and " << ranged.formula << " (" << s << " s)";
}

void criterion4(Outcome& o) {
  namespace A = awn::aodv;
  Symbol x = Symbol::intern("x"), y = Symbol::intern("y"), p = Symbol::intern("p");
  auto ex = oracle::entries(x, y, {{}, {p}});
  auto ey = oracle::entries(y, x, {{}, {p}});
  auto tables = oracle::tables(ex, ey);
  std::vector<A::Dests> dests{{}};
  for (A::Sqn a = 0; a <= 4; ++a) {
    dests.push_back({{x, a}});
    dests.push_back({{y, a}});
    for (A::Sqn b = 0; b <= 4; ++b) dests.push_back({{x, a}, {y, b}});
  }
  std::size_t upd_cases = 0, upd_bad = 0, inv_cases = 0, inv_bad = 0;
  for (const auto& rt : tables) {
    for (const auto* es : {&ex, &ey})
      for (const auto& r : *es) {
        ++upd_cases;
        if (A::upd(rt, r) != oracle::upd(rt, r)) ++upd_bad;
      }
    for (const auto& ds : dests) {
      ++inv_cases;
      if (A::inv(rt, ds, InvalidationMode::paper) != oracle::inv(rt, ds, false) ||
          A::inv(rt, ds, InvalidationMode::rfc_literal) != oracle::inv(rt, ds, true))
        ++inv_bad;
    }
  }
  o.require(upd_cases >= kMinUpdCases, "enumeration size");
  o.require(upd_bad == 0, "upd mismatches");
  o.require(inv_bad == 0, "inv mismatches");
  o.why << upd_cases << " upd cases, " << upd_bad << " mismatches; " << inv_cases << " inv cases in both modes, "
        << inv_bad << " mismatches";
}

void criterion5(Outcome& o) {
  // two_node only has replies from the destination itself, which the property
  // exempts; fig1 has intermediate and destination replies.
  std::size_t replies = 0;
  for (const char* name : {"two_node", "fig1"}) {
    auto e = run(name);
    auto r = check_prop1(e);
    o.require(!e.built.lts.truncated, std::string(name) + " complete");
    o.require(r.verdict == Verdict::pass, std::string(name) + " " + verdict_name(r.verdict) + ": " + r.detail);
    replies += r.checked;
    o.why << name << ": " << e.built.lts.num_states << " states, " << r.checked << " replies checked, "
          << verdict_name(r.verdict) << "; ";
  }
  o.require(replies > 0, "some reply was checked");
}

void criterion6(Outcome& o) {
  for (const char* name : {"two_node", "fig1", "fig1_disconnect"}) {
    auto e = run(name);
    auto r = check_loop_freedom(e);
    o.require(!e.built.lts.truncated, std::string(name) + " complete");
    o.require(r.verdict == Verdict::pass, std::string(name) + " " + verdict_name(r.verdict) + ": " + r.detail);
    if (std::string(name) == "fig1_disconnect")
      o.require(any_shown(e, ":*cast(rerr("), "route error sent after the link break");
    o.why << name << ": " << e.built.lts.num_states << " states " << verdict_name(r.verdict) << "; ";
  }
}

void criterion7(Outcome& o) {
  auto lit = run("rerr_rfc_literal");
  auto mono = check_monotonicity(lit);
  o.require(mono.verdict == Verdict::violation, "monotonicity fires in rfc_literal mode");
  o.require(!mono.trace.empty(), "witness trace");
  auto loop = check_loop_freedom(lit);
  auto paper = run("rerr_paper");
  auto paper_mono = check_monotonicity(paper);
  o.require(paper_mono.verdict == Verdict::pass, "paper-mode invalidation keeps numbers monotone");
  o.why << "rfc_literal: " << mono.detail << " after " << mono.trace.size() << " steps; loop freedom "
        << verdict_name(loop.verdict)
        << (loop.verdict == Verdict::pass ? " (routing loop not reproduced: inconclusive)" : " (routing loop found)")
        << "; paper mode monotone";
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(kCtlSeed);
  std::vector<std::string> atoms{"p", "q", "r"};
  int bad = 0;
  for (int i = 0; i < kCtlInstances; ++i) {
    auto k = oracle::random_kripke(rng, 1 + rng() % 100, atoms);
    auto f = oracle::random_formula(rng, 1 + rng() % 4, atoms);
    if (ctl::sat(k, *f) != oracle::ctl_sat(k, *f)) ++bad;
  }
  o.require(bad == 0, "disagreements");
  o.why << kCtlInstances << " random instances (seed " << kCtlSeed << "), " << bad << " disagreements";
}

void criterion9(Outcome& o) {
  auto two = run("two_node");
  auto ok = check_packet_delivery(two);
  o.require(ok.verdict == Verdict::pass, std::string("two_node ") + verdict_name(ok.verdict));
  auto ce = run("delivery_counterexample");
  auto bad = check_packet_delivery(ce);
  o.require(!ce.built.lts.truncated, "counterexample exploration complete");
  o.require(bad.verdict == Verdict::violation, std::string("counterexample ") + verdict_name(bad.verdict));
  o.why << "two_node " << verdict_name(ok.verdict) << "; delivery_counterexample " << verdict_name(bad.verdict)
        << " over " << ce.built.lts.num_states << " states (" << ce.seconds << " s): " << bad.detail;
}

void criterion10(Outcome& o) {
  for (const char* name : {"two_node", "fig1"}) {
    Scenario scn = load_scenario(scenario_path(name));
    scn.non_blocking = false;
    auto off = explore(scn, workers());
    scn.non_blocking = true;
    auto on = explore(scn, workers());
    bool counts = off.built.lts.num_states == on.built.lts.num_states &&
                  off.built.lts.edges.size() == on.built.lts.edges.size();
    bool bis = !off.built.lts.truncated && !on.built.lts.truncated && bisimilar(off.built.lts, on.built.lts).equivalent;
    o.require(counts, std::string(name) + " counts");
    o.require(bis, std::string(name) + " bisimilar");
    o.why << name << ": " << off.built.lts.num_states << "/" << off.built.lts.edges.size() << " vs "
          << on.built.lts.num_states << "/" << on.built.lts.edges.size() << (bis ? " bisimilar" : " differ") << "; ";
  }
}

}  // namespace

int main() {
  std::vector<std::function<void(Outcome&)>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i](o);
    } catch (const std::exception& ex) {
      o.pass = false;
      o.failures += std::string(" [exception: ") + ex.what() + "]";
    }
    failed += !o.pass;
    std::printf("criterion %zu %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", (o.why.str() + o.failures).c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
