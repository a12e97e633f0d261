#include <gtest/gtest.h>

#include "support.hpp"

using namespace awn;
using namespace awn::test;

namespace {

Program with(const std::string& extra) {
  return parse_program(slurp(AWN_SOURCE_DIR "/models/toy.awn") + extra, aodv::standard_signature());
}

}  // namespace

TEST(Parser, ToyRoundTrips) {
  Program prog = toy();
  std::string printed = print_program(prog);
  EXPECT_EQ(print_program(parse_program(printed, aodv::standard_signature())), printed);
  EXPECT_EQ(prog.network_order().size(), 3u);
  EXPECT_EQ(print_network(*prog.network(Symbol::intern("in_range"))),
            print_network(parse_network(prog, print_network(*prog.network(Symbol::intern("in_range"))))));
}

TEST(Parser, ReportsPositions) {
  try {
    with("\ndef W(ip) = broadcast(mg(d, ip) . Y(ip)\n");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 20);
    EXPECT_GT(e.col(), 0);
  }
}

TEST(Parser, RejectsIllFormedPrograms) {
  EXPECT_THROW(with("\ndef W(ip) = deliver(ip) . Y(ip)\n"), ParseError);          // sort mismatch
  EXPECT_THROW(with("\ndef W(ip) = broadcast(mg(d, ip)) . V(ip)\n"), ParseError);  // undefined process
  EXPECT_THROW(with("\ndef X(ip) = Y(ip)\n"), ParseError);                         // defined twice
  EXPECT_THROW(with("\ndef W(ip) = Y(ip, ip)\n"), ParseError);                     // arity
  EXPECT_THROW(with("\nnetwork n = [ q : Y(a) : {} ]\n"), ParseError);             // unknown address
  EXPECT_THROW(with("\nnetwork n = [ a : {ip = a} Y(ip) : {} || a : {ip = a} Y(ip) : {} ]\n"), ParseError);
}

TEST(Parser, CallsNormaliseToDefinitionParameters) {
  Program prog = toy();
  Semantics sem(prog);
  SeqState s = sem.normalise({}, parse_process(prog, "X(a, d, b)"));
  EXPECT_EQ(print_seq_state(prog, s), "X(a;d,b)");
  EXPECT_EQ(s.proc, prog.canonical_call(Symbol::intern("X")));
}

TEST(Semantics, UnguardedRecursionIsAnError) {
  Program prog = with("\ndef W(ip) = W(ip)\n");
  Semantics sem(prog);
  EXPECT_THROW(sem.seq_steps(sem.normalise({}, parse_process(prog, "W(a)"))), SemanticsError);
}

TEST(Semantics, UndefinedGuardValueBlocks) {
  Program prog = parse_program("var rt : RT\nconst x : IP\ndef W(rt) = [nhop(rt, x) = x] W(rt)\n",
                               aodv::standard_signature());
  Semantics sem(prog);
  EXPECT_TRUE(sem.seq_steps(sem.normalise({}, parse_process(prog, "W({|->})"))).empty());
}
