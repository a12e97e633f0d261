#include <gtest/gtest.h>

#include "sos_fixtures.hpp"

using namespace awn;

namespace {

const std::string kDir = AWN_SOURCE_DIR "/tests/fixtures/";

std::vector<fixtures::Fixture> all() { return fixtures::load(kDir + "sos.txt"); }

const Program& prog() {
  static Program p = fixtures::program(kDir + "sos.awn");
  return p;
}

class Sos : public ::testing::TestWithParam<fixtures::Fixture> {};

}  // namespace

TEST_P(Sos, DerivesExactly) {
  const auto& f = GetParam();
  auto out = fixtures::derive(prog(), f);
  EXPECT_EQ(out.derived, f.expected) << "line " << f.line;
  EXPECT_TRUE(out.replay_failures.empty()) << out.replay_failures.front();
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Sos, ::testing::ValuesIn(all()), [](const auto& info) {
  std::string n;
  for (char c : info.param.name) n += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return n;
});

TEST(SosFixtures, EnoughAndDistinct) {
  auto fs = all();
  EXPECT_GE(fs.size(), 30u);
  std::set<std::string> names;
  for (const auto& f : fs) EXPECT_TRUE(names.insert(f.name).second) << f.name;
}
