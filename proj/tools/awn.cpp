#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "awn/bisim.hpp"
#include "awn/checks.hpp"

using namespace awn;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kViolation = 1, kInconclusive = 2, kUsage = 3 };

struct Common {
  std::string scenario;
  std::string library;
  std::string out;
  std::string format = "text";
  int workers = 1;
};

Scenario load(const Common& c) {
  Scenario scn = load_scenario(c.scenario);
  if (!c.library.empty()) scn.library = c.library;
  return scn;
}

void write_file(const Common& c, const std::string& name, const std::string& text) {
  if (c.out.empty()) return;
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + (fs::path(c.out) / name).string());
}

void emit(const Common& c, const std::string& text, const json& machine) {
  if (c.format == "machine")
    std::cout << machine.dump(2) << "\n";
  else
    std::cout << text;
}

int run_trace(const Common& c, uint64_t seed, std::size_t max_steps) {
  Scenario scn = load(c);
  Explorer ex(scn, scenario_program(scn), true);
  std::mt19937_64 rng(seed);
  ExploreState s = ex.initial();
  std::ostringstream os;
  json steps = json::array();
  std::size_t n = 0;
  bool deadlock = false;
  for (; n < max_steps; ++n) {
    if (ex.stop(s)) break;
    auto succ = ex.successors(s);
    std::stable_sort(succ.begin(), succ.end(), [&](const auto& a, const auto& b) {
      if (auto r = a.label <=> b.label; r != 0) return r < 0;
      if (auto r = ex.compare(a.target, b.target); r != 0) return r < 0;
      return a.shown < b.shown;
    });
    if (succ.empty()) {
      deadlock = true;
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
    auto& st = succ[pick(rng)];
    os << n + 1 << ": " << st.shown.str() << " :: " << st.rule << "\n";
    steps.push_back({{"label", st.shown.str()}, {"formal", st.label.str()}, {"rule", st.rule}});
    s = std::move(st.target);
  }
  if (deadlock) os << "deadlock after " << n << " steps\n";
  else os << "stopped after " << n << " steps\n";
  os << "final: " << ex.print(s) << "\n";
  write_file(c, "trace.txt", os.str());
  emit(c, os.str(),
       {{"scenario", scn.name}, {"seed", seed}, {"steps", steps}, {"deadlock", deadlock}, {"final", ex.print(s)}});
  return kPass;
}

json lts_summary(const Exploration& e) {
  const Lts& l = e.built.lts;
  return {{"states", l.num_states},
          {"transitions", l.edges.size()},
          {"truncated", l.truncated},
          {"frontier", l.frontier},
          {"seconds", e.seconds}};
}

std::string summary_text(const Scenario& scn, const Exploration& e) {
  const Lts& l = e.built.lts;
  std::ostringstream os;
  os << "scenario " << scn.name << ": " << l.num_states << " states, " << l.edges.size() << " transitions";
  if (l.truncated) os << ", truncated (" << l.frontier << " frontier states)";
  os << ", " << e.seconds << " s\n";
  return os.str();
}

json bounds_json(const Scenario& scn) {
  const auto& b = scn.bounds;
  json j{{"max_states", b.max_states}, {"max_sn", b.max_sn}, {"max_queue", b.max_queue}};
  if (b.max_depth != std::numeric_limits<std::size_t>::max()) j["max_depth"] = b.max_depth;
  return j;
}

int run_explore(const Common& c) {
  Scenario scn = load(c);
  Exploration e = explore(scn, c.workers, false);
  write_file(c, "lts.txt", e.built.lts.dump());
  json j = lts_summary(e);
  j["scenario"] = scn.name;
  j["bounds"] = bounds_json(scn);
  emit(c, summary_text(scn, e), j);
  return e.built.lts.truncated ? kInconclusive : kPass;
}

int run_check(const Common& c, const std::vector<std::string>& checks) {
  Scenario scn = load(c);
  Exploration e = explore(scn, c.workers, true);
  std::ostringstream text;
  text << summary_text(scn, e);
  json report{{"scenario", scn.name}, {"lts", lts_summary(e)}, {"bounds", bounds_json(scn)}, {"checks", json::array()}};
  bool violation = false, inconclusive = false;
  for (const auto& name : checks) {
    CheckResult r;
    if (name == "prop1") r = check_prop1(e);
    else if (name == "loopfree") r = check_loop_freedom(e);
    else if (name == "monotonic") r = check_monotonicity(e);
    else if (name == "ctl") r = check_packet_delivery(e);
    else throw CLI::ValidationError("--checks", "unknown check " + name);
    violation |= r.verdict == Verdict::violation;
    inconclusive |= r.verdict == Verdict::inconclusive;
    std::string trace = r.trace.empty() && !r.deadlock_end ? "" : format_trace(e, r);
    text << r.name << ": " << verdict_name(r.verdict) << " (" << r.checked << " checked) " << r.detail << "\n";
    if (!trace.empty()) {
      text << trace;
      write_file(c, name + ".trace.txt", trace);
    }
    json jt = json::array();
    const Lts& l = e.built.lts;
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const LtsEdge& ed = l.edges[r.trace[i]];
      jt.push_back({{"label", l.shown_labels[ed.shown].str()}, {"rule", e.built.rules[r.trace[i]]}, {"target", ed.dst}});
    }
    json jr{{"name", r.name},         {"verdict", verdict_name(r.verdict)}, {"checked", r.checked},
            {"detail", r.detail},     {"trace", jt},                        {"loop_start", r.loop_start},
            {"deadlock_end", r.deadlock_end}, {"truncated", l.truncated}};
    if (!r.cycle.empty()) jr["cycle"] = r.cycle;
    report["checks"].push_back(jr);
    if (name == "loopfree" && r.verdict == Verdict::violation && !r.trace.empty()) {
      uint32_t st = l.edges[r.trace.back()].dst;
      for (Symbol dip : e.explorer->ips())
        write_file(c, "routing_" + dip.str() + ".dot", routing_graph_dot(e, st, dip));
    }
  }
  write_file(c, "report.txt", text.str());
  write_file(c, "report.json", report.dump(2) + "\n");
  emit(c, text.str(), report);
  return violation ? kViolation : inconclusive ? kInconclusive : kPass;
}

int run_bisim(const Common& c, const std::vector<std::string>& scenarios) {
  std::vector<Scenario> scns;
  std::vector<Exploration> es;
  for (const auto& path : scenarios) {
    Common one = c;
    one.scenario = path;
    scns.push_back(load(one));
    es.push_back(explore(scns.back(), c.workers, false));
  }
  std::ostringstream os;
  json j{{"left", lts_summary(es[0])}, {"right", lts_summary(es[1])}};
  for (std::size_t i = 0; i < 2; ++i) os << summary_text(scns[i], es[i]);
  if (es[0].built.lts.truncated || es[1].built.lts.truncated) {
    os << "inconclusive: an exploration hit its bounds\n";
    j["verdict"] = "inconclusive";
    emit(c, os.str(), j);
    write_file(c, "report.txt", os.str());
    write_file(c, "report.json", j.dump(2) + "\n");
    return kInconclusive;
  }
  BisimResult r = bisimilar(es[0].built.lts, es[1].built.lts);
  j["verdict"] = r.equivalent ? "bisimilar" : "distinguished";
  j["classes"] = r.classes;
  if (r.equivalent) {
    os << "bisimilar (" << r.classes << " classes)\n";
  } else {
    os << "not bisimilar; distinguishing formula " << r.formula << "\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) os << i + 1 << ": " << r.trace[i] << "\n";
    j["formula"] = r.formula;
    j["trace"] = r.trace;
  }
  write_file(c, "report.txt", os.str());
  write_file(c, "report.json", j.dump(2) + "\n");
  emit(c, os.str(), j);
  return r.equivalent ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AWN process algebra toolkit"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub, bool scenario) {
    if (scenario) sub->add_option("--scenario", c.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--library", c.library, "process library replacing the scenario's")->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--workers", c.workers, "exploration threads")->check(CLI::PositiveNumber);
  };

  uint64_t seed = 0;
  std::size_t max_steps = 1000;
  auto* trace = app.add_subcommand("trace", "one seeded run");
  add_common(trace, true);
  trace->add_option("--seed", seed, "scheduler seed");
  trace->add_option("--steps", max_steps, "step limit");

  auto* exp = app.add_subcommand("explore", "build the reachable LTS");
  add_common(exp, true);

  std::string checks = "prop1,loopfree,monotonic,ctl";
  auto* chk = app.add_subcommand("check", "explore and run checks");
  add_common(chk, true);
  chk->add_option("--checks", checks, "comma-separated: prop1, loopfree, monotonic, ctl");

  std::vector<std::string> pair;
  auto* bis = app.add_subcommand("bisim", "compare the LTSs of two scenarios");
  add_common(bis, false);
  bis->add_option("scenarios", pair, "two scenario files")->required()->expected(2)->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*trace) return run_trace(c, seed, max_steps);
    if (*exp) return run_explore(c);
    if (*chk) {
      std::vector<std::string> list;
      std::stringstream ss(checks);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) list.push_back(item);
      return run_check(c, list);
    }
    if (*bis) return run_bisim(c, pair);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
