#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "awn/lts.hpp"

namespace awn::ctl {

enum class Op { True, False, Atom, Not, And, Or, Implies, EX, AX, EF, AF, EG, AG, EU, AU };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Op op;
  std::string atom;
  FormulaPtr l, r;

  std::string str() const;
  int depth() const;  // temporal/boolean nesting depth
};

FormulaPtr tt();
FormulaPtr ff();
FormulaPtr atom(std::string name);
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(FormulaPtr a, FormulaPtr b);
FormulaPtr lor(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr EX(FormulaPtr f);
FormulaPtr AX(FormulaPtr f);
FormulaPtr EF(FormulaPtr f);
FormulaPtr AF(FormulaPtr f);
FormulaPtr EG(FormulaPtr f);
FormulaPtr AG(FormulaPtr f);
FormulaPtr EU(FormulaPtr a, FormulaPtr b);
FormulaPtr AU(FormulaPtr a, FormulaPtr b);

// Kripke structure with atomic propositions as bit vectors. Paths are
// maximal: a state without successors ends its paths.
struct Kripke {
  uint32_t num_states = 0;
  std::vector<uint32_t> initial;
  std::vector<std::vector<uint32_t>> succ;
  std::map<std::string, std::vector<char>> props;
  // For tag-split structures: LTS state and the entering LTS edge (-1: none).
  std::vector<uint32_t> origin;
  std::vector<int64_t> via;

  bool deadlock(uint32_t s) const { return succ[s].empty(); }
};

using LabelPredicate = std::function<bool(const Label&)>;
using StatePredicate = std::function<bool(uint32_t lts_state)>;

// One Kripke state per LTS edge (its target, tagged with the edge label)
// plus one untagged state per initial LTS state. Label predicates hold on the
// tagged state, state predicates on the underlying LTS state.
Kripke tag_split(const Lts& lts, const std::map<std::string, LabelPredicate>& label_props,
                 const std::map<std::string, StatePredicate>& state_props);

// Satisfaction set of f over all states (fixpoints with predecessor
// worklists and SCCs). Unknown atoms are false.
std::vector<char> sat(const Kripke& k, const Formula& f);

// Whether f holds in every initial state.
bool holds(const Kripke& k, const Formula& f);

// A path from an initial state to `target` (shortest), as Kripke states.
std::vector<uint32_t> path_to(const Kripke& k, uint32_t target);

// From a state in sat(EG phi): a path staying in that set that either ends
// in a deadlock (loop_start = -1) or closes a cycle back to index loop_start.
struct Lasso {
  std::vector<uint32_t> states;
  int64_t loop_start = -1;
};
Lasso eg_witness(const Kripke& k, const std::vector<char>& eg_set, uint32_t from);

}  // namespace awn::ctl
