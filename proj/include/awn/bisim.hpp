#pragma once

#include <string>
#include <vector>

#include "awn/lts.hpp"

namespace awn {

struct BisimResult {
  bool equivalent = false;
  // When not equivalent: a distinguishing Hennessy-Milner formula over the
  // formal labels, and the action sequence along its diamonds.
  std::string formula;
  std::vector<std::string> trace;
  std::size_t classes = 0;  // equivalence classes of the disjoint union
};

// Strong bisimilarity of the initial states of two complete LTSs, by
// partition refinement on formal labels. Throws std::invalid_argument if
// either LTS is truncated.
BisimResult bisimilar(const Lts& a, const Lts& b);

// Block index of each state of a single LTS under the coarsest bisimulation.
std::vector<uint32_t> bisim_classes(const Lts& lts);

}  // namespace awn
