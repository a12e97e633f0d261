#pragma once

#include <string>
#include <vector>

#include "awn/signature.hpp"
#include "awn/syntax.hpp"
#include "awn/valuation.hpp"

namespace awn {

class Evaluator {
 public:
  Evaluator(const Signature& sig, DataOptions opts = {}) : sig_(&sig), opts_(opts) {}

  // Throws EvalError on unbound variables or undefined partial operators.
  Value eval(const Valuation& xi, ExprPtr e) const;
  bool holds(const Valuation& xi, ExprPtr phi) const;

  // All minimal extensions of xi that bind exactly the free variables of phi
  // missing from xi and make phi true. Sorted and duplicate-free.
  // Throws EvalError(UnsupportedGuard) when a free variable gets no candidate
  // from pattern matching and its sort has no finite domain.
  std::vector<Valuation> satisfy(const Valuation& xi, ExprPtr phi) const;

  const Signature& signature() const { return *sig_; }
  const DataOptions& options() const { return opts_; }

 private:
  bool closed(const Valuation& xi, ExprPtr e) const;
  void generate(const Valuation& xi, ExprPtr phi, std::vector<Valuation>& out) const;
  bool match(ExprPtr pattern, const Value& v, Valuation& xi) const;

  const Signature* sig_;
  DataOptions opts_;
};

struct BindingViolation {
  Symbol var;
  std::string where;  // printed subterm containing the occurrence
};

// Static check that every variable occurrence is bound by a parameter, an
// enclosing receive, an earlier assignment, or the formula of an enclosing guard.
std::vector<BindingViolation> check_bindings(const ProcessDefinition& def);

}  // namespace awn
