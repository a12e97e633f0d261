#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "awn/signature.hpp"
#include "awn/state.hpp"
#include "awn/syntax.hpp"

namespace awn {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

// A network term as written in source, before interning.
struct NetworkTerm {
  std::shared_ptr<const NetShape> shape;
  std::vector<NodeState> nodes;
  bool encapsulated = false;

  std::size_t hash() const;
  // Shapes are fixed along transitions, so states of one system compare by nodes.
  friend bool operator==(const NetworkTerm& a, const NetworkTerm& b) {
    return a.encapsulated == b.encapsulated && a.nodes == b.nodes;
  }
  friend std::strong_ordering operator<=>(const NetworkTerm& a, const NetworkTerm& b);
};

// Signature, process definitions and named networks. Definitions are
// immutable once loaded; calls are resolved by name at step time.
class Program {
 public:
  explicit Program(Signature sig) : sig_(std::move(sig)) {}

  Signature& signature() { return sig_; }
  const Signature& signature() const { return sig_; }

  void add_definition(ProcessDefinition def);
  const ProcessDefinition* definition(Symbol name) const;
  const std::vector<Symbol>& definition_order() const { return def_order_; }

  // X(var_1, ..., var_n) over the parameters of X.
  ProcPtr canonical_call(Symbol name) const;

  void add_network(Symbol name, NetworkTerm net);
  const NetworkTerm* network(Symbol name) const;
  const std::vector<Symbol>& network_order() const { return net_order_; }

  // Declarations as loaded, in normalised source form (for printing).
  void add_declaration_text(std::string text) { decls_.push_back(std::move(text)); }
  const std::vector<std::string>& declaration_texts() const { return decls_; }

 private:
  std::vector<std::string> decls_;
  Signature sig_;
  std::map<Symbol, ProcessDefinition> defs_;
  std::map<Symbol, ProcPtr> calls_;
  std::vector<Symbol> def_order_;
  std::map<Symbol, NetworkTerm> nets_;
  std::vector<Symbol> net_order_;
};

// Loads declarations, definitions and networks from source into prog.
void parse_into(Program& prog, const std::string& source);
Program parse_program(const std::string& source, Signature sig);

// Single expressions and process terms over the declarations of prog.
// An invalid expected sort means "infer".
ExprPtr parse_expression(const Program& prog, const std::string& text, Symbol expected = {});
ProcPtr parse_process(const Program& prog, const std::string& text);
NetworkTerm parse_network(const Program& prog, const std::string& text);

// Source text that parse_into accepts and that reproduces the definitions
// and networks (declarations of sorts, constants and variables included).
std::string print_program(const Program& prog);
std::string print_definition(const ProcessDefinition& def);
std::string print_network(const NetworkTerm& net);
std::string print_leaf(const SeqState& s);

}  // namespace awn
