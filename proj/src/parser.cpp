#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "awn/eval.hpp"
#include "awn/program.hpp"

namespace awn {

std::size_t NetworkTerm::hash() const {
  std::size_t h = encapsulated ? 0x51ed2701 : 0x3c6ef372;
  for (const auto& n : nodes) h = hash_combine(h, n.hash);
  return h;
}

std::strong_ordering operator<=>(const NetworkTerm& a, const NetworkTerm& b) {
  if (auto c = a.encapsulated <=> b.encapsulated; c != 0) return c;
  std::size_t n = std::min(a.nodes.size(), b.nodes.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a.nodes[i] <=> b.nodes[i]; c != 0) return c;
  return a.nodes.size() <=> b.nodes.size();
}

void Program::add_definition(ProcessDefinition def) {
  Symbol name = def.name;
  if (defs_.count(name)) throw std::invalid_argument("process " + name.str() + " defined twice");
  std::vector<ExprPtr> args;
  for (const auto& p : def.params) args.push_back(make_var(p.name, p.sort));
  calls_[name] = make_call(name, std::move(args));
  defs_.emplace(name, std::move(def));
  def_order_.push_back(name);
}

const ProcessDefinition* Program::definition(Symbol name) const {
  auto it = defs_.find(name);
  return it == defs_.end() ? nullptr : &it->second;
}

ProcPtr Program::canonical_call(Symbol name) const {
  auto it = calls_.find(name);
  return it == calls_.end() ? nullptr : it->second;
}

void Program::add_network(Symbol name, NetworkTerm net) {
  if (nets_.count(name)) throw std::invalid_argument("network " + name.str() + " defined twice");
  nets_.emplace(name, std::move(net));
  net_order_.push_back(name);
}

const NetworkTerm* Program::network(Symbol name) const {
  auto it = nets_.find(name);
  return it == nets_.end() ? nullptr : &it->second;
}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
  std::size_t offset;
};

std::vector<Token> lex(const std::string& src) {
  static const std::vector<std::string> puncts = {"<<|", "|->", ":=", "!=", "=>", "<=", ">=", "||", "(", ")", "[",
                                                  "]",   "{",   "}",  ",",  ";",  ".",  ":",  "=",  "&",  "|", "!",
                                                  "+",   "-",   "<",  ">"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int l = line, cl = col;
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), l, cl, start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Number, src.substr(i, j - i), l, cl, start});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& p : puncts) {
      if (src.compare(i, p.size(), p) == 0) {
        out.push_back({Tok::Punct, p, l, cl, start});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, col, src.size()});
  return out;
}

bool numeric(const Signature& sig, Symbol s) { return s.valid() && sig.is_numeric(s); }

class Parser {
 public:
  Parser(const Program& prog, const std::string& src) : prog_(prog), sig_(prog.signature()), toks_(lex(src)) {
    prescan_headers();
  }

  // Top level; mutates the program.
  void parse_file(Program& prog) {
    mprog_ = &prog;
    while (!at_end()) {
      if (is_ident("sort")) parse_sort_decl();
      else if (is_ident("const")) parse_const_decl();
      else if (is_ident("var")) parse_var_decl();
      else if (is_ident("ctor")) parse_ctor_decl();
      else if (is_ident("def")) parse_def();
      else if (is_ident("network")) parse_network_decl();
      else fail("expected a declaration, definition or network");
    }
    check_pending_calls();
  }

  ExprPtr parse_standalone_expr(Symbol expected) {
    ExprPtr e = expr(expected);
    expect_end();
    return e;
  }

  ProcPtr parse_standalone_proc() {
    ProcPtr p = proc();
    expect_end();
    check_pending_calls();
    return p;
  }

  NetworkTerm parse_standalone_network() {
    NetworkTerm n = network();
    expect_end();
    check_pending_calls();
    return n;
  }

 private:
  const Program& prog_;
  Program* mprog_ = nullptr;
  const Signature& sig_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  // Parameter names of every `def` in this source, for forward calls.
  std::map<std::string, std::vector<std::string>> headers_;
  struct PendingCall {
    Symbol name;
    std::size_t arity;
    int line, col;
  };
  std::vector<PendingCall> pending_;

  // --- token helpers ---
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(const char* p, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
  bool is_ident(const char* s) const { return peek().kind == Tok::Ident && peek().text == s; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.col, msg + " near " + near);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }
  void expect(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    ++pos_;
  }
  void expect_keyword(const char* s) {
    if (!is_ident(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier");
    return toks_[pos_++].text;
  }
  bool accept(const char* p) {
    if (is_punct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  // `[[` written without a gap starts an assignment.
  bool at_assignment() const {
    return is_punct("[") && is_punct("[", 1) && peek(1).offset == peek().offset + 1;
  }

  void prescan_headers() {
    for (std::size_t i = 0; i + 2 < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::Ident && toks_[i].text == "def" && toks_[i + 1].kind == Tok::Ident &&
          toks_[i + 2].text == "(") {
        std::vector<std::string> params;
        std::size_t j = i + 3;
        while (j < toks_.size() && toks_[j].text != ")") {
          if (toks_[j].kind == Tok::Ident) params.push_back(toks_[j].text);
          ++j;
        }
        headers_[toks_[i + 1].text] = params;
      }
    }
  }

  // --- sorts ---
  Symbol sort_name() {
    const Token& t = peek();
    Symbol s = Symbol::intern(ident());
    if (!sig_.sort(s)) fail_at(t, "unknown sort " + s.str());
    return s;
  }

  bool compatible(Symbol want, Symbol got) const {
    if (!want.valid() || !got.valid()) return true;
    if (want == got) return true;
    return numeric(sig_, want) && numeric(sig_, got);
  }

  // Gives untyped collection literals the expected sort.
  ExprPtr coerce(ExprPtr e, Symbol want, const Token& at) const {
    if (!want.valid()) return e;
    bool literal = e->kind == ExprKind::SetLit || e->kind == ExprKind::MapLit || e->kind == ExprKind::SeqLit;
    if (literal && !e->sort.valid()) {
      const SortInfo* info = sig_.sort(want);
      if (!info) fail_at(at, "unknown sort " + want.str());
      if (e->args.empty()) {
        if (info->kind == SortKind::Map && e->kind != ExprKind::SeqLit) return make_map(want, {});
        if (info->kind == SortKind::Set && e->kind != ExprKind::SeqLit) return make_set(want, {});
        if (info->kind == SortKind::Seq && e->kind == ExprKind::SeqLit) return make_seq(want, {});
      }
      fail_at(at, "literal does not fit sort " + want.str());
    }
    if (literal && e->sort.valid() && e->sort != want) {
      // A non-empty literal whose inferred sort differs; re-sort if the shapes agree.
      const SortInfo* info = sig_.sort(want);
      const SortInfo* have = sig_.sort(e->sort);
      if (info && have && info->kind == have->kind && info->elem == have->elem && info->key == have->key &&
          info->val == have->val) {
        if (e->kind == ExprKind::SetLit) return make_set(want, e->args);
        if (e->kind == ExprKind::SeqLit) return make_seq(want, e->args);
        if (e->kind == ExprKind::MapLit) return make_map(want, e->args);
      }
    }
    if (!compatible(want, e->sort))
      fail_at(at, "expected sort " + want.str() + ", got " + (e->sort.valid() ? e->sort.str() : "untyped literal"));
    return e;
  }

  // --- declarations ---
  void parse_sort_decl() {
    expect_keyword("sort");
    Symbol name = Symbol::intern(ident());
    std::string text = "sort " + name.str();
    SortInfo info{name, SortKind::Atom, {}, {}, {}};
    std::vector<std::string> enum_consts;
    if (accept("=")) {
      if (is_punct("{")) {
        ++pos_;
        info.kind = SortKind::Enum;
        do {
          enum_consts.push_back(ident());
        } while (accept(","));
        expect("}");
        text += " = {";
        for (std::size_t i = 0; i < enum_consts.size(); ++i) text += (i ? ", " : "") + enum_consts[i];
        text += "}";
      } else {
        std::string k = ident();
        if (k == "set" || k == "seq") {
          info.kind = k == "set" ? SortKind::Set : SortKind::Seq;
          info.elem = sort_name();
          text += " = " + k + " " + info.elem.str();
        } else if (k == "map") {
          info.kind = SortKind::Map;
          info.key = sort_name();
          expect("-");
          expect(">");
          info.val = sort_name();
          text += " = map " + info.key.str() + " -> " + info.val.str();
        } else if (k == "nat") {
          info.kind = SortKind::Nat;
          text += " = nat";
        } else if (k == "data") {
          info.kind = SortKind::Data;
          text += " = data";
        } else {
          fail("expected set, seq, map, nat, data or an enumeration");
        }
      }
    }
    try {
      mprog_->signature().add_sort(info);
      for (const auto& c : enum_consts) mprog_->signature().add_constant(Symbol::intern(c), name);
    } catch (const SignatureError& e) {
      fail(e.what());
    }
    mprog_->add_declaration_text(text);
  }

  void parse_const_decl() {
    expect_keyword("const");
    std::vector<std::string> names;
    do {
      names.push_back(ident());
    } while (accept(","));
    expect(":");
    Symbol s = sort_name();
    std::string text = "const ";
    for (std::size_t i = 0; i < names.size(); ++i) {
      text += (i ? ", " : "") + names[i];
      try {
        mprog_->signature().add_constant(Symbol::intern(names[i]), s);
      } catch (const SignatureError& e) {
        fail(e.what());
      }
    }
    mprog_->add_declaration_text(text + " : " + s.str());
  }

  void parse_var_decl() {
    expect_keyword("var");
    std::vector<std::string> names;
    do {
      names.push_back(ident());
    } while (accept(","));
    expect(":");
    Symbol s = sort_name();
    std::string text = "var ";
    for (std::size_t i = 0; i < names.size(); ++i) {
      text += (i ? ", " : "") + names[i];
      try {
        mprog_->signature().declare_var(Symbol::intern(names[i]), s);
      } catch (const SignatureError& e) {
        fail(e.what());
      }
    }
    mprog_->add_declaration_text(text + " : " + s.str());
  }

  void parse_ctor_decl() {
    expect_keyword("ctor");
    Symbol name = Symbol::intern(ident());
    std::vector<Symbol> params;
    expect("(");
    if (!is_punct(")")) {
      do {
        params.push_back(sort_name());
      } while (accept(","));
    }
    expect(")");
    expect(":");
    Symbol result = sort_name();
    std::string text = "ctor " + name.str() + "(";
    for (std::size_t i = 0; i < params.size(); ++i) text += (i ? ", " : "") + params[i].str();
    text += ") : " + result.str();
    try {
      mprog_->signature().add_operator({name, params, result, true, {}});
    } catch (const SignatureError& e) {
      fail(e.what());
    }
    mprog_->add_declaration_text(text);
  }

  void parse_def() {
    expect_keyword("def");
    const Token& at = peek();
    ProcessDefinition def;
    def.name = Symbol::intern(ident());
    expect("(");
    if (!is_punct(")")) {
      while (true) {
        const Token& pt = peek();
        Symbol v = Symbol::intern(ident());
        auto s = sig_.var_sort(v);
        if (!s) fail_at(pt, "parameter " + v.str() + " is not a declared variable");
        for (const auto& p : def.params)
          if (p.name == v) fail_at(pt, "duplicate parameter " + v.str());
        def.params.push_back({v, *s});
        if (accept(",")) continue;
        if (accept(";")) {
          def.semicolon = static_cast<int>(def.params.size());
          continue;
        }
        break;
      }
    }
    expect(")");
    expect("=");
    def.body = proc();
    if (prog_.definition(def.name)) fail_at(at, "process " + def.name.str() + " defined twice");
    mprog_->add_definition(std::move(def));
  }

  void parse_network_decl() {
    expect_keyword("network");
    const Token& at = peek();
    Symbol name = Symbol::intern(ident());
    expect("=");
    NetworkTerm n = network();
    if (prog_.network(name)) fail_at(at, "network " + name.str() + " defined twice");
    mprog_->add_network(name, std::move(n));
  }

  void check_pending_calls() {
    for (const auto& c : pending_) {
      const ProcessDefinition* d = prog_.definition(c.name);
      if (!d) throw ParseError(c.line, c.col, "call to undefined process " + c.name.str());
      if (d->params.size() != c.arity)
        throw ParseError(c.line, c.col,
                         "process " + c.name.str() + " expects " + std::to_string(d->params.size()) + " arguments");
    }
    pending_.clear();
  }

  // --- expressions ---
  ExprPtr expr(Symbol expected = {}) {
    const Token& at = peek();
    ExprPtr e = implies();
    return coerce(e, expected, at);
  }

  ExprPtr boolean(const Token& at, ExprPtr e) { return coerce(e, sorts::Bool(), at); }

  ExprPtr implies() {
    const Token& at = peek();
    ExprPtr l = disj();
    if (accept("=>")) {
      const Token& rt = peek();
      ExprPtr r = implies();
      return make_app(Symbol::intern(builtin_ops::Implies), sorts::Bool(), {boolean(at, l), boolean(rt, r)});
    }
    return l;
  }

  ExprPtr disj() {
    const Token& at = peek();
    ExprPtr l = conj();
    while (is_punct("|")) {
      ++pos_;
      const Token& rt = peek();
      ExprPtr r = conj();
      l = make_app(Symbol::intern(builtin_ops::Or), sorts::Bool(), {boolean(at, l), boolean(rt, r)});
    }
    return l;
  }

  ExprPtr conj() {
    const Token& at = peek();
    ExprPtr l = negation();
    while (is_punct("&")) {
      ++pos_;
      const Token& rt = peek();
      ExprPtr r = negation();
      l = make_app(Symbol::intern(builtin_ops::And), sorts::Bool(), {boolean(at, l), boolean(rt, r)});
    }
    return l;
  }

  ExprPtr negation() {
    if (is_punct("!")) {
      ++pos_;
      const Token& at = peek();
      ExprPtr e = negation();
      return make_app(Symbol::intern(builtin_ops::Not), sorts::Bool(), {boolean(at, e)});
    }
    return comparison();
  }

  Symbol collection_elem(Symbol coll, const Token& at) const {
    const SortInfo* info = sig_.sort(coll);
    if (!info) fail_at(at, "membership test needs a collection");
    if (info->kind == SortKind::Set || info->kind == SortKind::Seq) return info->elem;
    if (info->kind == SortKind::Map) return info->key;
    fail_at(at, "membership test on non-collection sort " + coll.str());
  }

  ExprPtr comparison() {
    const Token& at = peek();
    ExprPtr l = sum();
    static const std::vector<std::string> ops = {"=", "!=", "<", "<=", ">", ">="};
    for (const auto& op : ops) {
      if (is_punct(op.c_str())) {
        ++pos_;
        const Token& rt = peek();
        ExprPtr r = sum();
        if (op == "=" || op == "!=") {
          if (!l->sort.valid() && r->sort.valid()) l = coerce(l, r->sort, at);
          else if (l->sort.valid()) r = coerce(r, l->sort, rt);
          else fail_at(at, "cannot infer the sort of this comparison");
        } else {
          if (!numeric(sig_, l->sort)) fail_at(at, "ordering needs numbers");
          if (!numeric(sig_, r->sort)) fail_at(rt, "ordering needs numbers");
        }
        return make_app(Symbol::intern(op), sorts::Bool(), {l, r});
      }
    }
    if (is_ident("in") || is_ident("notin")) {
      std::string op = ident();
      const Token& rt = peek();
      ExprPtr r = sum();
      if (!r->sort.valid()) fail_at(rt, "cannot infer the sort of this collection");
      l = coerce(l, collection_elem(r->sort, rt), at);
      return make_app(Symbol::intern(op), sorts::Bool(), {l, r});
    }
    return l;
  }

  ExprPtr sum() {
    const Token& at = peek();
    ExprPtr l = primary();
    while (is_punct("+") || is_punct("-")) {
      std::string op = toks_[pos_++].text;
      const Token& rt = peek();
      ExprPtr r = primary();
      if (!numeric(sig_, l->sort)) fail_at(at, "arithmetic needs numbers");
      if (!numeric(sig_, r->sort)) fail_at(rt, "arithmetic needs numbers");
      l = make_app(Symbol::intern(op), l->sort, {l, r});
    }
    return l;
  }

  std::vector<std::pair<ExprPtr, const Token*>> arg_list() {
    std::vector<std::pair<ExprPtr, const Token*>> out;
    expect("(");
    if (!is_punct(")")) {
      do {
        const Token* at = &peek();
        out.emplace_back(implies(), at);
      } while (accept(","));
    }
    expect(")");
    return out;
  }

  ExprPtr primary() {
    const Token& at = peek();
    if (at.kind == Tok::Number) {
      ++pos_;
      return make_lit(Value::nat(sorts::Nat(), std::stoull(at.text)));
    }
    if (accept("(")) {
      ExprPtr e = implies();
      expect(")");
      return e;
    }
    if (is_punct("{")) return brace_literal();
    if (is_punct("[")) {
      ++pos_;
      std::vector<ExprPtr> items;
      const Token* first = &peek();
      if (!is_punct("]")) {
        do {
          items.push_back(implies());
        } while (accept(","));
      }
      expect("]");
      if (items.empty()) return make_seq({}, {});
      auto s = sig_.seq_sort_of(items[0]->sort);
      if (!s) fail_at(*first, "no sequence sort over " + items[0]->sort.str());
      for (auto& it : items) it = coerce(it, items[0]->sort, *first);
      return make_seq(*s, std::move(items));
    }
    if (at.kind != Tok::Ident) fail("expected an expression");
    std::string name = ident();
    if (name == "true" || name == "false") return make_lit(Value::boolean(name == "true"));
    Symbol sym = Symbol::intern(name);
    if (is_punct("(")) {
      if (name == builtin_ops::Union || name == builtin_ops::Inter || name == builtin_ops::Diff) {
        auto args = arg_list();
        if (args.size() != 2) fail_at(at, name + " takes two arguments");
        Symbol s = args[0].first->sort.valid() ? args[0].first->sort : args[1].first->sort;
        if (!s.valid()) fail_at(at, "cannot infer the sort of " + name);
        const SortInfo* info = sig_.sort(s);
        if (!info || info->kind != SortKind::Set) fail_at(at, name + " needs sets");
        return make_app(sym, s, {coerce(args[0].first, s, *args[0].second), coerce(args[1].first, s, *args[1].second)});
      }
      const Operator* op = sig_.op(sym);
      if (!op) fail_at(at, "unknown operator " + name);
      auto args = arg_list();
      if (args.size() != op->params.size())
        fail_at(at, "operator " + name + " expects " + std::to_string(op->params.size()) + " arguments");
      std::vector<ExprPtr> xs;
      for (std::size_t i = 0; i < args.size(); ++i) xs.push_back(coerce(args[i].first, op->params[i], *args[i].second));
      return make_app(sym, op->result, std::move(xs));
    }
    if (auto vs = sig_.var_sort(sym)) return make_var(sym, *vs);
    if (const Value* c = sig_.constant(sym)) return make_lit(*c);
    fail_at(at, "unknown identifier " + name);
  }

  // `{}`, `{a, b}`, `{k |-> v, ...}` or the empty map `{|->}`.
  ExprPtr brace_literal() {
    const Token& at = peek();
    expect("{");
    if (accept("}")) return make_set({}, {});
    if (is_punct("|->")) {
      ++pos_;
      expect("}");
      return make_map({}, {});
    }
    ExprPtr first = implies();
    if (accept("|->")) {
      std::vector<ExprPtr> flat{first, implies()};
      while (accept(",")) {
        flat.push_back(implies());
        expect("|->");
        flat.push_back(implies());
      }
      expect("}");
      Symbol ks = flat[0]->sort, vs = flat[1]->sort;
      for (const auto& [name, info] : sig_.sorts())
        if (info.kind == SortKind::Map && info.key == ks && compatible(info.val, vs)) {
          for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = coerce(flat[i], i % 2 ? info.val : info.key, at);
          return make_map(name, std::move(flat));
        }
      fail_at(at, "no map sort from " + ks.str() + " to " + (vs.valid() ? vs.str() : "?"));
    }
    std::vector<ExprPtr> elems{first};
    while (accept(",")) elems.push_back(implies());
    expect("}");
    auto s = sig_.set_sort_of(first->sort);
    if (!s) fail_at(at, "no set sort over " + (first->sort.valid() ? first->sort.str() : "?"));
    for (auto& e : elems) e = coerce(e, first->sort, at);
    return make_set(*s, std::move(elems));
  }

  // --- processes ---
  ProcPtr proc() {
    ProcPtr p = prefix();
    while (accept("+")) p = make_choice(p, prefix());
    return p;
  }

  ProcPtr prefix() {
    const Token& at = peek();
    if (at_assignment()) {
      pos_ += 2;
      const Token& vt = peek();
      Symbol v = Symbol::intern(ident());
      auto vs = sig_.var_sort(v);
      if (!vs) fail_at(vt, "assignment to undeclared variable " + v.str());
      expect(":=");
      ExprPtr e = expr(*vs);
      expect("]");
      expect("]");
      return make_assign(v, e, prefix());
    }
    if (accept("[")) {
      ExprPtr phi = expr(sorts::Bool());
      expect("]");
      return make_guard(phi, prefix());
    }
    if (accept("(")) {
      ProcPtr p = proc();
      expect(")");
      return p;
    }
    if (at.kind != Tok::Ident) fail("expected a process expression");
    std::string kw = at.text;
    if (kw == "broadcast" || kw == "send" || kw == "deliver") {
      ++pos_;
      expect("(");
      ExprPtr e = expr(kw == "deliver" ? sorts::Data() : sorts::Msg());
      expect(")");
      expect(".");
      ProcPtr p = prefix();
      if (kw == "broadcast") return make_broadcast(e, p);
      if (kw == "send") return make_send(e, p);
      return make_deliver(e, p);
    }
    if (kw == "groupcast") {
      ++pos_;
      expect("(");
      ExprPtr d = expr(sorts::SetIp());
      expect(",");
      ExprPtr m = expr(sorts::Msg());
      expect(")");
      expect(".");
      return make_groupcast(d, m, prefix());
    }
    if (kw == "unicast") {
      ++pos_;
      expect("(");
      ExprPtr d = expr(sorts::Ip());
      expect(",");
      ExprPtr m = expr(sorts::Msg());
      expect(")");
      expect(".");
      ProcPtr p = prefix();
      expect(">");
      ProcPtr q = prefix();
      return make_unicast(d, m, p, q);
    }
    if (kw == "receive") {
      ++pos_;
      expect("(");
      const Token& vt = peek();
      Symbol v = Symbol::intern(ident());
      auto vs = sig_.var_sort(v);
      if (!vs) fail_at(vt, "receive into undeclared variable " + v.str());
      if (*vs != sorts::Msg()) fail_at(vt, "receive needs a variable of sort MSG");
      expect(")");
      expect(".");
      return make_receive(v, prefix());
    }
    // Process call.
    Symbol name = Symbol::intern(ident());
    auto args = arg_list();
    std::vector<Symbol> param_sorts;
    if (const ProcessDefinition* d = prog_.definition(name)) {
      for (const auto& p : d->params) param_sorts.push_back(p.sort);
    } else if (auto it = headers_.find(name.str()); it != headers_.end()) {
      for (const auto& pn : it->second) {
        auto s = sig_.var_sort(Symbol::intern(pn));
        param_sorts.push_back(s ? *s : Symbol());
      }
    }
    std::vector<ExprPtr> xs;
    for (std::size_t i = 0; i < args.size(); ++i) {
      Symbol want = i < param_sorts.size() ? param_sorts[i] : Symbol();
      xs.push_back(coerce(args[i].first, want, *args[i].second));
      if (!xs.back()->sort.valid()) fail_at(*args[i].second, "cannot infer the sort of this argument");
    }
    pending_.push_back({name, xs.size(), at.line, at.col});
    return make_call(name, std::move(xs));
  }

  // --- networks ---
  NetworkTerm network() {
    NetworkTerm net;
    std::vector<NodeState> nodes;
    if (accept("[")) {
      net.encapsulated = true;
      net.shape = mnet(nodes);
      expect("]");
    } else {
      net.shape = mnet(nodes);
    }
    std::set<Symbol> seen;
    for (const auto& n : nodes)
      if (!seen.insert(n.ip).second) fail("duplicate node address " + n.ip.str());
    net.nodes = std::move(nodes);
    return net;
  }

  std::shared_ptr<const NetShape> mnet(std::vector<NodeState>& nodes) {
    auto l = nterm(nodes);
    while (accept("||")) l = NetShape::make_par(l, nterm(nodes));
    return l;
  }

  std::shared_ptr<const NetShape> nterm(std::vector<NodeState>& nodes) {
    if (accept("(")) {
      auto s = mnet(nodes);
      expect(")");
      return s;
    }
    if (peek().kind != Tok::Ident) fail("expected a node expression");
    nodes.push_back(node());
    return NetShape::make_leaf(static_cast<int>(nodes.size() - 1));
  }

  NodeState node() {
    NodeState n;
    const Token& at = peek();
    Symbol ip = Symbol::intern(ident());
    const Value* c = sig_.constant(ip);
    if (!c || c->sort() != sorts::Ip()) fail_at(at, "node address " + ip.str() + " is not an IP constant");
    n.ip = ip;
    expect(":");
    n.shape = par(n.leaves);
    expect(":");
    Evaluator ev(sig_);
    n.range = ev.eval({}, expr(sorts::SetIp()));
    n.rehash();
    return n;
  }

  std::shared_ptr<const ParShape> par(std::vector<SeqState>& leaves) {
    auto l = pterm(leaves);
    while (accept("<<|")) l = ParShape::make_par(l, pterm(leaves));
    return l;
  }

  std::shared_ptr<const ParShape> pterm(std::vector<SeqState>& leaves) {
    if (accept("(")) {
      auto s = par(leaves);
      expect(")");
      return s;
    }
    leaves.push_back(leaf());
    return ParShape::make_leaf(static_cast<int>(leaves.size() - 1));
  }

  SeqState leaf() {
    SeqState s;
    if (accept("{")) {
      Evaluator ev(sig_);
      std::vector<Valuation::Entry> entries;
      if (!is_punct("}")) {
        do {
          const Token& vt = peek();
          Symbol v = Symbol::intern(ident());
          auto vs = sig_.var_sort(v);
          if (!vs) fail_at(vt, "undeclared variable " + v.str());
          expect("=");
          ExprPtr e = expr(*vs);
          try {
            entries.emplace_back(v, ev.eval({}, e));
          } catch (const EvalError& err) {
            fail_at(vt, err.what());
          }
        } while (accept(","));
      }
      expect("}");
      try {
        s.xi = Valuation(std::move(entries));
      } catch (const std::invalid_argument& err) {
        fail(err.what());
      }
    }
    s.proc = proc();
    return s;
  }
};

}  // namespace

void parse_into(Program& prog, const std::string& source) {
  Parser p(prog, source);
  p.parse_file(prog);
}

Program parse_program(const std::string& source, Signature sig) {
  Program prog(std::move(sig));
  parse_into(prog, source);
  return prog;
}

ExprPtr parse_expression(const Program& prog, const std::string& text, Symbol expected) {
  Parser p(prog, text);
  return p.parse_standalone_expr(expected);
}

ProcPtr parse_process(const Program& prog, const std::string& text) {
  Parser p(prog, text);
  return p.parse_standalone_proc();
}

NetworkTerm parse_network(const Program& prog, const std::string& text) {
  Parser p(prog, text);
  return p.parse_standalone_network();
}

std::string print_definition(const ProcessDefinition& def) {
  std::ostringstream os;
  os << "def " << def.name.str() << "(";
  for (std::size_t i = 0; i < def.params.size(); ++i) {
    if (i) os << (static_cast<int>(i) == def.semicolon ? "; " : ", ");
    os << def.params[i].name.str();
  }
  os << ") =\n  " << to_string(def.body) << "\n";
  return os.str();
}

std::string print_leaf(const SeqState& s) {
  std::ostringstream os;
  os << "{";
  const auto& es = s.xi.entries();
  for (std::size_t i = 0; i < es.size(); ++i) os << (i ? ", " : "") << es[i].first.str() << " = " << es[i].second.str();
  os << "} " << to_string(s.proc);
  return os.str();
}

namespace {

void print_par(std::ostream& os, const ParShape& shape, const std::vector<SeqState>& leaves) {
  if (shape.leaf >= 0) {
    os << print_leaf(leaves[shape.leaf]);
    return;
  }
  os << "(";
  print_par(os, *shape.left, leaves);
  os << " <<| ";
  print_par(os, *shape.right, leaves);
  os << ")";
}

void print_net(std::ostream& os, const NetShape& shape, const std::vector<NodeState>& nodes) {
  if (shape.node >= 0) {
    const NodeState& n = nodes[shape.node];
    os << n.ip.str() << " : ";
    print_par(os, *n.shape, n.leaves);
    os << " : " << n.range.str();
    return;
  }
  os << "(";
  print_net(os, *shape.left, nodes);
  os << "\n  || ";
  print_net(os, *shape.right, nodes);
  os << ")";
}

}  // namespace

std::string print_network(const NetworkTerm& net) {
  std::ostringstream os;
  if (net.encapsulated) os << "[ ";
  print_net(os, *net.shape, net.nodes);
  if (net.encapsulated) os << " ]";
  return os.str();
}

std::string print_program(const Program& prog) {
  std::ostringstream os;
  for (const auto& d : prog.declaration_texts()) os << d << "\n";
  for (Symbol name : prog.definition_order()) os << "\n" << print_definition(*prog.definition(name));
  for (Symbol name : prog.network_order())
    os << "\nnetwork " << name.str() << " =\n  " << print_network(*prog.network(name)) << "\n";
  return os.str();
}

}  // namespace awn
