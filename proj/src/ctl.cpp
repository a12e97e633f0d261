#include "awn/ctl.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace awn::ctl {

namespace {

FormulaPtr make(Op op, FormulaPtr l = nullptr, FormulaPtr r = nullptr, std::string a = {}) {
  return std::make_shared<const Formula>(Formula{op, std::move(a), std::move(l), std::move(r)});
}

std::vector<std::vector<uint32_t>> predecessors(const Kripke& k) {
  std::vector<std::vector<uint32_t>> pred(k.num_states);
  for (uint32_t s = 0; s < k.num_states; ++s)
    for (uint32_t t : k.succ[s]) pred[t].push_back(s);
  return pred;
}

std::vector<char> ex(const Kripke& k, const std::vector<char>& a) {
  std::vector<char> out(k.num_states, 0);
  for (uint32_t s = 0; s < k.num_states; ++s)
    for (uint32_t t : k.succ[s])
      if (a[t]) {
        out[s] = 1;
        break;
      }
  return out;
}

// Least fixpoint of b | (a & EX z), backwards from b.
std::vector<char> eu(const Kripke& k, const std::vector<char>& a, const std::vector<char>& b) {
  auto pred = predecessors(k);
  std::vector<char> z(b);
  std::deque<uint32_t> work;
  for (uint32_t s = 0; s < k.num_states; ++s)
    if (z[s]) work.push_back(s);
  while (!work.empty()) {
    uint32_t t = work.front();
    work.pop_front();
    for (uint32_t s : pred[t])
      if (!z[s] && a[s]) {
        z[s] = 1;
        work.push_back(s);
      }
  }
  return z;
}

// Least fixpoint of b | (a & !deadlock & AX z), by counting successors.
std::vector<char> au(const Kripke& k, const std::vector<char>& a, const std::vector<char>& b) {
  auto pred = predecessors(k);
  std::vector<std::size_t> pending(k.num_states);
  for (uint32_t s = 0; s < k.num_states; ++s) pending[s] = k.succ[s].size();
  std::vector<char> z(b);
  std::deque<uint32_t> work;
  for (uint32_t s = 0; s < k.num_states; ++s)
    if (z[s]) work.push_back(s);
  while (!work.empty()) {
    uint32_t t = work.front();
    work.pop_front();
    for (uint32_t s : pred[t]) {
      // Multi-edges count once per entry in succ, matching pending.
      if (z[s]) continue;
      if (--pending[s] == 0 && a[s]) {
        z[s] = 1;
        work.push_back(s);
      }
    }
  }
  return z;
}

// Greatest fixpoint of a & (deadlock | EX z): states of a with a maximal path
// inside a, i.e. reaching (within a) a deadlock or a nontrivial SCC of a.
std::vector<char> eg(const Kripke& k, const std::vector<char>& a) {
  const uint32_t n = k.num_states;
  std::vector<char> core(n, 0);
  // Iterative Tarjan on the subgraph induced by a.
  std::vector<int64_t> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<uint32_t> stack;
  int64_t counter = 0;
  struct Frame {
    uint32_t v;
    std::size_t i;
  };
  for (uint32_t root = 0; root < n; ++root) {
    if (!a[root] || index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& out = k.succ[f.v];
      if (f.i < out.size()) {
        uint32_t w = out[f.i++];
        if (!a[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      uint32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<uint32_t> comp;
        uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        bool nontrivial = comp.size() > 1 ||
                          std::find(k.succ[v].begin(), k.succ[v].end(), v) != k.succ[v].end();
        if (nontrivial)
          for (uint32_t c : comp) core[c] = 1;
      }
    }
  }
  for (uint32_t s = 0; s < n; ++s)
    if (a[s] && k.deadlock(s)) core[s] = 1;
  return eu(k, a, core);
}

std::vector<char> negate(std::vector<char> v) {
  for (auto& x : v) x = !x;
  return v;
}

}  // namespace

FormulaPtr tt() { return make(Op::True); }
FormulaPtr ff() { return make(Op::False); }
FormulaPtr atom(std::string name) { return make(Op::Atom, nullptr, nullptr, std::move(name)); }
FormulaPtr lnot(FormulaPtr f) { return make(Op::Not, std::move(f)); }
FormulaPtr land(FormulaPtr a, FormulaPtr b) { return make(Op::And, std::move(a), std::move(b)); }
FormulaPtr lor(FormulaPtr a, FormulaPtr b) { return make(Op::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return make(Op::Implies, std::move(a), std::move(b)); }
FormulaPtr EX(FormulaPtr f) { return make(Op::EX, std::move(f)); }
FormulaPtr AX(FormulaPtr f) { return make(Op::AX, std::move(f)); }
FormulaPtr EF(FormulaPtr f) { return make(Op::EF, std::move(f)); }
FormulaPtr AF(FormulaPtr f) { return make(Op::AF, std::move(f)); }
FormulaPtr EG(FormulaPtr f) { return make(Op::EG, std::move(f)); }
FormulaPtr AG(FormulaPtr f) { return make(Op::AG, std::move(f)); }
FormulaPtr EU(FormulaPtr a, FormulaPtr b) { return make(Op::EU, std::move(a), std::move(b)); }
FormulaPtr AU(FormulaPtr a, FormulaPtr b) { return make(Op::AU, std::move(a), std::move(b)); }

std::string Formula::str() const {
  switch (op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return atom;
    case Op::Not: return "!" + l->str();
    case Op::And: return "(" + l->str() + " & " + r->str() + ")";
    case Op::Or: return "(" + l->str() + " | " + r->str() + ")";
    case Op::Implies: return "(" + l->str() + " => " + r->str() + ")";
    case Op::EX: return "EX " + l->str();
    case Op::AX: return "AX " + l->str();
    case Op::EF: return "EF " + l->str();
    case Op::AF: return "AF " + l->str();
    case Op::EG: return "EG " + l->str();
    case Op::AG: return "AG " + l->str();
    case Op::EU: return "E[" + l->str() + " U " + r->str() + "]";
    case Op::AU: return "A[" + l->str() + " U " + r->str() + "]";
  }
  return "?";
}

int Formula::depth() const {
  int d = 0;
  if (l) d = std::max(d, l->depth());
  if (r) d = std::max(d, r->depth());
  return op == Op::True || op == Op::False || op == Op::Atom ? 0 : d + 1;
}

Kripke tag_split(const Lts& lts, const std::map<std::string, LabelPredicate>& label_props,
                 const std::map<std::string, StatePredicate>& state_props) {
  Kripke k;
  const uint32_t n0 = lts.num_states;
  k.num_states = n0 + static_cast<uint32_t>(lts.edges.size());
  k.succ.resize(k.num_states);
  k.origin.resize(k.num_states);
  k.via.assign(k.num_states, -1);
  // States 0..n0-1 are untagged copies used only for initial states; tagged
  // state n0+e is the target of edge e.
  for (uint32_t s = 0; s < n0; ++s) k.origin[s] = s;
  for (std::size_t e = 0; e < lts.edges.size(); ++e) {
    k.origin[n0 + e] = lts.edges[e].dst;
    k.via[n0 + e] = static_cast<int64_t>(e);
  }
  auto out_of = [&](uint32_t lts_state) {
    std::vector<uint32_t> v;
    for (std::size_t e = lts.out_begin(lts_state); e < lts.out_end(lts_state); ++e)
      v.push_back(n0 + static_cast<uint32_t>(e));
    return v;
  };
  for (uint32_t s = 0; s < k.num_states; ++s) k.succ[s] = out_of(k.origin[s]);
  k.initial.push_back(lts.initial);

  for (const auto& [name, pred] : label_props) {
    std::vector<char> bits(k.num_states, 0);
    std::vector<char> by_label(lts.labels.size());
    for (std::size_t i = 0; i < lts.labels.size(); ++i) by_label[i] = pred(lts.labels[i]) ? 1 : 0;
    std::vector<char> by_shown(lts.shown_labels.size());
    for (std::size_t i = 0; i < lts.shown_labels.size(); ++i) by_shown[i] = pred(lts.shown_labels[i]) ? 1 : 0;
    for (std::size_t e = 0; e < lts.edges.size(); ++e)
      bits[n0 + e] = by_label[lts.edges[e].label] || by_shown[lts.edges[e].shown];
    k.props[name] = std::move(bits);
  }
  for (const auto& [name, pred] : state_props) {
    std::vector<char> per(n0);
    for (uint32_t s = 0; s < n0; ++s) per[s] = pred(s) ? 1 : 0;
    std::vector<char> bits(k.num_states);
    for (uint32_t s = 0; s < k.num_states; ++s) bits[s] = per[k.origin[s]];
    k.props[name] = std::move(bits);
  }
  return k;
}

std::vector<char> sat(const Kripke& k, const Formula& f) {
  const uint32_t n = k.num_states;
  switch (f.op) {
    case Op::True: return std::vector<char>(n, 1);
    case Op::False: return std::vector<char>(n, 0);
    case Op::Atom: {
      auto it = k.props.find(f.atom);
      return it == k.props.end() ? std::vector<char>(n, 0) : it->second;
    }
    case Op::Not: return negate(sat(k, *f.l));
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto a = sat(k, *f.l), b = sat(k, *f.r);
      for (uint32_t s = 0; s < n; ++s)
        a[s] = f.op == Op::And ? (a[s] && b[s]) : f.op == Op::Or ? (a[s] || b[s]) : (!a[s] || b[s]);
      return a;
    }
    case Op::EX: return ex(k, sat(k, *f.l));
    case Op::AX: return negate(ex(k, negate(sat(k, *f.l))));
    case Op::EF: return eu(k, std::vector<char>(n, 1), sat(k, *f.l));
    case Op::AF: return au(k, std::vector<char>(n, 1), sat(k, *f.l));
    case Op::EG: return eg(k, sat(k, *f.l));
    case Op::AG: return negate(eu(k, std::vector<char>(n, 1), negate(sat(k, *f.l))));
    case Op::EU: return eu(k, sat(k, *f.l), sat(k, *f.r));
    case Op::AU: return au(k, sat(k, *f.l), sat(k, *f.r));
  }
  throw std::logic_error("bad formula");
}

bool holds(const Kripke& k, const Formula& f) {
  auto s = sat(k, f);
  for (uint32_t i : k.initial)
    if (!s[i]) return false;
  return true;
}

std::vector<uint32_t> path_to(const Kripke& k, uint32_t target) {
  std::vector<int64_t> parent(k.num_states, -2);
  std::deque<uint32_t> work;
  for (uint32_t i : k.initial) {
    parent[i] = -1;
    work.push_back(i);
  }
  while (!work.empty()) {
    uint32_t s = work.front();
    work.pop_front();
    if (s == target) break;
    for (uint32_t t : k.succ[s])
      if (parent[t] == -2) {
        parent[t] = s;
        work.push_back(t);
      }
  }
  if (parent[target] == -2) return {};
  std::vector<uint32_t> path;
  for (int64_t s = target; s >= 0; s = parent[s]) path.push_back(static_cast<uint32_t>(s));
  std::reverse(path.begin(), path.end());
  return path;
}

Lasso eg_witness(const Kripke& k, const std::vector<char>& eg_set, uint32_t from) {
  Lasso out;
  std::vector<int64_t> seen(k.num_states, -1);
  uint32_t s = from;
  for (;;) {
    seen[s] = static_cast<int64_t>(out.states.size());
    out.states.push_back(s);
    int64_t next = -1;
    for (uint32_t t : k.succ[s])
      if (eg_set[t]) {
        next = t;
        break;
      }
    if (next < 0) return out;  // deadlock
    if (seen[next] >= 0) {
      out.loop_start = seen[next];
      return out;
    }
    s = static_cast<uint32_t>(next);
  }
}

}  // namespace awn::ctl
