#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "awn/aodv/data.hpp"
#include "awn/ctl.hpp"
#include "awn/lts.hpp"

// Brute-force reference implementations shared by the unit tests and the
// acceptance runner.
namespace awn::oracle {

// --- routing tables -------------------------------------------------------

inline std::vector<Symbol> merged(std::vector<Symbol> a, const std::vector<Symbol>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// The update read off as a decision table on the old entry.
inline aodv::RoutingTable upd(const aodv::RoutingTable& rt, const aodv::RouteEntry& r) {
  aodv::RoutingTable out;
  bool seen = false;
  for (const auto& [dip, old] : rt) {
    if (dip != r.dip) {
      out[dip] = old;
      continue;
    }
    seen = true;
    bool newer = r.dsn > old.dsn;
    bool same = r.dsn == old.dsn;
    bool take = newer || (same && !old.valid) || (same && r.hops < old.hops);
    aodv::RouteEntry e = take ? r : old;
    e.pre = merged(old.pre, r.pre);
    out[dip] = e;
  }
  if (!seen) out[r.dip] = r;
  return out;
}

inline aodv::RoutingTable inv(const aodv::RoutingTable& rt, const aodv::Dests& dests, bool rfc_literal) {
  aodv::RoutingTable out;
  for (const auto& [dip, old] : rt) {
    aodv::RouteEntry e = old;
    for (const auto& [rip, rsn] : dests) {
      if (rip != dip) continue;
      if (rfc_literal) {
        e.dsn = rsn;
        e.valid = false;
      } else if (old.valid) {
        e.dsn = old.dsn + 1 > rsn ? old.dsn + 1 : rsn;
        e.valid = false;
      }
    }
    out[dip] = e;
  }
  return out;
}

// Every entry for dip over the enumeration domain.
inline std::vector<aodv::RouteEntry> entries(Symbol dip, Symbol nhip, const std::vector<std::vector<Symbol>>& pres) {
  std::vector<aodv::RouteEntry> out;
  for (aodv::Sqn dsn = 0; dsn <= 3; ++dsn)
    for (uint64_t hops = 0; hops <= 3; ++hops)
      for (bool known : {true, false})
        for (bool valid : {true, false})
          for (const auto& pre : pres) out.push_back({dip, dsn, known, valid, hops, nhip, pre});
  return out;
}

// Tables with at most two entries over destinations x and y.
inline std::vector<aodv::RoutingTable> tables(const std::vector<aodv::RouteEntry>& ex,
                                              const std::vector<aodv::RouteEntry>& ey) {
  std::vector<aodv::RoutingTable> out{{}};
  for (const auto& e : ex) out.push_back({{e.dip, e}});
  for (const auto& e : ey) out.push_back({{e.dip, e}});
  for (const auto& a : ex)
    for (const auto& b : ey) out.push_back({{a.dip, a}, {b.dip, b}});
  return out;
}

// --- bisimilarity ---------------------------------------------------------

// Greatest fixpoint over all state pairs of one LTS.
inline std::vector<std::vector<char>> bisim_relation(const Lts& l) {
  const uint32_t n = l.num_states;
  std::vector<std::vector<char>> rel(n, std::vector<char>(n, 1));
  auto simulated = [&](uint32_t p, uint32_t q) {
    for (std::size_t i = l.out_begin(p); i < l.out_end(p); ++i) {
      bool match = false;
      for (std::size_t j = l.out_begin(q); j < l.out_end(q) && !match; ++j)
        match = l.edges[j].label == l.edges[i].label && rel[l.edges[i].dst][l.edges[j].dst];
      if (!match) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (uint32_t p = 0; p < n; ++p)
      for (uint32_t q = 0; q < n; ++q)
        if (rel[p][q] && !(simulated(p, q) && simulated(q, p))) {
          rel[p][q] = 0;
          changed = true;
        }
  }
  return rel;
}

inline Lts random_lts(std::mt19937_64& rng, uint32_t states, uint32_t labels, double density) {
  Lts l;
  l.num_states = states;
  std::uniform_real_distribution<double> u(0, 1);
  for (uint32_t s = 0; s < states; ++s)
    for (uint32_t a = 0; a < labels; ++a)
      for (uint32_t t = 0; t < states; ++t)
        if (u(rng) < density) l.add_edge(s, Label::deliver(Value::nat(sorts::Nat(), a)), t);
  l.finalise();
  return l;
}

// --- CTL ------------------------------------------------------------------

// Satisfaction sets by plain Knaster-Tarski iteration over subsets, on
// maximal paths: deadlocks end paths, AX holds there vacuously.
inline std::vector<char> ctl_sat(const ctl::Kripke& k, const ctl::Formula& f) {
  using ctl::Op;
  const uint32_t n = k.num_states;
  auto ex = [&](const std::vector<char>& z) {
    std::vector<char> r(n, 0);
    for (uint32_t s = 0; s < n; ++s)
      for (uint32_t t : k.succ[s]) r[s] |= z[t];
    return r;
  };
  auto ax = [&](const std::vector<char>& z) {
    std::vector<char> r(n, 1);
    for (uint32_t s = 0; s < n; ++s)
      for (uint32_t t : k.succ[s]) r[s] &= z[t];
    return r;
  };
  auto iterate = [&](std::vector<char> z, const std::function<std::vector<char>(const std::vector<char>&)>& step) {
    for (;;) {
      auto next = step(z);
      if (next == z) return z;
      z = std::move(next);
    }
  };
  switch (f.op) {
    case Op::True: return std::vector<char>(n, 1);
    case Op::False: return std::vector<char>(n, 0);
    case Op::Atom: {
      auto it = k.props.find(f.atom);
      return it == k.props.end() ? std::vector<char>(n, 0) : it->second;
    }
    case Op::Not: {
      auto a = ctl_sat(k, *f.l);
      for (auto& x : a) x = !x;
      return a;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto a = ctl_sat(k, *f.l), b = ctl_sat(k, *f.r);
      for (uint32_t s = 0; s < n; ++s)
        a[s] = f.op == Op::And ? (a[s] && b[s]) : f.op == Op::Or ? (a[s] || b[s]) : (!a[s] || b[s]);
      return a;
    }
    case Op::EX: return ex(ctl_sat(k, *f.l));
    case Op::AX: return ax(ctl_sat(k, *f.l));
    case Op::EF:
    case Op::EU: {
      auto a = f.op == Op::EF ? std::vector<char>(n, 1) : ctl_sat(k, *f.l);
      auto b = ctl_sat(k, f.op == Op::EF ? *f.l : *f.r);
      return iterate(std::vector<char>(n, 0), [&](const std::vector<char>& z) {
        auto e = ex(z);
        std::vector<char> r(n);
        for (uint32_t s = 0; s < n; ++s) r[s] = b[s] || (a[s] && e[s]);
        return r;
      });
    }
    case Op::AF:
    case Op::AU: {
      auto a = f.op == Op::AF ? std::vector<char>(n, 1) : ctl_sat(k, *f.l);
      auto b = ctl_sat(k, f.op == Op::AF ? *f.l : *f.r);
      return iterate(std::vector<char>(n, 0), [&](const std::vector<char>& z) {
        auto all = ax(z);
        std::vector<char> r(n);
        for (uint32_t s = 0; s < n; ++s) r[s] = b[s] || (a[s] && !k.deadlock(s) && all[s]);
        return r;
      });
    }
    case Op::EG:
    case Op::AG: {
      auto a = ctl_sat(k, *f.l);
      if (f.op == Op::EG)
        return iterate(std::vector<char>(n, 1), [&](const std::vector<char>& z) {
          auto e = ex(z);
          std::vector<char> r(n);
          for (uint32_t s = 0; s < n; ++s) r[s] = a[s] && (k.deadlock(s) || e[s]);
          return r;
        });
      return iterate(std::vector<char>(n, 1), [&](const std::vector<char>& z) {
        auto all = ax(z);
        std::vector<char> r(n);
        for (uint32_t s = 0; s < n; ++s) r[s] = a[s] && all[s];
        return r;
      });
    }
  }
  return std::vector<char>(n, 0);
}

inline ctl::Kripke random_kripke(std::mt19937_64& rng, uint32_t states, const std::vector<std::string>& atoms) {
  ctl::Kripke k;
  k.num_states = states;
  k.succ.resize(states);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_int_distribution<uint32_t> pick(0, states - 1);
  std::bernoulli_distribution coin(0.4);
  for (uint32_t s = 0; s < states; ++s) {
    int d = deg(rng);
    for (int i = 0; i < d; ++i) k.succ[s].push_back(pick(rng));
    std::sort(k.succ[s].begin(), k.succ[s].end());
    k.succ[s].erase(std::unique(k.succ[s].begin(), k.succ[s].end()), k.succ[s].end());
  }
  for (const auto& a : atoms) {
    auto& v = k.props[a];
    v.resize(states);
    for (auto& x : v) x = coin(rng);
  }
  k.initial = {0};
  return k;
}

inline ctl::FormulaPtr random_formula(std::mt19937_64& rng, int depth, const std::vector<std::string>& atoms) {
  using namespace ctl;
  std::uniform_int_distribution<int> kind(0, depth == 0 ? 1 : 15);
  std::uniform_int_distribution<std::size_t> which(0, atoms.size() - 1);
  auto sub = [&] { return random_formula(rng, depth - 1, atoms); };
  switch (kind(rng)) {
    case 0: return atom(atoms[which(rng)]);
    case 1: return std::bernoulli_distribution(0.5)(rng) ? tt() : ff();
    case 2: return lnot(sub());
    case 3: return land(sub(), sub());
    case 4: return lor(sub(), sub());
    case 5: return implies(sub(), sub());
    case 6: return EX(sub());
    case 7: return AX(sub());
    case 8: return EF(sub());
    case 9: return AF(sub());
    case 10: return EG(sub());
    case 11: return AG(sub());
    case 12: return EU(sub(), sub());
    case 13: return AU(sub(), sub());
    default: return atom(atoms[which(rng)]);
  }
}

}  // namespace awn::oracle
