#include "awn/bisim.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace awn {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<uint64_t>& v) const {
    std::size_t h = v.size();
    for (auto x : v) h = hash_combine(h, std::hash<uint64_t>{}(x));
    return h;
  }
};

// Adjacency over a common label numbering.
struct Graph {
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> out;  // (label, dst)
  std::vector<std::string> label_names;
};

void append(Graph& g, std::map<Label, uint32_t>& common, const Lts& lts, uint32_t offset) {
  std::vector<uint32_t> relabel(lts.labels.size());
  for (std::size_t i = 0; i < lts.labels.size(); ++i) {
    auto [it, fresh] = common.try_emplace(lts.labels[i], static_cast<uint32_t>(g.label_names.size()));
    if (fresh) g.label_names.push_back(lts.labels[i].str());
    relabel[i] = it->second;
  }
  g.out.resize(offset + lts.num_states);
  for (const auto& e : lts.edges) g.out[offset + e.src].push_back({relabel[e.label], offset + e.dst});
}

// One refinement round; returns the number of blocks.
uint32_t refine(const Graph& g, const std::vector<uint32_t>& prev, std::vector<uint32_t>& next) {
  std::unordered_map<std::vector<uint64_t>, uint32_t, VecHash> ids;
  next.assign(prev.size(), 0);
  std::vector<uint64_t> sig;
  for (std::size_t s = 0; s < prev.size(); ++s) {
    sig.clear();
    for (auto [l, d] : g.out[s]) sig.push_back((uint64_t(l) << 32) | prev[d]);
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    sig.insert(sig.begin(), prev[s]);
    auto [it, fresh] = ids.try_emplace(sig, static_cast<uint32_t>(ids.size()));
    next[s] = it->second;
  }
  return static_cast<uint32_t>(ids.size());
}

std::vector<std::vector<uint32_t>> levels_until(const Graph& g, std::size_t n, uint32_t s, uint32_t t) {
  std::vector<std::vector<uint32_t>> levels{std::vector<uint32_t>(n, 0)};
  uint32_t count = 1;
  for (;;) {
    std::vector<uint32_t> next;
    uint32_t c = refine(g, levels.back(), next);
    levels.push_back(std::move(next));
    if (levels.back()[s] != levels.back()[t] || c == count) break;
    count = c;
  }
  return levels;
}

class Witness {
 public:
  Witness(const Graph& g, const std::vector<std::vector<uint32_t>>& levels) : g_(g), levels_(levels) {}

  // First level at which s and t are in different blocks.
  std::size_t split_level(uint32_t s, uint32_t t) const {
    for (std::size_t k = 0; k < levels_.size(); ++k)
      if (levels_[k][s] != levels_[k][t]) return k;
    return levels_.size();
  }

  // Formula true at s and false at t; `trace` follows the first diamond chain.
  std::string formula(uint32_t s, uint32_t t, std::vector<std::string>* trace) {
    std::size_t k = split_level(s, t);
    const auto& prev = levels_[k - 1];
    if (auto f = diamond(s, t, prev, trace)) return *f;
    return "!" + *diamond(t, s, prev, trace);
  }

 private:
  std::optional<std::string> diamond(uint32_t s, uint32_t t, const std::vector<uint32_t>& prev,
                                     std::vector<std::string>* trace) {
    for (auto [l, sd] : g_.out[s]) {
      bool matched = false;
      std::vector<uint32_t> rivals;
      for (auto [l2, td] : g_.out[t]) {
        if (l2 != l) continue;
        if (prev[td] == prev[sd]) {
          matched = true;
          break;
        }
        rivals.push_back(td);
      }
      if (matched) continue;
      if (trace) trace->push_back(g_.label_names[l]);
      std::sort(rivals.begin(), rivals.end());
      rivals.erase(std::unique(rivals.begin(), rivals.end()), rivals.end());
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < rivals.size(); ++i) {
        std::string f = formula(sd, rivals[i], i == 0 ? trace : nullptr);
        if (std::find(parts.begin(), parts.end(), f) == parts.end()) parts.push_back(std::move(f));
      }
      std::string body = "tt";
      if (!parts.empty()) {
        body = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) body += " & " + parts[i];
        if (parts.size() > 1) body = "(" + body + ")";
      }
      return "<" + g_.label_names[l] + ">" + body;
    }
    return std::nullopt;
  }

  const Graph& g_;
  const std::vector<std::vector<uint32_t>>& levels_;
};

}  // namespace

std::vector<uint32_t> bisim_classes(const Lts& lts) {
  if (lts.truncated) throw std::invalid_argument("bisimulation needs a complete LTS");
  Graph g;
  std::map<Label, uint32_t> common;
  append(g, common, lts, 0);
  std::vector<uint32_t> cur(lts.num_states, 0), next;
  uint32_t count = lts.num_states ? 1 : 0;
  for (;;) {
    uint32_t c = refine(g, cur, next);
    cur.swap(next);
    if (c == count) break;
    count = c;
  }
  return cur;
}

BisimResult bisimilar(const Lts& a, const Lts& b) {
  if (a.truncated || b.truncated) throw std::invalid_argument("bisimulation needs a complete LTS");
  Graph g;
  std::map<Label, uint32_t> common;
  append(g, common, a, 0);
  append(g, common, b, a.num_states);
  const std::size_t n = std::size_t(a.num_states) + b.num_states;
  const uint32_t s = a.initial, t = a.num_states + b.initial;

  std::vector<uint32_t> cur(n, 0), next;
  uint32_t count = 1;
  for (;;) {
    uint32_t c = refine(g, cur, next);
    cur.swap(next);
    if (c == count) break;
    count = c;
  }
  BisimResult r;
  r.classes = count;
  r.equivalent = cur[s] == cur[t];
  if (!r.equivalent) {
    auto levels = levels_until(g, n, s, t);
    Witness w(g, levels);
    r.formula = w.formula(s, t, &r.trace);
  }
  return r;
}

}  // namespace awn
