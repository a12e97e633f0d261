#include "awn/valuation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace awn {

Valuation::Valuation(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries_.size(); ++i)
    if (entries_[i].first == entries_[i - 1].first)
      throw std::invalid_argument("variable " + entries_[i].first.str() + " bound twice");
}

const Value* Valuation::get(Symbol var) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                             [](const Entry& e, Symbol s) { return e.first < s; });
  if (it == entries_.end() || it->first != var) return nullptr;
  return &it->second;
}

Valuation Valuation::set(Symbol var, Value v) const {
  Valuation out = *this;
  out.assign(var, std::move(v));
  return out;
}

void Valuation::assign(Symbol var, Value v) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                             [](const Entry& e, Symbol s) { return e.first < s; });
  if (it != entries_.end() && it->first == var)
    it->second = std::move(v);
  else
    entries_.insert(it, {var, std::move(v)});
}

bool Valuation::subset_of(const Valuation& other) const {
  for (const auto& [k, v] : entries_) {
    const Value* w = other.get(k);
    if (!w || !(*w == v)) return false;
  }
  return true;
}

std::size_t Valuation::hash() const {
  std::size_t h = 0x51ed;
  for (const auto& [k, v] : entries_) h = hash_combine(hash_combine(h, std::hash<Symbol>()(k)), v.hash());
  return h;
}

std::string Valuation::str() const {
  std::vector<const Entry*> sorted;
  for (const auto& e : entries_) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Entry* a, const Entry* b) { return a->first.str() < b->first.str(); });
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) os << ", ";
    os << sorted[i]->first.str() << " = " << sorted[i]->second.str();
  }
  os << "}";
  return os.str();
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  std::size_t n = std::min(a.entries_.size(), b.entries_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.entries_[i].first <=> b.entries_[i].first; c != 0) return c;
    if (auto c = a.entries_[i].second <=> b.entries_[i].second; c != 0) return c;
  }
  return a.entries_.size() <=> b.entries_.size();
}

}  // namespace awn
