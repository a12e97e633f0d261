#include "awn/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace awn {
namespace {

struct SymbolTable {
  std::shared_mutex mu;
  std::deque<std::string> names{std::string()};
  std::unordered_map<std::string, uint32_t> ids;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& t = table();
  {
    std::shared_lock lock(t.mu);
    auto it = t.ids.find(std::string(name));
    if (it != t.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mu);
  auto [it, inserted] = t.ids.try_emplace(std::string(name), static_cast<uint32_t>(t.names.size()));
  if (inserted) t.names.emplace_back(name);
  return Symbol(it->second);
}

const std::string& Symbol::str() const {
  auto& t = table();
  std::shared_lock lock(t.mu);
  // deque never relocates existing elements, so the reference outlives the lock
  return t.names[id_];
}

}  // namespace awn
