#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace awn {

// Interned identifier. Ids are handed out in first-seen order and never
// reused, so orderings based on ids are deterministic for a fixed input.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name);
  // Rebuilds a symbol from an id previously obtained via id().
  static Symbol from_id(uint32_t id) { return Symbol(id); }

  const std::string& str() const;
  uint32_t id() const { return id_; }
  bool valid() const { return id_ != 0; }

  friend bool operator==(Symbol, Symbol) = default;
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(uint32_t id) : id_(id) {}
  uint32_t id_ = 0;
};

inline Symbol operator""_sym(const char* s, std::size_t n) {
  return Symbol::intern(std::string_view(s, n));
}

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace awn

template <>
struct std::hash<awn::Symbol> {
  std::size_t operator()(awn::Symbol s) const noexcept { return std::hash<uint32_t>()(s.id()); }
};
