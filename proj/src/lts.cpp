#include "awn/lts.hpp"

#include <sstream>

namespace awn {

uint32_t Lts::label_id(const Label& l) {
  auto [it, fresh] = label_index_.try_emplace(l, static_cast<uint32_t>(labels.size()));
  if (fresh) labels.push_back(l);
  return it->second;
}

uint32_t Lts::shown_id(const Label& l) {
  auto [it, fresh] = shown_index_.try_emplace(l, static_cast<uint32_t>(shown_labels.size()));
  if (fresh) shown_labels.push_back(l);
  return it->second;
}

void Lts::finalise() {
  std::stable_sort(edges.begin(), edges.end(), [](const LtsEdge& a, const LtsEdge& b) { return a.src < b.src; });
  offsets_.assign(num_states + 1, 0);
  for (const auto& e : edges) ++offsets_[e.src + 1];
  for (uint32_t s = 0; s < num_states; ++s) offsets_[s + 1] += offsets_[s];
}

std::string Lts::dump() const {
  std::ostringstream os;
  os << "states " << num_states << " transitions " << edges.size() << " initial " << initial << " truncated "
     << (truncated ? "true" : "false") << "\n";
  for (const auto& e : edges) os << e.src << "\t" << shown_labels[e.shown].str() << "\t" << e.dst << "\n";
  return os.str();
}

}  // namespace awn
