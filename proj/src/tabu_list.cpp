#include "portsel/tabu_list.hpp"

#include <algorithm>
#include <stdexcept>

namespace portsel {

void TabuList::insert(const Move& m, long now, int tenure) {
  if (tenure < 1) throw std::invalid_argument("tabu tenure must be positive");
  entries_.push_back({m, now + tenure});
}

bool TabuList::is_tabu(const Move& m, long now) const {
  for (const auto& e : entries_)
    if (e.expiry >= now && e.move.index() == m.index() && is_inverse(e.move, m)) return true;
  return false;
}

std::optional<long> TabuList::blocked_until(const Move& m, long now) const {
  std::optional<long> until;
  for (const auto& e : entries_)
    if (e.expiry >= now && e.move.index() == m.index() && is_inverse(e.move, m))
      until = std::max(until.value_or(e.expiry), e.expiry);
  return until;
}

void TabuList::purge(long now) {
  std::erase_if(entries_, [now](const Entry& e) { return e.expiry < now; });
}

}  // namespace portsel
