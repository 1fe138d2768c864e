#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "portsel/neighborhood.hpp"

namespace portsel {

/// Recently accepted moves, each kept for its own randomly drawn tenure.
/// A move is forbidden while it is the inverse of some live entry. An entry
/// inserted at iteration i with tenure t blocks iterations i+1 .. i+t.
class TabuList {
 public:
  struct Entry {
    Move move;
    long expiry;
  };

  void insert(const Move& m, long now, int tenure);

  bool is_tabu(const Move& m, long now) const;

  /// Last iteration at which `m` is still blocked, or nullopt if it is free.
  std::optional<long> blocked_until(const Move& m, long now) const;

  /// Drops entries that can no longer block anything at or after `now`.
  void purge(long now);

  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

inline bool is_tabu(const TabuList& list, const Move& m, long now) { return list.is_tabu(m, now); }

}  // namespace portsel
