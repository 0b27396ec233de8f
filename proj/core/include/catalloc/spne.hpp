#pragma once

// Subgame-perfect play of the extensive-form game a picking order induces
// when every agent is strategic with complete information.

#include <cstdint>
#include <vector>

#include "catalloc/domain.hpp"
#include "catalloc/picking_order.hpp"

namespace catalloc {

struct SpneOptions {
  std::uint64_t state_cap = 10'000'000;
  bool record_path = false;
};

struct SpneStep {
  int round = 0;
  Pick pick;
  Item item = 0;
};

struct SpneResult {
  Allocation allocation;
  std::vector<SpneStep> path;   // equilibrium play, when requested
  std::uint64_t memo_states = 0;
};

// Backward induction with memoization on (picks so far). Strict preferences
// make every decision unique. Refuses with CapacityError when the
// availability state count or the memo table exceeds `state_cap`.
SpneResult solve_spne(const PickingOrder& order, const Profile& profile, const SpneOptions& options = {});

// Number of distinct (round, available-item sets) configurations reachable
// under the order, summed over rounds 1..np+1. Saturates at UINT64_MAX.
std::uint64_t state_space_size(const PickingOrder& order);

}  // namespace catalloc
