#pragma once

// Witness profiles on which the worst-case bounds are attained.

#include <vector>

#include "catalloc/domain.hpp"
#include "catalloc/mechanism.hpp"
#include "catalloc/picking_order.hpp"

namespace catalloc {

struct WorstCaseWitness {
  Profile profile;
  Allocation realized;                // the run's outcome: agent j gets (j,...,j)
  std::vector<int> realized_ranks;    // equal to the per-agent bounds
  Allocation near_optimal;            // n-1 agents at rank 1, one at rank <= 2
  std::vector<int> near_optimal_ranks;
};

// Profiles hold n * n^p ranks; larger requests are refused (CapacityError).
inline constexpr std::size_t kMaxWitnessEntries = std::size_t{1} << 24;

// Builds a profile on which every optimistic/pessimistic agent ends with a
// bundle whose rank equals her worst-case bound, and replays the mechanism to
// confirm it. Throws UnsupportedError for scripted behaviors and
// ConstructionError if the replay disagrees (an internal bug).
WorstCaseWitness construct_worst_case(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors);

Profile worst_case_profile(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors);

// Agent j receives her own label everywhere except in the first-picked
// category, where she receives the label of her predecessor there.
Allocation near_optimal_allocation(const PickingOrder& order);

// Two strategic agents: a profile whose subgame-perfect outcome gives each
// agent rank n^p + 1 - prod_c slack(c). Built by peeling off the category of
// the first round. Throws UnsupportedError unless n = 2.
Profile strategic_worst_profile(const PickingOrder& order);

}  // namespace catalloc
