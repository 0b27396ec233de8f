#pragma once

// Worst-case rank bounds for sequential allocation. Every bound is a
// function of the picking order alone; none depends on a profile.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catalloc/mechanism.hpp"
#include "catalloc/picking_order.hpp"

namespace catalloc {

// n^p + 1 - prod_{l >= K_j} slack(suborder_l)
long long optimistic_bound(const PickingOrder& order, Agent j);
// n^p - sum_l (slack(suborder_l) - 1)
long long pessimistic_bound(const PickingOrder& order, Agent j);
// n^p + 1 - prod_c slack(c); for agents that play the extensive-form game
long long strategic_bound(const PickingOrder& order, Agent j);

long long bound_for(const PickingOrder& order, Agent j, BehaviorKind kind);

struct AgentBound {
  BehaviorKind behavior = BehaviorKind::kOptimistic;
  long long bound = 0;
};

struct RankBoundReport {
  std::vector<AgentBound> agents;
  long long utilitarian = 0;  // sum of bounds
  long long egalitarian = 0;  // max of bounds
};

// Exact worst cases for optimistic/pessimistic mixes (the bounds are attained
// simultaneously on one profile). Throws UnsupportedError for scripted agents.
RankBoundReport worst_case_report(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors);

// Worst-case utilitarian rank of a serial dictatorship with optimistic
// agents: n(n^p + 1) - sum_j j^p.
long long sd_optimistic_utilitarian(int agents, int categories);

// An agent whose slack is 1 in every category from her uninterrupted index
// on; optimistic, she can end with her bottom bundle.
Agent all_optimistic_witness(const PickingOrder& order);

enum class Objective { kUtilitarian, kEgalitarian };

struct SearchMode {
  enum class Kind { kExhaustive, kRandom };
  Kind kind = Kind::kExhaustive;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1'000'000;  // max candidate orders examined

  static SearchMode exhaustive(std::uint64_t budget = 1'000'000) { return {Kind::kExhaustive, 0, budget}; }
  static SearchMode random(std::uint64_t seed, std::uint64_t budget) { return {Kind::kRandom, seed, budget}; }
};

struct SearchResult {
  PickingOrder order;
  long long score = 0;
  std::uint64_t evaluated = 0;  // orders scored (after symmetry pruning)
};

// Minimizes the chosen worst-case aggregate. Ties go to the lexicographically
// smallest round sequence. Exhaustive mode refuses (CapacityError) when
// (np)! exceeds the budget; it skips orders that are agent relabelings of
// another order among agents sharing a behavior.
SearchResult search_orders(int agents, int categories, const std::vector<BehaviorKind>& behaviors,
                           Objective objective, const SearchMode& mode);

long long objective_score(const RankBoundReport& report, Objective objective);

// Audit of the mixed optimistic/pessimistic interrupter construction: bounds
// derived from the order's analytics next to the closed forms claimed for it
// (n^p - np/2 for each of agents 1..n-1, n^p + 1 - 2^p for agent n).
struct InterrupterAudit {
  PickingOrder order;
  RankBoundReport derived;
  long long claimed_majority_bound = 0;
  long long claimed_interrupter_bound = 0;
  long long claimed_egalitarian = 0;
  long long balanced_pessimistic_egalitarian = 0;  // n^p - (n-1)p/2
  bool claim_matches = false;
  std::string note;
};
InterrupterAudit audit_interrupter_order(int agents, int categories);

namespace detail {
// Backward recursion over rounds accumulating each agent's slack product.
// Its value at round 1 must equal prod_c slack(c).
std::vector<long long> strategic_products_by_recursion(const PickingOrder& order);
}  // namespace detail

}  // namespace catalloc
