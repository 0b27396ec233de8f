#pragma once

// Categorial sequential allocation: the picking order is broadcast, then in
// each round the active agent takes an available item from the designated
// category and the pick is broadcast. Messages are counted, not sent.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catalloc/domain.hpp"
#include "catalloc/picking_order.hpp"

namespace catalloc {

enum class BehaviorKind { kOptimistic, kPessimistic, kScripted };

struct Behavior {
  BehaviorKind kind = BehaviorKind::kOptimistic;
  // For kScripted: one item per category, in the agent's own pick order.
  std::vector<Item> script;

  static Behavior optimistic() { return {BehaviorKind::kOptimistic, {}}; }
  static Behavior pessimistic() { return {BehaviorKind::kPessimistic, {}}; }
  static Behavior scripted(std::vector<Item> items) { return {BehaviorKind::kScripted, std::move(items)}; }

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

using BehaviorAssignment = std::vector<Behavior>;

BehaviorAssignment uniform_behaviors(int agents, BehaviorKind kind);
std::string behavior_tag(BehaviorKind kind);  // "opt", "pess", "script"

// Availability seen by the active agent: available[c-1][x] for items 1..n,
// and her own earlier picks (0 = not yet picked) indexed by category - 1.
struct PickContext {
  const std::vector<std::vector<bool>>& available;
  const std::vector<Item>& own_picks;
};

// Item of category c in the best bundle whose picked components match her
// earlier picks and whose other components are all still available.
Item optimistic_choice(const Preference& pref, const PickContext& ctx, Category c);

// Per candidate item of category c: the worst bundle compatible with earlier
// picks, that item, and currently available items elsewhere.
struct WorstCase {
  Item item = 0;
  Bundle worst;
  int worst_rank = 0;
};
std::vector<WorstCase> pessimistic_worst_cases(const Preference& pref, const PickContext& ctx, Category c);

// The candidate whose worst case is best.
Item pessimistic_choice(const Preference& pref, const PickContext& ctx, Category c);

struct TraceRound {
  int round = 0;
  Pick pick;
  Item item = 0;
  std::vector<std::vector<Item>> available;  // per category, before the pick
  std::optional<Bundle> optimistic_target;   // optimistic picks only
  std::vector<WorstCase> worst_cases;        // pessimistic picks only
};

struct ExecutionTrace {
  int agents = 0;
  int categories = 0;
  std::vector<TraceRound> rounds;
};

struct CsamResult {
  Allocation allocation;
  ExecutionTrace trace;
};

// Throws ExecutionError naming the round when a scripted pick is unavailable,
// ValidationError when shapes or behavior counts disagree.
CsamResult run_csam(const PickingOrder& order, const Profile& profile, const BehaviorAssignment& behaviors);

// Each dictator takes her best bundle disjoint from earlier picks.
Allocation direct_serial_dictatorship(const std::vector<Agent>& agent_order, const Profile& profile);

// One broadcast of the order plus one per round, each reaching n agents.
std::uint64_t message_count(const ExecutionTrace& trace);

}  // namespace catalloc
