#pragma once

// Picking orders over (agent, category) pairs and the per-agent quantities
// derived from them:
//   suborder             categories in the order the agent picks them
//   slack(c)             items of category c still available when the agent
//                        picks there (1 + number of later pickers in c)
//   uninterrupted_index  first position in the suborder from which nobody
//                        else picks any of the agent's remaining categories
//                        before she does

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "catalloc/domain.hpp"

namespace catalloc {

struct Pick {
  Agent agent = 0;
  Category category = 0;

  friend auto operator<=>(const Pick&, const Pick&) = default;
};

struct AgentAnalytics {
  std::vector<Category> suborder;  // length p
  std::vector<int> slack;          // indexed by category - 1
  std::vector<int> pick_round;     // indexed by category - 1, 1-based rounds
  int uninterrupted_index = 1;     // 1..p, a position in `suborder`

  Category suborder_at(int position) const { return suborder.at(static_cast<std::size_t>(position - 1)); }
  int slack_in(Category c) const { return slack.at(static_cast<std::size_t>(c - 1)); }
  int round_of(Category c) const { return pick_round.at(static_cast<std::size_t>(c - 1)); }
};

struct OrderAnalytics {
  std::vector<AgentAnalytics> agents;

  const AgentAnalytics& of(Agent j) const { return agents.at(static_cast<std::size_t>(j - 1)); }
};

class PickingOrder {
 public:
  // Throws ValidationError unless `rounds` lists every (agent, category)
  // pair exactly once.
  PickingOrder(DomainShape shape, std::vector<Pick> rounds);

  const DomainShape& shape() const noexcept { return shape_; }
  std::span<const Pick> rounds() const noexcept { return rounds_; }
  int round_count() const noexcept { return static_cast<int>(rounds_.size()); }
  const Pick& at_round(int t) const { return rounds_.at(static_cast<std::size_t>(t - 1)); }
  int round_of(Agent j, Category c) const { return analytics_.of(j).round_of(c); }
  const OrderAnalytics& analytics() const noexcept { return analytics_; }

  std::string to_string() const;  // "(1,1)(2,1)..."

  friend bool operator==(const PickingOrder& a, const PickingOrder& b) {
    return a.shape_ == b.shape_ && a.rounds_ == b.rounds_;
  }

 private:
  DomainShape shape_;
  std::vector<Pick> rounds_;
  OrderAnalytics analytics_;
};

// Dictator j_1 picks categories 1..p, then j_2, and so on.
PickingOrder serial_dictatorship_order(const std::vector<Agent>& agent_order, int categories);

// Phase c covers category c; odd phases follow agent_order, even phases
// its reverse. Requires an even number of categories.
PickingOrder balanced_order(const std::vector<Agent>& agent_order, int categories);

// Agents 1..n-1 follow the balanced pattern; agent n picks all p
// categories consecutively right before the final n-1 rounds.
PickingOrder interrupter_order(int agents, int categories);

const OrderAnalytics& analyze_order(const PickingOrder& order);

// Computes the analytics from scratch (PickingOrder caches the result).
OrderAnalytics compute_analytics(const DomainShape& shape, std::span<const Pick> rounds);

// Sets of agents whose pick in category c happens at round >= t. Under a run
// where every agent takes her own label, these are the unallocated items.
class RemainingItemSets {
 public:
  explicit RemainingItemSets(const PickingOrder& order);

  // Sorted; t ranges over 1..np+1.
  const std::vector<Item>& at(Category c, int round) const;
  int round_count() const noexcept { return rounds_; }

 private:
  int rounds_;
  std::vector<std::vector<std::vector<Item>>> sets_;  // [category][round]
};

RemainingItemSets remaining_item_sets(const PickingOrder& order);

// Agents in the order they pick from category c.
std::vector<Agent> category_pickers(const PickingOrder& order, Category c);

// Previous picker in category c; the first picker's predecessor is the last.
Agent predecessor_in_category(const PickingOrder& order, Category c, Agent j);

}  // namespace catalloc
