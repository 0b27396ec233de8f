#include "catalloc/picking_order.hpp"

#include <algorithm>
#include <sstream>

#include "catalloc/errors.hpp"

namespace catalloc {
namespace {

void check_agent_permutation(const std::vector<Agent>& agent_order) {
  const int n = static_cast<int>(agent_order.size());
  if (n < 1) throw ValidationError("agent order is empty");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (Agent j : agent_order) {
    if (j < 1 || j > n) {
      throw ValidationError("agent order names agent " + std::to_string(j) + ", expected 1.." +
                            std::to_string(n));
    }
    if (seen[static_cast<std::size_t>(j)]) {
      throw ValidationError("agent order lists agent " + std::to_string(j) + " twice");
    }
    seen[static_cast<std::size_t>(j)] = true;
  }
}

}  // namespace

OrderAnalytics compute_analytics(const DomainShape& shape, std::span<const Pick> rounds) {
  const int n = shape.agent_count();
  const int p = shape.category_count();
  OrderAnalytics out;
  out.agents.resize(static_cast<std::size_t>(n));
  for (auto& a : out.agents) {
    a.slack.assign(static_cast<std::size_t>(p), 0);
    a.pick_round.assign(static_cast<std::size_t>(p), 0);
  }

  std::vector<int> picked_so_far(static_cast<std::size_t>(p), 0);
  for (std::size_t idx = 0; idx < rounds.size(); ++idx) {
    const Pick& pk = rounds[idx];
    auto& a = out.agents[static_cast<std::size_t>(pk.agent - 1)];
    auto& done = picked_so_far[static_cast<std::size_t>(pk.category - 1)];
    a.suborder.push_back(pk.category);
    a.slack[static_cast<std::size_t>(pk.category - 1)] = n - done;
    a.pick_round[static_cast<std::size_t>(pk.category - 1)] = static_cast<int>(idx) + 1;
    ++done;
  }

  // Does anyone other than j pick category c strictly between rounds lo and hi?
  auto interrupted = [&](Category c, int lo, int hi) {
    for (int t = lo + 1; t < hi; ++t) {
      if (rounds[static_cast<std::size_t>(t - 1)].category == c) return true;
    }
    return false;
  };

  for (auto& a : out.agents) {
    int chosen = p;
    for (int k = 1; k <= p; ++k) {
      const int start = a.round_of(a.suborder_at(k));
      bool clean = true;
      for (int l = k + 1; l <= p && clean; ++l) {
        const Category c = a.suborder_at(l);
        clean = !interrupted(c, start, a.round_of(c));
      }
      if (clean) {
        chosen = k;
        break;
      }
    }
    a.uninterrupted_index = chosen;
  }
  return out;
}

PickingOrder::PickingOrder(DomainShape shape, std::vector<Pick> rounds)
    : shape_(std::move(shape)), rounds_(std::move(rounds)) {
  const int n = shape_.agent_count();
  const int p = shape_.category_count();
  if (rounds_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(p)) {
    throw ValidationError("picking order has " + std::to_string(rounds_.size()) + " rounds, expected n*p = " +
                          std::to_string(n * p));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n * p), false);
  for (std::size_t t = 0; t < rounds_.size(); ++t) {
    const Pick& pk = rounds_[t];
    if (pk.agent < 1 || pk.agent > n || pk.category < 1 || pk.category > p) {
      throw ValidationError("round " + std::to_string(t + 1) + ": pair (" + std::to_string(pk.agent) + "," +
                            std::to_string(pk.category) + ") outside {1.." + std::to_string(n) + "}x{1.." +
                            std::to_string(p) + "}");
    }
    const auto slot = static_cast<std::size_t>((pk.agent - 1) * p + (pk.category - 1));
    if (seen[slot]) {
      throw ValidationError("round " + std::to_string(t + 1) + ": pair (" + std::to_string(pk.agent) + "," +
                            std::to_string(pk.category) + ") appears twice");
    }
    seen[slot] = true;
  }
  analytics_ = compute_analytics(shape_, rounds_);
}

std::string PickingOrder::to_string() const {
  std::ostringstream out;
  for (const Pick& pk : rounds_) out << '(' << pk.agent << ',' << pk.category << ')';
  return out.str();
}

PickingOrder serial_dictatorship_order(const std::vector<Agent>& agent_order, int categories) {
  check_agent_permutation(agent_order);
  DomainShape shape(static_cast<int>(agent_order.size()), categories);
  std::vector<Pick> rounds;
  for (Agent j : agent_order) {
    for (Category c = 1; c <= categories; ++c) rounds.push_back({j, c});
  }
  return PickingOrder(shape, std::move(rounds));
}

PickingOrder balanced_order(const std::vector<Agent>& agent_order, int categories) {
  check_agent_permutation(agent_order);
  if (categories < 2 || categories % 2 != 0) {
    throw UnsupportedError("balanced order needs an even number of categories, got " +
                           std::to_string(categories));
  }
  DomainShape shape(static_cast<int>(agent_order.size()), categories);
  std::vector<Pick> rounds;
  for (Category c = 1; c <= categories; ++c) {
    if (c % 2 == 1) {
      for (Agent j : agent_order) rounds.push_back({j, c});
    } else {
      for (auto it = agent_order.rbegin(); it != agent_order.rend(); ++it) rounds.push_back({*it, c});
    }
  }
  return PickingOrder(shape, std::move(rounds));
}

PickingOrder interrupter_order(int agents, int categories) {
  if (agents < 2) throw UnsupportedError("interrupter order needs at least two agents");
  if (categories < 2 || categories % 2 != 0) {
    throw UnsupportedError("interrupter order needs an even number of categories, got " +
                           std::to_string(categories));
  }
  std::vector<Agent> first(static_cast<std::size_t>(agents - 1));
  for (int j = 0; j < agents - 1; ++j) first[static_cast<std::size_t>(j)] = j + 1;

  std::vector<Pick> rounds;
  for (Category c = 1; c <= categories; ++c) {
    if (c % 2 == 1) {
      for (Agent j : first) rounds.push_back({j, c});
    } else {
      for (auto it = first.rbegin(); it != first.rend(); ++it) rounds.push_back({*it, c});
    }
  }
  std::vector<Pick> block;
  for (Category c = 1; c <= categories; ++c) block.push_back({agents, c});
  rounds.insert(rounds.end() - (agents - 1), block.begin(), block.end());
  return PickingOrder(DomainShape(agents, categories), std::move(rounds));
}

const OrderAnalytics& analyze_order(const PickingOrder& order) { return order.analytics(); }

RemainingItemSets::RemainingItemSets(const PickingOrder& order) : rounds_(order.round_count()) {
  const int n = order.shape().agent_count();
  const int p = order.shape().category_count();
  sets_.resize(static_cast<std::size_t>(p));
  for (Category c = 1; c <= p; ++c) {
    auto& per_round = sets_[static_cast<std::size_t>(c - 1)];
    per_round.resize(static_cast<std::size_t>(rounds_) + 1);
    for (int t = 1; t <= rounds_ + 1; ++t) {
      auto& set = per_round[static_cast<std::size_t>(t - 1)];
      for (Agent q = 1; q <= n; ++q) {
        if (order.round_of(q, c) >= t) set.push_back(q);
      }
    }
  }
}

const std::vector<Item>& RemainingItemSets::at(Category c, int round) const {
  if (round < 1 || round > rounds_ + 1) throw ValidationError("round outside 1..np+1");
  return sets_.at(static_cast<std::size_t>(c - 1)).at(static_cast<std::size_t>(round - 1));
}

RemainingItemSets remaining_item_sets(const PickingOrder& order) { return RemainingItemSets(order); }

std::vector<Agent> category_pickers(const PickingOrder& order, Category c) {
  std::vector<Agent> pickers;
  for (const Pick& pk : order.rounds()) {
    if (pk.category == c) pickers.push_back(pk.agent);
  }
  return pickers;
}

Agent predecessor_in_category(const PickingOrder& order, Category c, Agent j) {
  const auto pickers = category_pickers(order, c);
  auto it = std::find(pickers.begin(), pickers.end(), j);
  if (it == pickers.end()) throw ValidationError("agent " + std::to_string(j) + " never picks category " + std::to_string(c));
  return it == pickers.begin() ? pickers.back() : *(it - 1);
}

}  // namespace catalloc
