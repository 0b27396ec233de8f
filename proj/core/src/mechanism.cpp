#include "catalloc/mechanism.hpp"

#include <algorithm>
#include <cassert>

#include "catalloc/errors.hpp"

namespace catalloc {
namespace {

// Bundle b is reachable: matches own picks where made, available elsewhere.
bool reachable(const DomainShape& shape, BundleIndex b, const PickContext& ctx) {
  for (Category c = 1; c <= shape.category_count(); ++c) {
    const Item x = shape.item_of(b, c);
    const Item own = ctx.own_picks[static_cast<std::size_t>(c - 1)];
    if (own != 0) {
      if (x != own) return false;
    } else if (!ctx.available[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(x)]) {
      return false;
    }
  }
  return true;
}

std::vector<Item> items_available(const std::vector<bool>& mask) {
  std::vector<Item> out;
  for (std::size_t x = 1; x < mask.size(); ++x) {
    if (mask[x]) out.push_back(static_cast<Item>(x));
  }
  return out;
}

void check_pick_context(const Preference& pref, const PickContext& ctx, Category c) {
  const auto& shape = pref.shape();
  if (c < 1 || c > shape.category_count()) throw ValidationError("category out of range");
  if (ctx.own_picks[static_cast<std::size_t>(c - 1)] != 0) {
    throw ValidationError("agent already picked from category " + std::to_string(c));
  }
}

}  // namespace

BehaviorAssignment uniform_behaviors(int agents, BehaviorKind kind) {
  return BehaviorAssignment(static_cast<std::size_t>(agents), Behavior{kind, {}});
}

std::string behavior_tag(BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::kOptimistic: return "opt";
    case BehaviorKind::kPessimistic: return "pess";
    case BehaviorKind::kScripted: return "script";
  }
  return "?";
}

Item optimistic_choice(const Preference& pref, const PickContext& ctx, Category c) {
  check_pick_context(pref, ctx, c);
  const auto& shape = pref.shape();
  for (BundleIndex b : pref.order()) {
    if (reachable(shape, b, ctx)) return shape.item_of(b, c);
  }
  throw ExecutionError("no available bundle (inconsistent availability)");
}

std::vector<WorstCase> pessimistic_worst_cases(const Preference& pref, const PickContext& ctx, Category c) {
  check_pick_context(pref, ctx, c);
  const auto& shape = pref.shape();
  const auto order = pref.order();
  std::vector<WorstCase> found;
  std::vector<bool> seen(static_cast<std::size_t>(shape.item_count()) + 1, false);
  const auto candidates = items_available(ctx.available[static_cast<std::size_t>(c - 1)]);
  // Scanning from the bottom, the first reachable bundle carrying item x is
  // the worst case of picking x.
  for (std::size_t pos = order.size(); pos-- > 0 && found.size() < candidates.size();) {
    const BundleIndex b = order[pos];
    const Item x = shape.item_of(b, c);
    if (seen[static_cast<std::size_t>(x)] || !reachable(shape, b, ctx)) continue;
    seen[static_cast<std::size_t>(x)] = true;
    found.push_back({x, decode_bundle(shape, b), static_cast<int>(pos) + 1});
  }
  std::sort(found.begin(), found.end(), [](const WorstCase& a, const WorstCase& b) { return a.item < b.item; });
  return found;
}

Item pessimistic_choice(const Preference& pref, const PickContext& ctx, Category c) {
  const auto cases = pessimistic_worst_cases(pref, ctx, c);
  if (cases.empty()) throw ExecutionError("no available item to pick");
  // Worst cases of distinct items are distinct bundles, so ranks never tie.
  auto best = std::min_element(cases.begin(), cases.end(),
                               [](const WorstCase& a, const WorstCase& b) { return a.worst_rank < b.worst_rank; });
  assert(std::count_if(cases.begin(), cases.end(),
                       [&](const WorstCase& w) { return w.worst_rank == best->worst_rank; }) == 1);
  return best->item;
}

CsamResult run_csam(const PickingOrder& order, const Profile& profile, const BehaviorAssignment& behaviors) {
  const auto& shape = order.shape();
  if (!(shape == profile.shape())) throw ValidationError("order and profile are over different domain shapes");
  const int n = shape.agent_count();
  const int p = shape.category_count();
  if (static_cast<int>(behaviors.size()) != n) {
    throw ValidationError("behavior assignment covers " + std::to_string(behaviors.size()) + " agents, expected " +
                          std::to_string(n));
  }
  for (Agent j = 1; j <= n; ++j) {
    const auto& beh = behaviors[static_cast<std::size_t>(j - 1)];
    if (beh.kind == BehaviorKind::kScripted && static_cast<int>(beh.script.size()) != p) {
      throw ValidationError("script of agent " + std::to_string(j) + " has " + std::to_string(beh.script.size()) +
                            " picks, expected " + std::to_string(p));
    }
  }

  std::vector<std::vector<bool>> available(static_cast<std::size_t>(p),
                                           std::vector<bool>(static_cast<std::size_t>(n) + 1, true));
  for (auto& mask : available) mask[0] = false;
  std::vector<std::vector<Item>> picks(static_cast<std::size_t>(n), std::vector<Item>(static_cast<std::size_t>(p), 0));
  std::vector<int> picks_made(static_cast<std::size_t>(n), 0);

  CsamResult result;
  result.trace.agents = n;
  result.trace.categories = p;
  result.trace.rounds.reserve(static_cast<std::size_t>(order.round_count()));

  for (int t = 1; t <= order.round_count(); ++t) {
    const Pick pk = order.at_round(t);
    const auto& beh = behaviors[static_cast<std::size_t>(pk.agent - 1)];
    auto& own = picks[static_cast<std::size_t>(pk.agent - 1)];
    const PickContext ctx{available, own};
    const Preference& pref = profile.of(pk.agent);

    TraceRound rec;
    rec.round = t;
    rec.pick = pk;
    for (const auto& mask : available) rec.available.push_back(items_available(mask));

    switch (beh.kind) {
      case BehaviorKind::kOptimistic: {
        rec.item = optimistic_choice(pref, ctx, pk.category);
        // The bundle the choice aims at, for replay and audit.
        for (BundleIndex b : pref.order()) {
          if (reachable(shape, b, ctx)) {
            rec.optimistic_target = decode_bundle(shape, b);
            break;
          }
        }
        break;
      }
      case BehaviorKind::kPessimistic: {
        rec.worst_cases = pessimistic_worst_cases(pref, ctx, pk.category);
        rec.item = pessimistic_choice(pref, ctx, pk.category);
        break;
      }
      case BehaviorKind::kScripted: {
        const Item x = beh.script[static_cast<std::size_t>(picks_made[static_cast<std::size_t>(pk.agent - 1)])];
        if (x < 1 || x > n || !available[static_cast<std::size_t>(pk.category - 1)][static_cast<std::size_t>(x)]) {
          throw ExecutionError("round " + std::to_string(t) + ": scripted pick of agent " + std::to_string(pk.agent) +
                               " (item " + std::to_string(x) + " of category " + std::to_string(pk.category) +
                               ") is not available");
        }
        rec.item = x;
        break;
      }
    }

    available[static_cast<std::size_t>(pk.category - 1)][static_cast<std::size_t>(rec.item)] = false;
    own[static_cast<std::size_t>(pk.category - 1)] = rec.item;
    ++picks_made[static_cast<std::size_t>(pk.agent - 1)];
    result.trace.rounds.push_back(std::move(rec));
  }

  std::vector<Bundle> bundles;
  bundles.reserve(static_cast<std::size_t>(n));
  for (auto& own : picks) bundles.emplace_back(std::move(own));
  result.allocation = Allocation(std::move(bundles));
  require_valid_allocation(shape, result.allocation);
  return result;
}

Allocation direct_serial_dictatorship(const std::vector<Agent>& agent_order, const Profile& profile) {
  const auto& shape = profile.shape();
  const int n = shape.agent_count();
  const int p = shape.category_count();
  if (static_cast<int>(agent_order.size()) != n) throw ValidationError("agent order must list every agent once");
  std::vector<bool> listed(static_cast<std::size_t>(n) + 1, false);
  for (Agent j : agent_order) {
    if (j < 1 || j > n || listed[static_cast<std::size_t>(j)]) {
      throw ValidationError("agent order is not a permutation of 1.." + std::to_string(n));
    }
    listed[static_cast<std::size_t>(j)] = true;
  }

  std::vector<std::vector<bool>> taken(static_cast<std::size_t>(p), std::vector<bool>(static_cast<std::size_t>(n) + 1, false));
  std::vector<Bundle> bundles(static_cast<std::size_t>(n));
  for (Agent j : agent_order) {
    for (BundleIndex b : profile.of(j).order()) {
      bool free = true;
      for (Category c = 1; c <= p && free; ++c) {
        free = !taken[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(shape.item_of(b, c))];
      }
      if (!free) continue;
      bundles[static_cast<std::size_t>(j - 1)] = decode_bundle(shape, b);
      for (Category c = 1; c <= p; ++c) {
        taken[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(shape.item_of(b, c))] = true;
      }
      break;
    }
  }
  return Allocation(std::move(bundles));
}

std::uint64_t message_count(const ExecutionTrace& trace) {
  const auto n = static_cast<std::uint64_t>(trace.agents);
  const auto p = static_cast<std::uint64_t>(trace.categories);
  return (1 + n * p) * n;
}

}  // namespace catalloc
