#include "catalloc/spne.hpp"

#include <limits>
#include <string>
#include <unordered_map>

#include "catalloc/errors.hpp"

namespace catalloc {
namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return b > std::numeric_limits<std::uint64_t>::max() - a ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

struct Node {
  std::vector<BundleIndex> outcome;  // final bundle per agent
  Item choice = 0;
};

class Solver {
 public:
  Solver(const PickingOrder& order, const Profile& profile) : order_(order), profile_(profile), shape_(order.shape()) {
    const auto n = static_cast<std::size_t>(shape_.agent_count());
    const auto p = static_cast<std::size_t>(shape_.category_count());
    // picks_[agent*p + category] holds the item, 0 while unpicked
    picks_.assign(n * p, 0);
    available_.assign(p, std::vector<bool>(n + 1, true));
  }

  const Node& solve(int round) {
    std::string key(picks_.begin(), picks_.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Node node;
    if (round > order_.round_count()) {
      node.outcome = final_bundles();
    } else {
      const Pick pk = order_.at_round(round);
      const auto p = static_cast<std::size_t>(shape_.category_count());
      const auto slot = static_cast<std::size_t>(pk.agent - 1) * p + static_cast<std::size_t>(pk.category - 1);
      auto& mask = available_[static_cast<std::size_t>(pk.category - 1)];
      const Preference& pref = profile_.of(pk.agent);
      int best_rank = std::numeric_limits<int>::max();
      for (Item x = 1; x <= shape_.item_count(); ++x) {
        if (!mask[static_cast<std::size_t>(x)]) continue;
        mask[static_cast<std::size_t>(x)] = false;
        picks_[slot] = static_cast<char>(x);
        const Node& child = solve(round + 1);
        const int r = pref.rank(child.outcome[static_cast<std::size_t>(pk.agent - 1)]);
        if (r < best_rank) {
          best_rank = r;
          node.outcome = child.outcome;
          node.choice = x;
        }
        picks_[slot] = 0;
        mask[static_cast<std::size_t>(x)] = true;
      }
    }
    return memo_.emplace(std::move(key), std::move(node)).first->second;
  }

  std::vector<SpneStep> replay_path() {
    std::vector<SpneStep> path;
    const auto p = static_cast<std::size_t>(shape_.category_count());
    for (int t = 1; t <= order_.round_count(); ++t) {
      const Pick pk = order_.at_round(t);
      const Node& node = solve(t);
      path.push_back({t, pk, node.choice});
      const auto slot = static_cast<std::size_t>(pk.agent - 1) * p + static_cast<std::size_t>(pk.category - 1);
      picks_[slot] = static_cast<char>(node.choice);
      available_[static_cast<std::size_t>(pk.category - 1)][static_cast<std::size_t>(node.choice)] = false;
    }
    return path;
  }

  std::uint64_t memo_size() const { return memo_.size(); }

 private:
  std::vector<BundleIndex> final_bundles() const {
    const int n = shape_.agent_count();
    const int p = shape_.category_count();
    std::vector<BundleIndex> out(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
      BundleIndex b = 0;
      for (Category c = 1; c <= p; ++c) {
        const auto x = static_cast<BundleIndex>(picks_[static_cast<std::size_t>(j * p + c - 1)]);
        b += (x - 1) * shape_.place_value(c);
      }
      out[static_cast<std::size_t>(j)] = b;
    }
    return out;
  }

  const PickingOrder& order_;
  const Profile& profile_;
  const DomainShape& shape_;
  std::vector<char> picks_;
  std::vector<std::vector<bool>> available_;
  std::unordered_map<std::string, Node> memo_;
};

}  // namespace

std::uint64_t state_space_size(const PickingOrder& order) {
  const int n = order.shape().agent_count();
  const int p = order.shape().category_count();
  std::vector<int> picked(static_cast<std::size_t>(p), 0);
  std::uint64_t total = 0;
  for (int t = 1; t <= order.round_count() + 1; ++t) {
    std::uint64_t configs = 1;
    for (int c = 0; c < p; ++c) configs = saturating_mul(configs, binomial(n, picked[static_cast<std::size_t>(c)]));
    total = saturating_add(total, configs);
    if (t <= order.round_count()) ++picked[static_cast<std::size_t>(order.at_round(t).category - 1)];
  }
  return total;
}

SpneResult solve_spne(const PickingOrder& order, const Profile& profile, const SpneOptions& options) {
  if (!(order.shape() == profile.shape())) throw ValidationError("order and profile are over different domain shapes");
  if (order.shape().item_count() > std::numeric_limits<char>::max()) {
    throw CapacityError("subgame-perfect solver supports at most 127 items per category");
  }
  const std::uint64_t states = state_space_size(order);
  if (states > options.state_cap) {
    throw CapacityError("game has " + std::to_string(states) + " availability states, above the cap of " +
                        std::to_string(options.state_cap));
  }
  // The cap is checked against availability states only; the memo itself is
  // keyed by partial picks and may hold more entries than that count.
  Solver solver(order, profile);
  const Node root = solver.solve(1);

  SpneResult result;
  std::vector<Bundle> bundles;
  for (BundleIndex b : root.outcome) bundles.push_back(decode_bundle(order.shape(), b));
  result.allocation = Allocation(std::move(bundles));
  if (options.record_path) result.path = solver.replay_path();
  result.memo_states = solver.memo_size();
  return result;
}

}  // namespace catalloc
