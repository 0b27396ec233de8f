#include "catalloc/bounds.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "catalloc/combinatorics.hpp"
#include "catalloc/errors.hpp"

namespace catalloc {
namespace {

long long space_size(const PickingOrder& order) { return static_cast<long long>(order.shape().bundle_count()); }

}  // namespace

long long optimistic_bound(const PickingOrder& order, Agent j) {
  const auto& a = order.analytics().of(j);
  const int p = order.shape().category_count();
  long long tail = 1;
  for (int l = a.uninterrupted_index; l <= p; ++l) tail *= a.slack_in(a.suborder_at(l));
  return space_size(order) + 1 - tail;
}

long long pessimistic_bound(const PickingOrder& order, Agent j) {
  const auto& a = order.analytics().of(j);
  long long excess = 0;
  for (int k : a.slack) excess += k - 1;
  return space_size(order) - excess;
}

long long strategic_bound(const PickingOrder& order, Agent j) {
  const auto& a = order.analytics().of(j);
  long long product = 1;
  for (int k : a.slack) product *= k;
  return space_size(order) + 1 - product;
}

long long bound_for(const PickingOrder& order, Agent j, BehaviorKind kind) {
  switch (kind) {
    case BehaviorKind::kOptimistic: return optimistic_bound(order, j);
    case BehaviorKind::kPessimistic: return pessimistic_bound(order, j);
    case BehaviorKind::kScripted: break;
  }
  throw UnsupportedError("no worst-case bound for scripted agents");
}

RankBoundReport worst_case_report(const PickingOrder& order, const std::vector<BehaviorKind>& behaviors) {
  const int n = order.shape().agent_count();
  if (static_cast<int>(behaviors.size()) != n) {
    throw ValidationError("behaviors cover " + std::to_string(behaviors.size()) + " agents, expected " +
                          std::to_string(n));
  }
  RankBoundReport report;
  for (Agent j = 1; j <= n; ++j) {
    const BehaviorKind kind = behaviors[static_cast<std::size_t>(j - 1)];
    const long long b = bound_for(order, j, kind);
    report.agents.push_back({kind, b});
    report.utilitarian += b;
    report.egalitarian = std::max(report.egalitarian, b);
  }
  return report;
}

long long sd_optimistic_utilitarian(int agents, int categories) {
  const DomainShape shape(agents, categories);
  const auto m = static_cast<long long>(shape.bundle_count());
  long long powers = 0;
  for (int j = 1; j <= agents; ++j) powers += static_cast<long long>(checked_pow(static_cast<std::uint64_t>(j), static_cast<unsigned>(categories)).value());
  return static_cast<long long>(agents) * (m + 1) - powers;
}

Agent all_optimistic_witness(const PickingOrder& order) {
  const int n = order.shape().agent_count();
  const int p = order.shape().category_count();
  for (Agent j = 1; j <= n; ++j) {
    const auto& a = order.analytics().of(j);
    bool all_one = true;
    for (int l = a.uninterrupted_index; l <= p && all_one; ++l) all_one = a.slack_in(a.suborder_at(l)) == 1;
    if (all_one) return j;
  }
  throw ConstructionError("no agent with unit tail slack in order " + order.to_string());
}

long long objective_score(const RankBoundReport& report, Objective objective) {
  return objective == Objective::kUtilitarian ? report.utilitarian : report.egalitarian;
}

SearchResult search_orders(int agents, int categories, const std::vector<BehaviorKind>& behaviors,
                           Objective objective, const SearchMode& mode) {
  const DomainShape shape(agents, categories);
  if (static_cast<int>(behaviors.size()) != agents) {
    throw ValidationError("behaviors cover " + std::to_string(behaviors.size()) + " agents, expected " +
                          std::to_string(agents));
  }
  for (BehaviorKind kind : behaviors) {
    if (kind == BehaviorKind::kScripted) throw UnsupportedError("order search needs optimistic/pessimistic agents");
  }
  const int total = agents * categories;

  std::optional<PickingOrder> best;
  long long best_score = 0;
  std::uint64_t evaluated = 0;
  auto consider = [&](const std::vector<Pick>& rounds) {
    PickingOrder candidate(shape, rounds);
    const long long score = objective_score(worst_case_report(candidate, behaviors), objective);
    ++evaluated;
    const bool better = !best || score < best_score ||
                        (score == best_score && std::lexicographical_compare(rounds.begin(), rounds.end(),
                                                                             best->rounds().begin(),
                                                                             best->rounds().end()));
    if (better) {
      best = std::move(candidate);
      best_score = score;
    }
  };

  if (mode.kind == SearchMode::Kind::kExhaustive) {
    const auto count = checked_factorial(static_cast<std::uint64_t>(total));
    if (!count || *count > mode.budget) {
      throw CapacityError("exhaustive order search over (" + std::to_string(total) + ")! orders exceeds budget " +
                          std::to_string(mode.budget));
    }
    // Depth-first in lexicographic order. An agent may make her first
    // appearance only after every lower-labelled agent with the same behavior
    // has appeared, which keeps one representative per relabeling class.
    std::vector<Pick> rounds;
    rounds.reserve(static_cast<std::size_t>(total));
    std::vector<bool> used(static_cast<std::size_t>(total), false);
    std::vector<int> appearances(static_cast<std::size_t>(agents), 0);
    auto recurse = [&](auto&& self) -> void {
      if (static_cast<int>(rounds.size()) == total) {
        consider(rounds);
        return;
      }
      for (Agent j = 1; j <= agents; ++j) {
        if (appearances[static_cast<std::size_t>(j - 1)] == 0) {
          bool blocked = false;
          for (Agent lower = 1; lower < j && !blocked; ++lower) {
            blocked = behaviors[static_cast<std::size_t>(lower - 1)] == behaviors[static_cast<std::size_t>(j - 1)] &&
                      appearances[static_cast<std::size_t>(lower - 1)] == 0;
          }
          if (blocked) continue;
        }
        for (Category c = 1; c <= categories; ++c) {
          const auto slot = static_cast<std::size_t>((j - 1) * categories + (c - 1));
          if (used[slot]) continue;
          used[slot] = true;
          ++appearances[static_cast<std::size_t>(j - 1)];
          rounds.push_back({j, c});
          self(self);
          rounds.pop_back();
          --appearances[static_cast<std::size_t>(j - 1)];
          used[slot] = false;
        }
      }
    };
    recurse(recurse);
  } else {
    if (mode.budget == 0) throw ValidationError("random order search needs a positive budget");
    std::mt19937_64 rng(mode.seed);
    std::vector<Pick> rounds;
    for (Agent j = 1; j <= agents; ++j) {
      for (Category c = 1; c <= categories; ++c) rounds.push_back({j, c});
    }
    for (std::uint64_t s = 0; s < mode.budget; ++s) {
      std::shuffle(rounds.begin(), rounds.end(), rng);
      consider(rounds);
    }
  }
  return SearchResult{std::move(*best), best_score, evaluated};
}

InterrupterAudit audit_interrupter_order(int agents, int categories) {
  PickingOrder order = interrupter_order(agents, categories);
  std::vector<BehaviorKind> behaviors(static_cast<std::size_t>(agents), BehaviorKind::kOptimistic);
  behaviors.back() = BehaviorKind::kPessimistic;
  RankBoundReport derived = worst_case_report(order, behaviors);

  const auto m = static_cast<long long>(order.shape().bundle_count());
  const auto two_p = static_cast<long long>(checked_pow(2, static_cast<unsigned>(categories)).value());
  InterrupterAudit audit{std::move(order), std::move(derived), 0, 0, 0, 0, false, {}};
  audit.claimed_majority_bound = m + 1 - (1 + static_cast<long long>(agents) * categories / 2);
  audit.claimed_interrupter_bound = m + 1 - two_p;
  audit.claimed_egalitarian = std::max(audit.claimed_majority_bound, audit.claimed_interrupter_bound);
  audit.balanced_pessimistic_egalitarian = m - static_cast<long long>(agents - 1) * categories / 2;

  bool matches = true;
  for (Agent j = 1; j <= agents; ++j) {
    const long long claimed = j < agents ? audit.claimed_majority_bound : audit.claimed_interrupter_bound;
    matches = matches && audit.derived.agents[static_cast<std::size_t>(j - 1)].bound == claimed;
  }
  audit.claim_matches = matches;

  std::ostringstream note;
  note << "derived per-agent worst cases (";
  for (std::size_t j = 0; j < audit.derived.agents.size(); ++j) {
    note << (j ? "," : "") << audit.derived.agents[j].bound;
  }
  note << "), egalitarian " << audit.derived.egalitarian << "; claimed closed forms " << audit.claimed_majority_bound
       << " (agents 1.." << agents - 1 << ") and " << audit.claimed_interrupter_bound << " (agent " << agents << "): "
       << (matches ? "consistent" : "UNVERIFIED, the claimed values do not follow from the order");
  audit.note = note.str();
  return audit;
}

namespace detail {

std::vector<long long> strategic_products_by_recursion(const PickingOrder& order) {
  std::vector<long long> acc(static_cast<std::size_t>(order.shape().agent_count()), 1);
  for (int t = order.round_count(); t >= 1; --t) {
    const Pick pk = order.at_round(t);
    acc[static_cast<std::size_t>(pk.agent - 1)] *= order.analytics().of(pk.agent).slack_in(pk.category);
  }
  return acc;
}

}  // namespace detail
}  // namespace catalloc
