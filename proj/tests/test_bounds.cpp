#include <gtest/gtest.h>

#include <limits>

#include "catalloc/axioms.hpp"
#include "catalloc/bounds.hpp"
#include "catalloc/errors.hpp"
#include "support.hpp"

using namespace catalloc;
using namespace testing_support;

namespace {

long long power(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::vector<BehaviorKind> mix_from_mask(int n, unsigned mask) {
  std::vector<BehaviorKind> out;
  for (int j = 0; j < n; ++j) out.push_back((mask >> j) & 1u ? BehaviorKind::kPessimistic : BehaviorKind::kOptimistic);
  return out;
}

BehaviorAssignment to_assignment(const std::vector<BehaviorKind>& kinds) {
  BehaviorAssignment out;
  for (auto k : kinds) out.push_back(k == BehaviorKind::kOptimistic ? Behavior::optimistic() : Behavior::pessimistic());
  return out;
}

}  // namespace

TEST(Bounds, OptimisticFormula) {
  const PickingOrder interrupted = read_order(data_path("interrupted_order.json"));
  EXPECT_EQ(optimistic_bound(interrupted, 1), 9);
  const PickingOrder sd = read_order(data_path("sd_n3p3_order.json"));
  EXPECT_EQ(optimistic_bound(sd, 1), 1);
  EXPECT_EQ(optimistic_bound(sd, 2), 20);
  EXPECT_EQ(optimistic_bound(sd, 3), 27);
}

TEST(Bounds, PessimisticFormula) {
  const PickingOrder interrupted = read_order(data_path("interrupted_order.json"));
  EXPECT_EQ(pessimistic_bound(interrupted, 3), 7);
  for (int n = 1; n <= 4; ++n) {
    for (int p = 1; p <= 3; ++p) {
      std::vector<Agent> agents;
      for (int j = n; j >= 1; --j) agents.push_back(j);
      EXPECT_EQ(pessimistic_bound(serial_dictatorship_order(agents, p), n), power(n, p) - p * (n - 1));
    }
  }
  EXPECT_EQ(pessimistic_bound(serial_dictatorship_order({1}, 3), 1), 1);
}

TEST(Bounds, StrategicFormula) {
  const PickingOrder game = read_order(data_path("strategic_order.json"));
  EXPECT_EQ(strategic_bound(game, 1), 3);
  EXPECT_EQ(strategic_bound(game, 2), 3);
  EXPECT_EQ(strategic_bound(read_order(data_path("sd_n3p3_order.json")), 1), 1);
}

TEST(Bounds, ReportForInterruptedOrder) {
  const PickingOrder interrupted = read_order(data_path("interrupted_order.json"));
  const auto report = worst_case_report(
      interrupted, {BehaviorKind::kOptimistic, BehaviorKind::kOptimistic, BehaviorKind::kPessimistic});
  ASSERT_EQ(report.agents.size(), 3u);
  EXPECT_EQ(report.agents[0].bound, 9);
  EXPECT_EQ(report.agents[1].bound, 9);
  EXPECT_EQ(report.agents[2].bound, 7);
  EXPECT_EQ(report.utilitarian, 25);
  EXPECT_EQ(report.egalitarian, 9);
  EXPECT_THROW(worst_case_report(interrupted, {BehaviorKind::kOptimistic, BehaviorKind::kScripted, BehaviorKind::kOptimistic}),
               UnsupportedError);
}

TEST(Bounds, SerialDictatorshipUtilitarian) {
  EXPECT_EQ(sd_optimistic_utilitarian(2, 2), 5);
  EXPECT_EQ(sd_optimistic_utilitarian(3, 2), 16);
  EXPECT_EQ(sd_optimistic_utilitarian(1, 4), 1);
  for (int n = 1; n <= 4; ++n) {
    for (int p = 1; p <= 3; ++p) {
      std::vector<Agent> agents;
      for (int j = 1; j <= n; ++j) agents.push_back(j);
      const auto report = worst_case_report(serial_dictatorship_order(agents, p),
                                            std::vector<BehaviorKind>(static_cast<std::size_t>(n), BehaviorKind::kOptimistic));
      EXPECT_EQ(report.utilitarian, sd_optimistic_utilitarian(n, p));
    }
  }
}

TEST(Bounds, SerialDictatorshipUtilitarianExhaustiveOracle) {
  const DomainShape shape(2, 2);
  const PickingOrder order = serial_dictatorship_order({1, 2}, 2);
  long long worst = 0;
  for (std::uint64_t idx = 0; idx < 576; ++idx) {
    const Profile profile = profile_at(shape, idx);
    const auto result = run_csam(order, profile, uniform_behaviors(2, BehaviorKind::kOptimistic));
    worst = std::max(worst, utilitarian_rank(profile, result.allocation));
  }
  EXPECT_EQ(worst, 5);
}

TEST(Bounds, AllOptimisticWitness) {
  const PickingOrder sd = read_order(data_path("sd_n3p3_order.json"));
  EXPECT_EQ(all_optimistic_witness(sd), 3);
  const Agent w = all_optimistic_witness(read_order(data_path("interrupted_order.json")));
  EXPECT_TRUE(w == 1 || w == 2);
}

TEST(Bounds, EveryOrderHasAnAllOptimisticWitness) {
  for (auto [n, p] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2}, {1, 5}}) {
    for (const PickingOrder& order : all_orders(n, p)) {
      const Agent j = all_optimistic_witness(order);
      const auto& a = order.analytics().of(j);
      for (int l = a.uninterrupted_index; l <= p; ++l) ASSERT_EQ(a.slack_in(a.suborder_at(l)), 1);
      ASSERT_EQ(optimistic_bound(order, j), power(n, p));
    }
  }
}

TEST(Bounds, BoundsStayInRange) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const int p = 1 + static_cast<int>(rng() % 4);
    const PickingOrder order = random_order(n, p, rng);
    long long total = 0;
    for (Agent j = 1; j <= n; ++j) {
      for (auto b : {optimistic_bound(order, j), pessimistic_bound(order, j), strategic_bound(order, j)}) {
        ASSERT_GE(b, 1);
        ASSERT_LE(b, power(n, p));
      }
      for (int k : order.analytics().of(j).slack) total += k;
    }
    ASSERT_EQ(total, static_cast<long long>(p) * n * (n + 1) / 2);
  }
}

TEST(Bounds, SoundExhaustivelyAtTwoByTwo) {
  const DomainShape shape(2, 2);
  std::vector<Profile> profiles;
  for (std::uint64_t idx = 0; idx < 576; ++idx) profiles.push_back(profile_at(shape, idx));
  for (const PickingOrder& order : all_orders(2, 2)) {
    for (unsigned mask = 0; mask < 4; ++mask) {
      const auto kinds = mix_from_mask(2, mask);
      const auto behaviors = to_assignment(kinds);
      const auto report = worst_case_report(order, kinds);
      long long attained = 0;
      for (const Profile& profile : profiles) {
        const auto ranks = agent_ranks(profile, run_csam(order, profile, behaviors).allocation);
        for (int j = 0; j < 2; ++j) {
          ASSERT_LE(ranks[static_cast<std::size_t>(j)], report.agents[static_cast<std::size_t>(j)].bound) << order.to_string();
        }
        attained = std::max<long long>(attained, ranks[0] + ranks[1]);
      }
      // Tightness: the utilitarian worst case is reached on some profile.
      ASSERT_EQ(attained, report.utilitarian) << order.to_string() << " mask " << mask;
    }
  }
}

TEST(Bounds, SoundOnRandomInstances) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int p = 1 + static_cast<int>(rng() % 3);
    const DomainShape shape(n, p);
    const PickingOrder order = random_order(n, p, rng);
    const auto kinds = mix_from_mask(n, static_cast<unsigned>(rng()));
    const Profile profile = random_profile(shape, rng);
    const auto ranks = agent_ranks(profile, run_csam(order, profile, to_assignment(kinds)).allocation);
    for (Agent j = 1; j <= n; ++j) {
      ASSERT_LE(ranks[static_cast<std::size_t>(j - 1)], bound_for(order, j, kinds[static_cast<std::size_t>(j - 1)]));
    }
  }
}

TEST(Bounds, StrategicRecursionEqualsSlackProduct) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int p = 1 + static_cast<int>(rng() % 4);
    const PickingOrder order = random_order(n, p, rng);
    const auto products = detail::strategic_products_by_recursion(order);
    ASSERT_EQ(products.size(), static_cast<std::size_t>(n));
    for (Agent j = 1; j <= n; ++j) {
      long long prod = 1;
      for (int k : order.analytics().of(j).slack) prod *= k;
      ASSERT_EQ(products[static_cast<std::size_t>(j - 1)], prod);
      ASSERT_EQ(strategic_bound(order, j), power(n, p) + 1 - prod);
    }
  }
}

TEST(Search, TwoByTwoOptimisticUtilitarian) {
  const auto result = search_orders(2, 2, {BehaviorKind::kOptimistic, BehaviorKind::kOptimistic}, Objective::kUtilitarian,
                                    SearchMode::exhaustive());
  EXPECT_EQ(result.score, 5);
  EXPECT_EQ(result.order.to_string(), "(1,1)(1,2)(2,1)(2,2)");
}

TEST(Search, ThreeByTwoPessimisticEgalitarian) {
  const std::vector<BehaviorKind> pess(3, BehaviorKind::kPessimistic);
  const auto result = search_orders(3, 2, pess, Objective::kEgalitarian, SearchMode::exhaustive());
  EXPECT_EQ(result.score, 7);
  EXPECT_EQ(worst_case_report(balanced_order({1, 2, 3}, 2), pess).egalitarian, 7);
  // Brute-force oracle over all 720 orders.
  long long best = std::numeric_limits<long long>::max();
  for (const PickingOrder& order : all_orders(3, 2)) best = std::min(best, worst_case_report(order, pess).egalitarian);
  EXPECT_EQ(best, 7);
}

TEST(Search, SingleAgent) {
  const auto result = search_orders(1, 1, {BehaviorKind::kOptimistic}, Objective::kUtilitarian, SearchMode::exhaustive());
  EXPECT_EQ(result.score, 1);
  EXPECT_EQ(result.order.round_count(), 1);
}

TEST(Search, RefusesOverBudgetAndRandomModeIsDeterministic) {
  const std::vector<BehaviorKind> opt(3, BehaviorKind::kOptimistic);
  EXPECT_THROW(search_orders(3, 3, opt, Objective::kUtilitarian, SearchMode::exhaustive(1000)), CapacityError);
  const auto a = search_orders(3, 3, opt, Objective::kUtilitarian, SearchMode::random(5, 2000));
  const auto b = search_orders(3, 3, opt, Objective::kUtilitarian, SearchMode::random(5, 2000));
  EXPECT_EQ(a.order, b.order);
  EXPECT_EQ(a.score, b.score);
  EXPECT_GE(a.score, sd_optimistic_utilitarian(3, 3));
}

TEST(Audit, InterrupterOrderDerivedBounds) {
  const auto audit = audit_interrupter_order(3, 4);
  EXPECT_EQ(audit.order, interrupter_order(3, 4));
  ASSERT_EQ(audit.derived.agents.size(), 3u);
  EXPECT_EQ(audit.derived.agents[0].bound, 81);
  EXPECT_EQ(audit.derived.agents[1].bound, 80);
  EXPECT_EQ(audit.derived.agents[2].bound, 79);
  EXPECT_EQ(audit.claimed_majority_bound, 75);
  EXPECT_EQ(audit.claimed_interrupter_bound, 66);
  EXPECT_FALSE(audit.claim_matches);
  EXPECT_FALSE(audit.note.empty());
}
