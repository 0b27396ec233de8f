#include <gtest/gtest.h>

#include <limits>

#include "catalloc/axioms.hpp"
#include "catalloc/errors.hpp"
#include "catalloc/mechanism.hpp"
#include "support.hpp"

using namespace catalloc;
using namespace testing_support;

namespace {

Profile reference_profile() { return read_profile(data_path("reference_profile.json")); }

std::vector<std::vector<bool>> availability(int n, const std::vector<std::vector<Item>>& sets) {
  std::vector<std::vector<bool>> out;
  for (const auto& s : sets) {
    std::vector<bool> mask(static_cast<std::size_t>(n + 1), false);
    for (Item x : s) mask[static_cast<std::size_t>(x)] = true;
    out.push_back(mask);
  }
  return out;
}

// Independent oracle: enumerate every bundle, keep those compatible with the
// context and fixing category c to x, return the worst rank.
int worst_rank_with(const Preference& pref, const DomainShape& shape, const PickContext& ctx, Category c, Item x) {
  int worst = 0;
  for (BundleIndex b = 0; b < shape.bundle_count(); ++b) {
    bool ok = shape.item_of(b, c) == x;
    for (Category d = 1; d <= shape.category_count() && ok; ++d) {
      if (d == c) continue;
      const Item own = ctx.own_picks[static_cast<std::size_t>(d - 1)];
      const Item y = shape.item_of(b, d);
      ok = own != 0 ? y == own : ctx.available[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(y)];
    }
    if (ok) worst = std::max(worst, pref.rank(b));
  }
  return worst;
}

}  // namespace

TEST(Csam, ReferenceProfileSerialDictatorship) {
  const Profile profile = reference_profile();
  const auto result = run_csam(read_order(data_path("sd_n3p2_order.json")), profile, uniform_behaviors(3, BehaviorKind::kOptimistic));
  EXPECT_EQ(result.allocation.to_string(), "{1->12, 2->21, 3->33}");
  EXPECT_EQ(agent_ranks(profile, result.allocation), (std::vector<int>{1, 3, 7}));
}

TEST(Csam, InterruptedOrderMixedBehaviors) {
  const Profile profile = reference_profile();
  const PickingOrder order = read_order(data_path("interrupted_order.json"));
  const BehaviorAssignment behaviors{Behavior::optimistic(), Behavior::optimistic(), Behavior::pessimistic()};
  const auto result = run_csam(order, profile, behaviors);
  EXPECT_EQ(result.allocation.to_string(), "{1->11, 2->22, 3->33}");
  EXPECT_EQ(agent_ranks(profile, result.allocation), (std::vector<int>{9, 9, 7}));

  const TraceRound& r2 = result.trace.rounds.at(1);
  EXPECT_EQ(r2.item, 2);
  ASSERT_TRUE(r2.optimistic_target.has_value());
  EXPECT_EQ(r2.optimistic_target->to_string(), "32");

  const TraceRound& r3 = result.trace.rounds.at(2);
  EXPECT_EQ(r3.item, 3);
  ASSERT_EQ(r3.worst_cases.size(), 2u);
  EXPECT_EQ(r3.worst_cases[0].worst.to_string(), "23");
  EXPECT_EQ(r3.worst_cases[1].worst.to_string(), "31");
  EXPECT_EQ(r3.available, (std::vector<std::vector<Item>>{{2, 3}, {1, 3}}));
}

TEST(Csam, SingleAgentGetsTopBundle) {
  std::mt19937_64 rng(3);
  const DomainShape shape(1, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const Profile profile(shape, {Preference(shape, {0})});
    for (auto kind : {BehaviorKind::kOptimistic, BehaviorKind::kPessimistic}) {
      const auto result = run_csam(random_order(1, 3, rng), profile, uniform_behaviors(1, kind));
      EXPECT_EQ(rank_of(profile.of(1), result.allocation.of(1)), 1);
    }
  }
}

TEST(Choice, OptimisticExamples) {
  const Profile profile = reference_profile();
  const std::vector<Item> none{0, 0};
  {
    const auto avail = availability(3, {{2, 3}, {1, 2, 3}});
    EXPECT_EQ(optimistic_choice(profile.of(2), PickContext{avail, none}, 2), 2);
  }
  {
    // agent 2 under SD after agent 1 took 12
    const auto avail = availability(3, {{2, 3}, {1, 3}});
    EXPECT_EQ(optimistic_choice(profile.of(2), PickContext{avail, none}, 1), 2);
  }
  {
    const auto avail = availability(3, {{1, 2, 3}, {1, 2, 3}});
    EXPECT_EQ(optimistic_choice(profile.of(3), PickContext{avail, none}, 2), 3);
  }
}

TEST(Choice, PessimisticExamples) {
  const Profile profile = reference_profile();
  const std::vector<Item> none{0, 0};
  const auto avail = availability(3, {{2, 3}, {1, 3}});
  EXPECT_EQ(pessimistic_choice(profile.of(3), PickContext{avail, none}, 1), 3);

  const DomainShape tiny(2, 1);
  const Preference pref(tiny, {0, 1});
  const std::vector<Item> none1{0};
  const auto both = availability(2, {{1, 2}});
  EXPECT_EQ(pessimistic_choice(pref, PickContext{both, none1}, 1), 1);
  const auto one = availability(2, {{2}});
  EXPECT_EQ(pessimistic_choice(pref, PickContext{one, none1}, 1), 2);
}

TEST(Choice, PessimisticMatchesEnumerationOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int p = 1 + static_cast<int>(rng() % 3);
    const DomainShape shape(n, p);
    const Preference pref = random_preference(shape, rng);
    std::vector<std::vector<Item>> sets(static_cast<std::size_t>(p));
    std::vector<Item> own(static_cast<std::size_t>(p), 0);
    for (Category d = 1; d <= p; ++d) {
      for (Item x = 1; x <= n; ++x) {
        if (rng() % 3 != 0) sets[static_cast<std::size_t>(d - 1)].push_back(x);
      }
      if (sets[static_cast<std::size_t>(d - 1)].empty()) sets[static_cast<std::size_t>(d - 1)].push_back(1);
    }
    const Category c = 1 + static_cast<Category>(rng() % static_cast<unsigned>(p));
    for (Category d = 1; d <= p; ++d) {
      if (d != c && rng() % 2 == 0) own[static_cast<std::size_t>(d - 1)] = 1 + static_cast<Item>(rng() % static_cast<unsigned>(n));
    }
    const auto avail = availability(n, sets);
    const PickContext ctx{avail, own};

    int best_worst = std::numeric_limits<int>::max();
    for (Item x : sets[static_cast<std::size_t>(c - 1)]) best_worst = std::min(best_worst, worst_rank_with(pref, shape, ctx, c, x));
    const Item chosen = pessimistic_choice(pref, ctx, c);
    ASSERT_EQ(worst_rank_with(pref, shape, ctx, c, chosen), best_worst);
    for (const WorstCase& wc : pessimistic_worst_cases(pref, ctx, c)) {
      ASSERT_EQ(wc.worst_rank, worst_rank_with(pref, shape, ctx, c, wc.item));
    }
  }
}

TEST(Csam, ScriptedPickOfTakenItemNamesTheRound) {
  const Profile profile = reference_profile();
  const PickingOrder order = read_order(data_path("sd_n3p2_order.json"));
  BehaviorAssignment behaviors = uniform_behaviors(3, BehaviorKind::kOptimistic);
  behaviors[1] = Behavior::scripted({2, 1});
  behaviors[2] = Behavior::scripted({2, 3});  // item 2 of D1 went to agent 2 in round 3
  try {
    run_csam(order, profile, behaviors);
    FAIL() << "expected ExecutionError";
  } catch (const ExecutionError& e) {
    EXPECT_NE(std::string(e.what()).find("round 5"), std::string::npos) << e.what();
  }
  behaviors[2] = Behavior::scripted({1});
  EXPECT_THROW(run_csam(order, profile, behaviors), ValidationError);
  EXPECT_THROW(run_csam(order, profile, uniform_behaviors(2, BehaviorKind::kOptimistic)), ValidationError);
}

TEST(Csam, ScriptedAgentsFollowTheirScript) {
  const Profile profile = reference_profile();
  const PickingOrder order = read_order(data_path("interrupted_order.json"));
  // Suborders: agent 1 (1,2), agent 2 (2,1), agent 3 (1,2).
  const BehaviorAssignment behaviors{Behavior::scripted({3, 3}), Behavior::scripted({1, 2}), Behavior::scripted({1, 2})};
  const auto result = run_csam(order, profile, behaviors);
  EXPECT_EQ(result.allocation.to_string(), "{1->33, 2->21, 3->12}");
}

TEST(Messages, CountingRule) {
  EXPECT_EQ(message_count(ExecutionTrace{3, 2, {}}), 21u);
  EXPECT_EQ(message_count(ExecutionTrace{1, 1, {}}), 2u);
  EXPECT_EQ(message_count(ExecutionTrace{2, 3, {}}), 14u);
}

TEST(Csam, SerialDictatorshipEqualsDirectExhaustive) {
  const DomainShape shape(2, 2);
  for (const std::vector<Agent>& agents : {std::vector<Agent>{1, 2}, std::vector<Agent>{2, 1}}) {
    const PickingOrder order = serial_dictatorship_order(agents, 2);
    for (std::uint64_t idx = 0; idx < 576; ++idx) {
      const Profile profile = profile_at(shape, idx);
      ASSERT_EQ(run_csam(order, profile, uniform_behaviors(2, BehaviorKind::kOptimistic)).allocation,
                direct_serial_dictatorship(agents, profile));
    }
  }
}

TEST(Csam, SerialDictatorshipEqualsDirectRandomized) {
  std::mt19937_64 rng(8);
  const DomainShape shape(3, 2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Agent> agents{1, 2, 3};
    std::shuffle(agents.begin(), agents.end(), rng);
    const Profile profile = random_profile(shape, rng);
    ASSERT_EQ(run_csam(serial_dictatorship_order(agents, 2), profile, uniform_behaviors(3, BehaviorKind::kOptimistic)).allocation,
              direct_serial_dictatorship(agents, profile));
  }
}

TEST(Csam, OutcomesAreAllocationsAndTracesAreConsistent) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int p = 1 + static_cast<int>(rng() % 3);
    if (n * p > 12) continue;
    const DomainShape shape(n, p);
    const PickingOrder order = random_order(n, p, rng);
    const Profile profile = random_profile(shape, rng);
    BehaviorAssignment behaviors;
    for (int j = 0; j < n; ++j) behaviors.push_back(rng() % 2 ? Behavior::optimistic() : Behavior::pessimistic());
    const auto result = run_csam(order, profile, behaviors);
    ASSERT_TRUE(validate_allocation(shape, result.allocation).ok());
    ASSERT_EQ(result.trace.rounds.size(), static_cast<std::size_t>(n * p));
    for (const TraceRound& r : result.trace.rounds) {
      const auto& avail = r.available[static_cast<std::size_t>(r.pick.category - 1)];
      ASSERT_TRUE(std::find(avail.begin(), avail.end(), r.item) != avail.end());
      ASSERT_EQ(result.allocation.of(r.pick.agent)[r.pick.category], r.item);
    }
  }
}

TEST(Csam, AllOptimisticRunsCommuteWithCategoryRelabeling) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const DomainShape shape(3, 2);
    const PickingOrder order = random_order(3, 2, rng);
    const Profile profile = random_profile(shape, rng);
    std::vector<Item> perm{1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    const Category c = 1 + static_cast<Category>(rng() % 2);
    const auto all_opt = uniform_behaviors(3, BehaviorKind::kOptimistic);
    const Allocation base = run_csam(order, profile, all_opt).allocation;
    const Allocation moved = run_csam(order, apply_category_permutation(profile, c, perm), all_opt).allocation;
    ASSERT_EQ(moved, apply_category_permutation(base, c, perm));
  }
}
