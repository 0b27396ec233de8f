#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "catalloc/adversarial.hpp"
#include "catalloc/mallows.hpp"
#include "catalloc/mechanism.hpp"
#include "catalloc/spne.hpp"

using namespace catalloc;

namespace {

Preference shuffled(const DomainShape& shape, std::mt19937_64& rng) {
  std::vector<BundleIndex> order(shape.bundle_count());
  std::iota(order.begin(), order.end(), BundleIndex{0});
  std::shuffle(order.begin(), order.end(), rng);
  return Preference(shape, order);
}

Profile random_profile(const DomainShape& shape, std::mt19937_64& rng) {
  std::vector<Preference> prefs;
  for (int j = 0; j < shape.agent_count(); ++j) prefs.push_back(shuffled(shape, rng));
  return Profile(shape, prefs);
}

std::vector<Agent> first_agents(int n) {
  std::vector<Agent> out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), 1);
  return out;
}

void BM_CsamOptimistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DomainShape shape(n, 2);
  std::mt19937_64 rng(1);
  const Profile profile = random_profile(shape, rng);
  const PickingOrder order = balanced_order(first_agents(n), 2);
  const auto behaviors = uniform_behaviors(n, BehaviorKind::kOptimistic);
  for (auto _ : state) benchmark::DoNotOptimize(run_csam(order, profile, behaviors));
}
BENCHMARK(BM_CsamOptimistic)->Arg(3)->Arg(8)->Arg(16);

void BM_CsamPessimistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DomainShape shape(n, 2);
  std::mt19937_64 rng(2);
  const Profile profile = random_profile(shape, rng);
  const PickingOrder order = balanced_order(first_agents(n), 2);
  const auto behaviors = uniform_behaviors(n, BehaviorKind::kPessimistic);
  for (auto _ : state) benchmark::DoNotOptimize(run_csam(order, profile, behaviors));
}
BENCHMARK(BM_CsamPessimistic)->Arg(3)->Arg(8)->Arg(16);

void BM_Spne(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const DomainShape shape(2, p);
  std::mt19937_64 rng(3);
  const Profile profile = random_profile(shape, rng);
  const PickingOrder order = balanced_order({1, 2}, p);
  for (auto _ : state) benchmark::DoNotOptimize(solve_spne(order, profile));
}
BENCHMARK(BM_Spne)->Arg(2)->Arg(4)->Arg(6)->Arg(8);

void BM_SampleMallows(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DomainShape shape(n, 2);
  std::mt19937_64 rng(4);
  const MallowsParams params{shuffled(shape, rng), 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(sample_mallows(params, rng));
}
BENCHMARK(BM_SampleMallows)->Arg(3)->Arg(8)->Arg(11);

void BM_WorstCaseProfile(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PickingOrder order = serial_dictatorship_order(first_agents(n), 3);
  std::vector<BehaviorKind> kinds(static_cast<std::size_t>(n), BehaviorKind::kOptimistic);
  for (std::size_t j = 0; j < kinds.size(); j += 2) kinds[j] = BehaviorKind::kPessimistic;
  for (auto _ : state) benchmark::DoNotOptimize(construct_worst_case(order, kinds));
}
BENCHMARK(BM_WorstCaseProfile)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
