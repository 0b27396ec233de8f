#pragma once

// Mallows-distributed preferences and the expected-rank experiment built on
// them.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "catalloc/domain.hpp"
#include "catalloc/mechanism.hpp"

namespace catalloc {

// Number of bundle pairs the two rankings order differently.
std::uint64_t kendall_tau(const Preference& v, const Preference& w);

struct MallowsParams {
  Preference center;
  double phi = 1.0;  // in (0, 1]; 1 is uniform
};

void check_mallows(const MallowsParams& params);

// Repeated insertion: the k-th element of the center is inserted r places
// above the bottom of the partial ranking with probability phi^r / Z_k.
Preference sample_mallows(const MallowsParams& params, std::mt19937_64& rng);

// phi^kendall(v, center) / Z; refuses (CapacityError) above 8 bundles.
double mallows_pmf(const MallowsParams& params, const Preference& v);
inline constexpr std::size_t kMaxPmfBundles = 8;

enum class OrderFamily { kSerialDictatorship, kBalanced };
std::string family_tag(OrderFamily family);  // "sd", "balanced"

struct MechanismConfig {
  OrderFamily family = OrderFamily::kSerialDictatorship;
  BehaviorKind behavior = BehaviorKind::kOptimistic;  // shared by all agents
};

// {sd, balanced} x {optimistic, pessimistic}
std::vector<MechanismConfig> default_mechanisms();

struct ExperimentConfig {
  int categories = 2;
  std::vector<int> agents;
  std::vector<double> phis;
  std::vector<MechanismConfig> mechanisms = default_mechanisms();
  std::uint64_t samples = 2000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct ExperimentRow {
  MechanismConfig mechanism;
  int agents = 0;
  int categories = 0;
  double phi = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double mean_utilitarian = 0;
  double ci_utilitarian = 0;  // 1.96 s / sqrt(m)
  double mean_egalitarian = 0;
  double ci_egalitarian = 0;
  // Recorded per-agent ranks above that agent's worst-case bound.
  std::uint64_t bound_violations = 0;
};

// One row per (n, phi, mechanism), in that nesting order. Each replicate
// draws a uniform center, n i.i.d. Mallows preferences, and runs every
// configured mechanism on that same profile. Replicate streams are seeded
// from (seed, n, phi index, replicate index), so results do not depend on
// the thread count.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

inline constexpr const char* kExperimentCsvHeader =
    "mechanism,behavior,n,p,phi,samples,seed,mean_utilitarian,ci_utilitarian,mean_egalitarian,ci_egalitarian";
void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace catalloc
