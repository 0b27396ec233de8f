#pragma once

// Axiom checks for direct mechanisms (profile in, allocation out) on small
// domains, and the reference mechanisms they are run against.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "catalloc/domain.hpp"

namespace catalloc {

struct DirectMechanism {
  std::string name;
  std::function<Allocation(const Profile&)> run;
};

// perm[x-1] is the new label of item x in the permuted category.
Bundle apply_category_permutation(const Bundle& bundle, Category c, const std::vector<Item>& perm);
Preference apply_category_permutation(const Preference& pref, Category c, const std::vector<Item>& perm);
Profile apply_category_permutation(const Profile& profile, Category c, const std::vector<Item>& perm);
Allocation apply_category_permutation(const Allocation& alloc, Category c, const std::vector<Item>& perm);

struct CheckMode {
  enum class Kind { kExhaustive, kSampled };
  Kind kind = Kind::kExhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  // Exhaustive mode refuses when the number of mechanism evaluations it
  // would need exceeds this.
  std::uint64_t budget = 20'000'000;

  static CheckMode exhaustive(std::uint64_t budget = 20'000'000) { return {Kind::kExhaustive, 0, 0, budget}; }
  static CheckMode sampled(std::uint64_t samples, std::uint64_t seed) { return {Kind::kSampled, samples, seed, 0}; }
};

struct Counterexample {
  Profile profile;
  Agent agent = 0;                       // deviating agent (manipulation axioms)
  std::optional<Preference> deviation;   // her misreport
  Category category = 0;                 // permuted category (neutrality)
  std::vector<Item> permutation;
  // Manipulation axioms: outcome before / after the misreport. Neutrality:
  // M(f(P)) / f(M(P)). Pareto: f(P) / a dominating allocation.
  Allocation before;
  Allocation after;
};

struct AxiomVerdict {
  std::string axiom;
  bool pass = true;
  std::optional<Counterexample> counterexample;
  CheckMode::Kind coverage = CheckMode::Kind::kExhaustive;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t cases = 0;  // (profile, deviation) pairs examined

  // "exhaustive" or "sampled:COUNT:SEED"
  std::string coverage_label() const;
};

AxiomVerdict check_strategy_proofness(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode);
AxiomVerdict check_non_bossiness(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode);
AxiomVerdict check_category_wise_neutrality(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode);
AxiomVerdict check_pareto_optimality(const DirectMechanism& mech, const DomainShape& shape, const CheckMode& mode);

// Re-runs the mechanism on the recorded counterexample and reports whether
// it is still a violation of the verdict's axiom.
bool confirm_counterexample(const DirectMechanism& mech, const AxiomVerdict& verdict);

// Every allocation of the shape; refuses (CapacityError) above `limit`.
std::vector<Allocation> all_allocations(const DomainShape& shape, std::uint64_t limit = 1'000'000);

// Profile number `index` in the enumeration where each agent's ranking is a
// lexicographic permutation index, agent 1 most significant.
Profile profile_at(const DomainShape& shape, std::uint64_t index);

DirectMechanism sd_direct(std::vector<Agent> agent_order);
// Maximizes sum_j (n^p - i_j)(1 + (1/(2 n^p))^j), i_j the rank of j's bundle,
// in exact integer arithmetic.
DirectMechanism welfare_maximizer();
// Agent 1 takes her top bundle. The rest follow 2..n when her second-ranked
// bundle has the same first component as her top one, n..2 otherwise.
DirectMechanism bossy_conditional_sd();
// Agent 1 takes her top bundle. The rest follow 2..n when that bundle is
// (1, ..., 1), n..2 otherwise.
DirectMechanism non_neutral_conditional_sd();
DirectMechanism constant_mechanism(Allocation allocation);

}  // namespace catalloc
